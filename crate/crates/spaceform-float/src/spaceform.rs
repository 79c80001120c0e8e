//! Geometry of the Euclidean model `(B^n(lambda), g^lambda)`: distances,
//! volume densities, the exponential map at the origin, conversions between
//! Euclidean and curved quantities at boundary points, and the projective
//! motions of the model.
//!
//! Curvature conventions: `lambda < 0` is the projective (Beltrami–Klein)
//! ball of radius `1/sqrt(-lambda)`, `lambda = 0` is flat space, and
//! `lambda > 0` is the gnomonic chart of an open hemisphere. In every case
//! straight chords are geodesics, so convexity is ordinary Euclidean
//! convexity.

use crate::{Error, Result};
use nalgebra::DMatrix;

/// A real space form: curvature and dimension, plus the Euclidean radius cap
/// applied in the positively curved chart (where the model covers an open
/// hemisphere and coordinates blow up towards the equator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    pub lambda: f64,
    pub n: usize,
    pub radius_cap: f64,
}

/// Point of the model, in Cartesian model coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

/// Tangent vector at a base point, identified with `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vec<f64>,
}

/// Euclidean unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Point {
        Point { coords }
    }

    pub fn origin(n: usize) -> Point {
        Point { coords: vec![0.0; n] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }
}

impl Direction {
    /// Normalizes `coords`; fails on (near-)zero input.
    pub fn new(coords: Vec<f64>) -> Result<Direction> {
        let n = norm(&coords);
        if !n.is_finite() || n < 1e-14 {
            return Err(Error::InvalidBody("direction must be nonzero".into()));
        }
        Ok(Direction { coords: coords.iter().map(|c| c / n).collect() })
    }

    /// Unit vector at `angle` in the plane.
    pub fn from_angle(angle: f64) -> Direction {
        Direction { coords: vec![angle.cos(), angle.sin()] }
    }

    pub fn axis(n: usize, i: usize) -> Direction {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Direction { coords: c }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Polar angle, planar directions only.
    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.coords.len(), 2);
        self.coords[1].atan2(self.coords[0])
    }

    pub fn opposite(&self) -> Direction {
        Direction { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `tan^lambda`: `tanh(sqrt(-lambda) a)/sqrt(-lambda)` for negative
/// curvature, the identity for `lambda = 0`, `tan(sqrt(lambda) a)/sqrt(lambda)`
/// for positive curvature.
pub fn tan_lambda(alpha: f64, lambda: f64) -> Result<f64> {
    if lambda < 0.0 {
        let s = (-lambda).sqrt();
        Ok((s * alpha).tanh() / s)
    } else if lambda == 0.0 {
        Ok(alpha)
    } else {
        let s = lambda.sqrt();
        if alpha.abs() >= std::f64::consts::FRAC_PI_2 / s {
            return Err(Error::TanDomain(format!(
                "|alpha| = {} is not below pi/(2 sqrt(lambda)) = {}",
                alpha.abs(),
                std::f64::consts::FRAC_PI_2 / s
            )));
        }
        Ok((s * alpha).tan() / s)
    }
}

/// Inverse of [`tan_lambda`] on the same branch.
pub fn atan_lambda(r: f64, lambda: f64) -> Result<f64> {
    if lambda < 0.0 {
        let s = (-lambda).sqrt();
        if (s * r).abs() >= 1.0 {
            return Err(Error::TanDomain(format!(
                "|r| = {} reaches the model radius {}",
                r.abs(),
                1.0 / s
            )));
        }
        Ok((s * r).atanh() / s)
    } else if lambda == 0.0 {
        Ok(r)
    } else {
        let s = lambda.sqrt();
        Ok((s * r).atan() / s)
    }
}

impl SpaceForm {
    pub fn new(lambda: f64, n: usize) -> Result<SpaceForm> {
        if n < 2 {
            return Err(Error::InvalidBody(format!("dimension {n} < 2")));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidBody("non-finite curvature".into()));
        }
        Ok(SpaceForm { lambda, n, radius_cap: 10.0 })
    }

    pub fn with_radius_cap(mut self, cap: f64) -> SpaceForm {
        self.radius_cap = cap;
        self
    }

    /// Euclidean radius of the model domain: `1/sqrt(-lambda)` when
    /// `lambda < 0`, infinite otherwise.
    pub fn model_radius(&self) -> f64 {
        if self.lambda < 0.0 {
            1.0 / (-self.lambda).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Largest Euclidean norm admitted for points: the model radius, further
    /// capped in the positively curved chart.
    pub fn admissible_radius(&self) -> f64 {
        if self.lambda > 0.0 {
            self.radius_cap
        } else {
            self.model_radius()
        }
    }

    pub fn origin(&self) -> Point {
        Point::origin(self.n)
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.n {
            return Err(Error::InvalidBody(format!(
                "point dimension {} does not match space dimension {}",
                p.dim(),
                self.n
            )));
        }
        let r = p.norm();
        if !r.is_finite() || r >= self.admissible_radius() {
            return Err(Error::OutsideModel(format!(
                "|p| = {r} exceeds the admissible radius {}",
                self.admissible_radius()
            )));
        }
        Ok(())
    }

    /// Metric tensor `g^lambda` evaluated on two tangent vectors at the same
    /// base point.
    pub fn metric_eval(&self, x: &TangentVector, y: &TangentVector) -> f64 {
        debug_assert_eq!(x.base, y.base);
        let p = x.base.coords();
        let w = 1.0 + self.lambda * dot(p, p);
        dot(&x.components, &y.components) / w
            - self.lambda * dot(&x.components, p) * dot(&y.components, p) / (w * w)
    }

    /// Geodesic distance from `p` to the origin: `atan_lambda(|p|)`.
    pub fn distance_to_origin(&self, p: &Point) -> f64 {
        atan_lambda(p.norm(), self.lambda).expect("point inside model")
    }

    /// Geodesic distance between two model points.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        let l = self.lambda;
        if l == 0.0 {
            let d: f64 = p
                .coords()
                .iter()
                .zip(q.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            return d.sqrt();
        }
        let num = 1.0 + l * dot(p.coords(), q.coords());
        let den = ((1.0 + l * dot(p.coords(), p.coords()))
            * (1.0 + l * dot(q.coords(), q.coords())))
        .sqrt();
        let c = num / den;
        if l < 0.0 {
            let s = (-l).sqrt();
            c.max(1.0).acosh() / s
        } else {
            let s = l.sqrt();
            c.clamp(-1.0, 1.0).acos() / s
        }
    }

    /// Density of the curved volume with respect to Euclidean volume.
    pub fn volume_density(&self, p: &Point) -> f64 {
        let w = 1.0 + self.lambda * dot(p.coords(), p.coords());
        w.powf(-(self.n as f64 + 1.0) / 2.0)
    }

    /// Exponential map at the origin.
    pub fn exp_origin(&self, x: &TangentVector) -> Result<Point> {
        debug_assert!(x.base.coords().iter().all(|&c| c == 0.0));
        let r = norm(&x.components);
        if r == 0.0 {
            return Ok(self.origin());
        }
        let scale = tan_lambda(r, self.lambda)? / r;
        Ok(Point::new(x.components.iter().map(|c| c * scale).collect()))
    }

    /// Curved outer unit normal from the Euclidean one at a boundary point.
    ///
    /// The result has unit `g^lambda`-norm and is `g^lambda`-orthogonal to
    /// the Euclidean tangent hyperplane of `ne`.
    pub fn normal_convert(&self, x: &Point, ne: &Direction) -> TangentVector {
        let l = self.lambda;
        let xc = x.coords();
        let xn = dot(xc, ne.coords());
        let factor = ((1.0 + l * dot(xc, xc)) / (1.0 + l * xn * xn)).sqrt();
        let comps = ne
            .coords()
            .iter()
            .zip(xc)
            .map(|(nv, xv)| factor * (nv + l * xn * xv))
            .collect();
        TangentVector { base: x.clone(), components: comps }
    }

    /// Density of the curved boundary measure with respect to the Euclidean
    /// surface measure at a boundary point with Euclidean normal `ne`.
    pub fn boundary_density(&self, x: &Point, ne: &Direction) -> f64 {
        let l = self.lambda;
        let xc = x.coords();
        let xn = dot(xc, ne.coords());
        ((1.0 + l * xn * xn) / (1.0 + l * dot(xc, xc)).powi(self.n as i32)).sqrt()
    }

    /// Curved Gauss–Kronecker curvature from the Euclidean one.
    pub fn curvature_convert(&self, he: f64, x: &Point, ne: &Direction) -> f64 {
        let l = self.lambda;
        let xc = x.coords();
        let xn = dot(xc, ne.coords());
        he * ((1.0 + l * dot(xc, xc)) / (1.0 + l * xn * xn))
            .powf((self.n as f64 + 1.0) / 2.0)
    }

    /// The projective translation of the model moving the origin to `a`.
    ///
    /// An isometry of `(B^n(lambda), g^lambda)`; for `lambda = 0` the
    /// ordinary translation.
    pub fn klein_translate(&self, a: &Point, x: &Point) -> Point {
        self.translation(a).apply(x)
    }

    /// The translation as a reusable [`Motion`].
    pub fn translation(&self, a: &Point) -> Motion {
        Motion::translation(self, a)
    }
}

/// A projective self-map of the model, `x -> (P x + b) / (q . x + 1)`.
///
/// Covers rotations about the origin, the translations moving the origin,
/// and their compositions. Geodesics (chords) map to geodesics; a motion
/// built from rotations and translations preserves the curved metric.
#[derive(Debug, Clone)]
pub struct Motion {
    linear: DMatrix<f64>,
    offset: Vec<f64>,
    proj: Vec<f64>,
}

impl Motion {
    pub fn identity(n: usize) -> Motion {
        Motion {
            linear: DMatrix::identity(n, n),
            offset: vec![0.0; n],
            proj: vec![0.0; n],
        }
    }

    /// Rotation (or any linear map) about the origin.
    pub fn linear(mat: DMatrix<f64>) -> Motion {
        let n = mat.nrows();
        Motion { linear: mat, offset: vec![0.0; n], proj: vec![0.0; n] }
    }

    pub fn rotation2(angle: f64) -> Motion {
        let (s, c) = angle.sin_cos();
        Motion::linear(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    /// Translation moving the origin to `a`. Splitting `x` into components
    /// along and across `a`, the image is
    /// `(a + x_par + sqrt(1 + lambda |a|^2) x_perp) / (1 - lambda a.x)`,
    /// with the denominator sign fixed by distance preservation.
    pub fn translation(space: &SpaceForm, a: &Point) -> Motion {
        let n = space.n;
        let ac = a.coords();
        let aa = dot(ac, ac);
        if aa == 0.0 {
            return Motion::identity(n);
        }
        let s = (1.0 + space.lambda * aa).sqrt();
        let mut linear = DMatrix::identity(n, n) * s;
        for i in 0..n {
            for j in 0..n {
                linear[(i, j)] += (1.0 - s) * ac[i] * ac[j] / aa;
            }
        }
        Motion {
            linear,
            offset: ac.to_vec(),
            proj: ac.iter().map(|c| -space.lambda * c).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    fn denom(&self, x: &[f64]) -> f64 {
        dot(&self.proj, x) + 1.0
    }

    pub fn apply(&self, x: &Point) -> Point {
        let w = self.denom(x.coords());
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut v = self.offset[i];
            for j in 0..n {
                v += self.linear[(i, j)] * x.coords()[j];
            }
            out[i] = v / w;
        }
        Point::new(out)
    }

    /// Jacobian matrix at `x`.
    pub fn jacobian(&self, x: &Point) -> DMatrix<f64> {
        let n = self.dim();
        let w = self.denom(x.coords());
        let y = self.apply(x);
        let mut jac = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                jac[(i, j)] = self.linear[(i, j)] / w - y.coords()[i] * self.proj[j] / w;
            }
        }
        jac
    }

    /// Second derivative contracted twice with `u`: `d^2 m(x)[u, u]`.
    pub fn second_derivative(&self, x: &Point, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let w = self.denom(x.coords());
        let qu = dot(&self.proj, u);
        let y = self.apply(x);
        let mut pu = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                pu[i] += self.linear[(i, j)] * u[j];
            }
        }
        (0..n)
            .map(|i| 2.0 * qu / (w * w) * (y.coords()[i] * qu - pu[i]))
            .collect()
    }

    /// The `(n+1) x (n+1)` homogeneous matrix `[[P, b], [q^T, 1]]`.
    pub fn homogeneous(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut hm = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                hm[(i, j)] = self.linear[(i, j)];
            }
            hm[(i, n)] = self.offset[i];
            hm[(n, i)] = self.proj[i];
        }
        hm[(n, n)] = 1.0;
        hm
    }

    /// Composition `self` after `other`.
    pub fn compose(&self, other: &Motion) -> Motion {
        Motion::from_homogeneous(self.homogeneous() * other.homogeneous())
    }

    pub fn inverse(&self) -> Motion {
        let inv = self
            .homogeneous()
            .try_inverse()
            .expect("projective motion is invertible");
        Motion::from_homogeneous(inv)
    }

    fn from_homogeneous(hm: DMatrix<f64>) -> Motion {
        let n = hm.nrows() - 1;
        let scale = hm[(n, n)];
        assert!(scale.abs() > 1e-300, "degenerate projective composition");
        let mut linear = DMatrix::zeros(n, n);
        let mut offset = vec![0.0; n];
        let mut proj = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                linear[(i, j)] = hm[(i, j)] / scale;
            }
            offset[i] = hm[(i, n)] / scale;
            proj[i] = hm[(n, i)] / scale;
        }
        Motion { linear, offset, proj }
    }
}

// ---------------------------------------------------------------------------
// Closed-form radial integrals of the volume density. These carry the whole
// Fubini reduction of cap and cone volumes, and for that reason are written
// in cancellation-free arrangements.
// ---------------------------------------------------------------------------

/// `int_{r0}^{r1} t^{n-1} (1 + lambda t^2)^{-(n+1)/2} dt` for `n` in `{2, 3}`.
pub(crate) fn radial_measure(n: usize, lambda: f64, r0: f64, r1: f64) -> f64 {
    match n {
        2 => {
            let a = 1.0 + lambda * r1 * r1;
            let b = 1.0 + lambda * r0 * r0;
            let (sa, sb) = (a.sqrt(), b.sqrt());
            (r1 * r1 - r0 * r0) / (sa * sb * (sa + sb))
        }
        3 => radial_measure_3(lambda, r0, r1),
        _ => unreachable!("bodies are planar or spatial"),
    }
}

fn radial_measure_3(lambda: f64, r0: f64, r1: f64) -> f64 {
    let f = |t: f64| {
        let w = 1.0 + lambda * t * t;
        t * t / (w * w)
    };
    let span = (r1 - r0).abs();
    let x1 = lambda.abs() * r1.max(r0) * r1.max(r0);
    if x1 < 1e-3 {
        // Series in lambda t^2; truncation below 1e-15 relative here.
        let g = |r: f64| {
            let r2 = r * r;
            let l = lambda;
            r2 * r / 3.0 - 2.0 * l * r2 * r2 * r / 5.0 + 3.0 * l * l * r2 * r2 * r2 * r / 7.0
                - 4.0 * l * l * l * r2 * r2 * r2 * r2 * r / 9.0
        };
        return g(r1) - g(r0);
    }
    if span < 0.05 * (1.0 + r1.abs()) {
        return gauss7(f, r0, r1);
    }
    let anti = |r: f64| {
        let i1 = atan_lambda(r, lambda).expect("radius inside model");
        (i1 - r / (1.0 + lambda * r * r)) / (2.0 * lambda)
    };
    anti(r1) - anti(r0)
}

/// 7-point Gauss–Legendre; used only on short subintervals of smooth radial
/// integrands where it is exact to machine precision.
pub(crate) fn gauss7<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 7] = [
        -0.949_107_912_342_758_5,
        -0.741_531_185_599_394_4,
        -0.405_845_151_377_397_2,
        0.0,
        0.405_845_151_377_397_2,
        0.741_531_185_599_394_4,
        0.949_107_912_342_758_5,
    ];
    const W: [f64; 7] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
        0.381_830_050_505_118_9,
        0.279_705_391_489_276_7,
        0.129_484_966_168_869_7,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in X.iter().zip(W) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Antiderivative in `s` of the chord density `(c + lambda s^2)^{-3/2}`,
/// the innermost Fubini factor of planar cap volumes (`c = 1 + lambda t^2`).
pub(crate) fn chord_antiderivative_2d(lambda: f64, c: f64, s: f64) -> f64 {
    s / (c * (c + lambda * s * s).sqrt())
}

/// Antiderivative in `s` of `(c + lambda s^2)^{-2}`, the innermost Fubini
/// factor of spatial cap volumes: the standard reduction
/// `s/(2c(c + lambda s^2)) + (1/(2c)) int ds/(c + lambda s^2)`.
pub(crate) fn chord_antiderivative_3d(lambda: f64, c: f64, s: f64) -> f64 {
    let rational = s / (2.0 * c * (c + lambda * s * s));
    let x = lambda / c;
    let inv = if x.abs() * s * s < 1e-6 {
        // atan-family series keeps the lambda -> 0 limit smooth.
        (s - x * s * s * s / 3.0 + x * x * s * s * s * s * s / 5.0) / c
    } else if lambda > 0.0 {
        let k = x.sqrt();
        (k * s).atan() / (k * c)
    } else {
        let k = (-x).sqrt();
        (k * s).atanh() / (k * c)
    };
    rational + 0.5 * inv / c
}

/// Curved area of the planar region swept between the rays through `p` and
/// `q` and bounded by the segment `[p, q]`, signed by orientation.
///
/// Summed over the edges of a closed polygon this yields the exact
/// `lambda`-area of the polygon; it is the flat-space shoelace formula with
/// the radial density integrated in closed form.
pub(crate) fn edge_sector_area(lambda: f64, p: [f64; 2], q: [f64; 2]) -> f64 {
    let e = [q[0] - p[0], q[1] - p[1]];
    let ee = e[0] * e[0] + e[1] * e[1];
    if ee == 0.0 {
        return 0.0;
    }
    let t = -(p[0] * e[0] + p[1] * e[1]) / ee;
    let foot = [p[0] + t * e[0], p[1] + t * e[1]];
    let d2 = foot[0] * foot[0] + foot[1] * foot[1];
    let d = d2.sqrt();
    let scale = (p[0] * p[0] + p[1] * p[1]).max(q[0] * q[0] + q[1] * q[1]);
    if d2 <= scale * 1e-28 {
        return 0.0; // edge line passes through the origin
    }
    let eh = [foot[0] / d, foot[1] / d];
    let nh = [-eh[1], eh[0]];
    let psi_p = (p[0] * nh[0] + p[1] * nh[1]).atan2(d);
    let psi_q = (q[0] * nh[0] + q[1] * nh[1]).atan2(d);
    if lambda == 0.0 {
        return 0.5 * d2 * (psi_q.tan() - psi_p.tan());
    }
    let ld2 = lambda * d2;
    let k2 = 1.0 / (1.0 + ld2);
    let k = k2.sqrt();
    let anti = |psi: f64| {
        let (sp, cp) = psi.sin_cos();
        let root = (1.0 - k2 * sp * sp).max(0.0).sqrt();
        // (psi - asin(k sin psi)) / lambda, written as asin of a
        // cancellation-free argument.
        let w = sp * d2 * k2 / (root + k * cp);
        let y = lambda * w;
        if y.abs() < 1e-4 {
            w * (1.0 + y * y / 6.0 + 3.0 * y * y * y * y / 40.0)
        } else {
            y.clamp(-1.0, 1.0).asin() / lambda
        }
    };
    anti(psi_q) - anti(psi_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_simpson;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p2(x: f64, y: f64) -> Point {
        Point::new(vec![x, y])
    }

    fn tangent_at(p: &Point, comps: Vec<f64>) -> TangentVector {
        TangentVector { base: p.clone(), components: comps }
    }

    #[test]
    fn tan_lambda_branches() {
        assert_relative_eq!(tan_lambda(0.7, 0.0).unwrap(), 0.7);
        assert_eq!(tan_lambda(0.0, -1.0).unwrap(), 0.0);
        assert_relative_eq!(
            tan_lambda(1.0, -1.0).unwrap(),
            0.761_594_155_955_764_9,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            tan_lambda(std::f64::consts::FRAC_PI_4, 1.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert!(tan_lambda(1.6, 1.0).is_err());
        // odd and strictly increasing
        assert_relative_eq!(tan_lambda(-0.4, -2.0).unwrap(), -tan_lambda(0.4, -2.0).unwrap());
        assert!(tan_lambda(0.5, -1.0).unwrap() < tan_lambda(0.6, -1.0).unwrap());
    }

    #[test]
    fn atan_lambda_inverts() {
        for &l in &[-1.0f64, -0.3, 0.0, 0.4, 1.0] {
            for &a in &[0.0, 0.1, 0.5, 1.2] {
                if l > 0.0 && a >= std::f64::consts::FRAC_PI_2 / l.sqrt() {
                    continue;
                }
                let r = tan_lambda(a, l).unwrap();
                assert_relative_eq!(atan_lambda(r, l).unwrap(), a, epsilon = 1e-13);
            }
        }
        assert!(atan_lambda(1.0, -1.0).is_err());
    }

    #[test]
    fn metric_examples() {
        let h = SpaceForm::new(-1.0, 2).unwrap();
        let o = h.origin();
        let e1 = tangent_at(&o, vec![1.0, 0.0]);
        assert_relative_eq!(h.metric_eval(&e1, &e1), 1.0);
        let s = SpaceForm::new(0.7, 2).unwrap();
        let e1o = tangent_at(&o, vec![1.0, 0.0]);
        assert_relative_eq!(s.metric_eval(&e1o, &e1o), 1.0);

        let p = p2(0.5, 0.0);
        let zero = tangent_at(&p, vec![0.0, 0.0]);
        let any = tangent_at(&p, vec![0.3, -0.2]);
        assert_eq!(h.metric_eval(&zero, &any), 0.0);

        // radial vector at (0.5, 0): 1/(1-r^2)^2 = 16/9
        let x = tangent_at(&p, vec![1.0, 0.0]);
        assert_relative_eq!(h.metric_eval(&x, &x), 16.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn metric_matches_radial_arclength() {
        // The curved length of a radial segment is atanh; its derivative
        // squared must equal the metric on the radial unit vector.
        let h = SpaceForm::new(-1.0, 2).unwrap();
        let r = 0.5f64;
        let (len, _) =
            adaptive_simpson(|t| 1.0 / (1.0 - t * t), 0.0, r, 1e-12, 40).unwrap();
        assert_relative_eq!(len, r.atanh(), epsilon = 1e-12);
        let fd = {
            let eps = 1e-6;
            ((r + eps).atanh() - (r - eps).atanh()) / (2.0 * eps)
        };
        let p = p2(r, 0.0);
        let x = tangent_at(&p, vec![1.0, 0.0]);
        assert_relative_eq!(h.metric_eval(&x, &x), fd * fd, epsilon = 1e-9);
    }

    #[test]
    fn distance_examples() {
        let h = SpaceForm::new(-1.0, 2).unwrap();
        assert_relative_eq!(
            h.distance_to_origin(&p2(0.5, 0.0)),
            0.549_306_144_334_054_8,
            epsilon = 1e-15
        );
        let e = SpaceForm::new(0.0, 2).unwrap();
        assert_relative_eq!(e.distance_to_origin(&p2(0.3, 0.0)), 0.3);
        let s = SpaceForm::new(1.0, 2).unwrap();
        assert_relative_eq!(
            s.distance_to_origin(&p2(1.0, 0.0)),
            std::f64::consts::FRAC_PI_4,
            epsilon = 1e-15
        );

        assert_relative_eq!(
            h.distance(&p2(0.5, 0.0), &p2(0.0, 0.0)),
            h.distance_to_origin(&p2(0.5, 0.0)),
            epsilon = 1e-14
        );
        assert_eq!(h.distance(&p2(0.3, 0.2), &p2(0.3, 0.2)), 0.0);
        assert_relative_eq!(
            h.distance(&p2(0.5, 0.0), &p2(-0.5, 0.0)),
            1.098_612_288_668_109_7,
            epsilon = 1e-14
        );
    }

    #[test]
    fn volume_density_examples() {
        let e = SpaceForm::new(0.0, 2).unwrap();
        assert_eq!(e.volume_density(&p2(0.4, -0.9)), 1.0);
        let h = SpaceForm::new(-1.0, 2).unwrap();
        assert_relative_eq!(h.volume_density(&p2(0.6, 0.0)), 1.953125, epsilon = 1e-14);
        let s = SpaceForm::new(1.0, 2).unwrap();
        assert_relative_eq!(
            s.volume_density(&p2(1.0, 0.0)),
            0.353_553_390_593_273_8,
            epsilon = 1e-15
        );
    }

    #[test]
    fn exp_origin_examples() {
        let h = SpaceForm::new(-1.0, 2).unwrap();
        let o = h.origin();
        let zero = tangent_at(&o, vec![0.0, 0.0]);
        assert_eq!(h.exp_origin(&zero).unwrap(), h.origin());
        let x = tangent_at(&o, vec![1.0, 0.0]);
        let img = h.exp_origin(&x).unwrap();
        assert_relative_eq!(img.coords()[0], 0.761_594_155_955_764_9, epsilon = 1e-15);
        assert_eq!(img.coords()[1], 0.0);
        let e = SpaceForm::new(0.0, 2).unwrap();
        let v = tangent_at(&o, vec![0.3, -0.4]);
        assert_eq!(e.exp_origin(&v).unwrap().coords(), &[0.3, -0.4][..]);
    }

    #[test]
    fn exp_distance_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &l in &[-1.0, -0.25, 0.0, 0.25, 1.0] {
            let sf = SpaceForm::new(l, 3).unwrap();
            for _ in 0..200 {
                let mut comps: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if l > 0.0 {
                    let n = norm(&comps);
                    let cap = 0.9 * std::f64::consts::FRAC_PI_2 / l.sqrt();
                    if n > cap {
                        comps.iter_mut().for_each(|c| *c *= cap / n);
                    }
                }
                let x = tangent_at(&sf.origin(), comps.clone());
                let p = sf.exp_origin(&x).unwrap();
                assert_abs_diff_eq!(sf.distance_to_origin(&p), norm(&comps), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn normal_convert_examples() {
        let h = SpaceForm::new(-1.0, 2).unwrap();
        let e1 = Direction::axis(2, 0);
        let at_origin = h.normal_convert(&h.origin(), &e1);
        assert_relative_eq!(at_origin.components[0], 1.0);
        assert_eq!(at_origin.components[1], 0.0);

        let n = h.normal_convert(&p2(0.5, 0.0), &e1);
        assert_relative_eq!(n.components[0], 0.75, epsilon = 1e-15);
        assert_eq!(n.components[1], 0.0);

        let n2 = h.normal_convert(&p2(0.0, 0.5), &e1);
        assert_relative_eq!(n2.components[0], 0.866_025_403_784_438_6, epsilon = 1e-15);
        assert_eq!(n2.components[1], 0.0);
    }

    #[test]
    fn normal_convert_unit_norm_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &l in &[-1.0, -0.25, 0.25, 1.0] {
            let sf = SpaceForm::new(l, 3).unwrap();
            for _ in 0..100 {
                let x = Point::new((0..3).map(|_| rng.gen_range(-0.5..0.5)).collect());
                let ne =
                    Direction::new((0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
                let nl = sf.normal_convert(&x, &ne);
                assert_abs_diff_eq!(sf.metric_eval(&nl, &nl), 1.0, epsilon = 1e-10);
                // any Euclidean tangent of the hyperplane normal to ne
                let mut t = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0];
                let along = dot(&t, ne.coords());
                for (tv, nv) in t.iter_mut().zip(ne.coords()) {
                    *tv -= along * nv;
                }
                let tv = tangent_at(&x, t);
                assert_abs_diff_eq!(sf.metric_eval(&nl, &tv), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn boundary_density_examples() {
        let e = SpaceForm::new(0.0, 2).unwrap();
        let e1 = Direction::axis(2, 0);
        assert_eq!(e.boundary_density(&p2(0.3, 0.1), &e1), 1.0);
        let h = SpaceForm::new(-1.0, 2).unwrap();
        assert_relative_eq!(h.boundary_density(&p2(0.6, 0.0), &e1), 1.25, epsilon = 1e-14);
        let s = SpaceForm::new(1.0, 2).unwrap();
        assert_relative_eq!(
            s.boundary_density(&p2(1.0, 0.0), &e1),
            0.707_106_781_186_547_5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn curvature_convert_examples() {
        let e1 = Direction::axis(2, 0);
        for &l in &[-1.0, -0.2, 0.0, 0.3, 1.0] {
            let sf = SpaceForm::new(l, 2).unwrap();
            assert_relative_eq!(sf.curvature_convert(3.0, &sf.origin(), &e1), 3.0);
        }
        let e = SpaceForm::new(0.0, 2).unwrap();
        assert_relative_eq!(e.curvature_convert(3.0, &p2(0.4, 0.2), &e1), 3.0);
        // radial point of a centered disk: the two weights cancel
        let h = SpaceForm::new(-1.0, 2).unwrap();
        assert_relative_eq!(h.curvature_convert(1.0, &p2(0.6, 0.0), &e1), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn circle_perimeter_consistency() {
        // Integrating the boundary density over a centered circle must match
        // the arclength of the curved metric along the same circle.
        for &l in &[-1.0, -0.4, 0.3, 1.0] {
            let sf = SpaceForm::new(l, 2).unwrap();
            let rho = if l < 0.0 { 0.7 } else { 0.9 };
            let by_density = {
                let f = |theta: f64| {
                    let x = p2(rho * theta.cos(), rho * theta.sin());
                    let ne = Direction::from_angle(theta);
                    sf.boundary_density(&x, &ne) * rho
                };
                adaptive_simpson(f, 0.0, 2.0 * std::f64::consts::PI, 1e-12, 40)
                    .unwrap()
                    .0
            };
            let by_arclength = {
                let f = |theta: f64| {
                    let x = p2(rho * theta.cos(), rho * theta.sin());
                    let v = tangent_at(&x, vec![-rho * theta.sin(), rho * theta.cos()]);
                    sf.metric_eval(&v, &v).sqrt()
                };
                adaptive_simpson(f, 0.0, 2.0 * std::f64::consts::PI, 1e-12, 40)
                    .unwrap()
                    .0
            };
            assert_relative_eq!(by_density, by_arclength, epsilon = 1e-8);
        }
    }

    #[test]
    fn klein_translate_examples() {
        let e = SpaceForm::new(0.0, 2).unwrap();
        assert_eq!(
            e.klein_translate(&p2(1.0, 2.0), &p2(3.0, 4.0)).coords(),
            &[4.0, 6.0][..]
        );
        let h = SpaceForm::new(-1.0, 2).unwrap();
        let a = p2(0.5, 0.0);
        let at = h.klein_translate(&a, &h.origin());
        assert_abs_diff_eq!(at.coords()[0], 0.5, epsilon = 1e-15);
        let x = p2(0.2, 0.0);
        assert_abs_diff_eq!(
            h.distance(&a, &h.klein_translate(&a, &x)),
            h.distance(&h.origin(), &x),
            epsilon = 1e-12
        );
        // identity translation
        let id = h.klein_translate(&h.origin(), &x);
        assert_eq!(id.coords(), x.coords());
    }

    #[test]
    fn klein_translate_preserves_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &l in &[-1.0, -0.25, 0.0, 0.25, 1.0] {
            let sf = SpaceForm::new(l, 2).unwrap();
            // stay inside the chart: for positive curvature the chart covers
            // an open hemisphere, so translated pairs need |a||x| < 1/lambda
            let lim = if l < 0.0 {
                0.95 * sf.model_radius()
            } else if l > 0.0 {
                0.9 / l.sqrt()
            } else {
                1.5
            };
            for _ in 0..200 {
                let rnd = |rng: &mut ChaCha8Rng| {
                    let r = lim * rng.gen_range(0.0f64..0.8);
                    let t = rng.gen_range(0.0..std::f64::consts::TAU);
                    p2(r * t.cos(), r * t.sin())
                };
                let a = rnd(&mut rng);
                let x = rnd(&mut rng);
                let y = rnd(&mut rng);
                let m = sf.translation(&a);
                assert_abs_diff_eq!(
                    sf.distance(&m.apply(&x), &m.apply(&y)),
                    sf.distance(&x, &y),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn klein_translate_stays_in_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sf = SpaceForm::new(-1.0, 2).unwrap();
        for _ in 0..500 {
            let r = rng.gen_range(0.0f64..0.97);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let a = p2(0.9 * rng.gen_range(0.0..1.0), 0.0);
            let x = p2(r * t.cos(), r * t.sin());
            let y = sf.klein_translate(&a, &x);
            assert!(y.norm() < 1.0, "left the model: |y| = {}", y.norm());
        }
    }

    #[test]
    fn motion_inverse_and_compose() {
        let sf = SpaceForm::new(-1.0, 2).unwrap();
        let m = sf.translation(&p2(0.4, -0.2));
        let r = Motion::rotation2(0.7);
        let c = r.compose(&m);
        let x = p2(0.1, 0.3);
        let y = c.apply(&x);
        let back = c.inverse().apply(&y);
        assert_abs_diff_eq!(back.coords()[0], x.coords()[0], epsilon = 1e-13);
        assert_abs_diff_eq!(back.coords()[1], x.coords()[1], epsilon = 1e-13);
        // translation inverse is the opposite translation
        let minv = sf.translation(&p2(-0.4, 0.2));
        let z = minv.apply(&m.apply(&x));
        assert_abs_diff_eq!(z.coords()[0], x.coords()[0], epsilon = 1e-13);
        assert_abs_diff_eq!(z.coords()[1], x.coords()[1], epsilon = 1e-13);
    }

    #[test]
    fn motion_derivatives_match_finite_differences() {
        let sf = SpaceForm::new(0.8, 2).unwrap();
        let m = Motion::rotation2(0.3).compose(&sf.translation(&p2(0.3, 0.1)));
        let x = p2(0.2, -0.4);
        let u = [0.6, -0.2];
        let eps = 1e-5;
        let shift = |s: f64| {
            m.apply(&p2(x.coords()[0] + s * u[0], x.coords()[1] + s * u[1]))
        };
        let (fp, fmi) = (shift(eps), shift(-eps));
        let f0 = shift(0.0);
        let jac = m.jacobian(&x);
        let ju = [
            jac[(0, 0)] * u[0] + jac[(0, 1)] * u[1],
            jac[(1, 0)] * u[0] + jac[(1, 1)] * u[1],
        ];
        let snd = m.second_derivative(&x, &u);
        for i in 0..2 {
            let fd1 = (fp.coords()[i] - fmi.coords()[i]) / (2.0 * eps);
            let fd2 = (fp.coords()[i] - 2.0 * f0.coords()[i] + fmi.coords()[i]) / (eps * eps);
            assert_abs_diff_eq!(ju[i], fd1, epsilon = 1e-8);
            assert_abs_diff_eq!(snd[i], fd2, epsilon = 1e-4);
        }
    }

    #[test]
    fn radial_measure_matches_known_areas() {
        // hyperbolic disk of geodesic radius 1
        let rho = 1f64.tanh();
        let area = 2.0 * std::f64::consts::PI * radial_measure(2, -1.0, 0.0, rho);
        assert_relative_eq!(area, 3.412_276_265_284_902, epsilon = 1e-13);
        // spherical cap, geodesic radius pi/4
        let rho_s = 1.0;
        let area_s = 2.0 * std::f64::consts::PI * radial_measure(2, 1.0, 0.0, rho_s);
        assert_relative_eq!(area_s, 1.840_302_369_021_220_2, epsilon = 1e-13);
        // flat annulus
        assert_relative_eq!(radial_measure(2, 0.0, 1.0, 2.0), 1.5, epsilon = 1e-15);
        // hyperbolic 3-ball of geodesic radius 1: pi (sinh 2 - 2)
        let vol = 4.0 * std::f64::consts::PI * radial_measure(3, -1.0, 0.0, rho);
        assert_relative_eq!(vol, 5.110_932_705_708_289, epsilon = 1e-12);
        // flat 3-ball
        let v3 = 4.0 * std::f64::consts::PI * radial_measure(3, 0.0, 0.0, 1.0);
        assert_relative_eq!(v3, 4.0 * std::f64::consts::PI / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn radial_measure_3_branches_agree() {
        // series / closed form / short-interval quadrature must agree where
        // the branch thresholds switch
        for &(l, r0, r1) in &[
            (9.9e-4, 0.3, 0.9),
            (1.1e-3, 0.3, 0.9),
            (0.5, 0.5, 0.524),
            (0.5, 0.5, 0.6),
            (-0.9, 0.0, 0.8),
        ] {
            let quad = adaptive_simpson(
                |t| {
                    let w: f64 = 1.0 + l * t * t;
                    t * t / (w * w)
                },
                r0,
                r1,
                1e-13,
                40,
            )
            .unwrap()
            .0;
            assert_relative_eq!(radial_measure(3, l, r0, r1), quad, epsilon = 1e-11);
        }
    }

    #[test]
    fn chord_antiderivatives_match_quadrature() {
        for &l in &[-0.8, -1e-9, 0.0, 1e-9, 0.7] {
            let c = 1.0 + l * 0.09; // t = 0.3
            for &(s0, s1) in &[(-0.4, 0.5), (0.0, 0.7), (0.2, 0.21)] {
                let q2 = adaptive_simpson(|s| (c + l * s * s).powf(-1.5), s0, s1, 1e-13, 40)
                    .unwrap()
                    .0;
                let a2 = chord_antiderivative_2d(l, c, s1) - chord_antiderivative_2d(l, c, s0);
                assert_relative_eq!(a2, q2, epsilon = 1e-10);
                let q3 = adaptive_simpson(|s| (c + l * s * s).powi(-2), s0, s1, 1e-13, 40)
                    .unwrap()
                    .0;
                let a3 = chord_antiderivative_3d(l, c, s1) - chord_antiderivative_3d(l, c, s0);
                assert_relative_eq!(a3, q3, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn edge_sector_matches_quadrature() {
        // single edge vs direct angular quadrature of the radial closed form
        let p = [0.5, -0.3];
        let q = [0.4, 0.6];
        for &l in &[-1.0, -0.3, 0.0, 1e-8, 0.6, 1.0] {
            let exact = edge_sector_area(l, p, q);
            // parametrize the segment and integrate the sector sweep:
            // dA = radial_measure(2, l, 0, r(t)) d(phi(t))
            let f = |t: f64| {
                let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                let r2 = x[0] * x[0] + x[1] * x[1];
                let dphi = (x[0] * (q[1] - p[1]) - x[1] * (q[0] - p[0])) / r2;
                radial_measure(2, l, 0.0, r2.sqrt()) * dphi
            };
            let quad = adaptive_simpson(f, 0.0, 1.0, 1e-13, 40).unwrap().0;
            assert_abs_diff_eq!(exact, quad, epsilon = 1e-11);
        }
    }

    #[test]
    fn edge_sector_triangle_shoelace() {
        // flat case: the three sectors of a triangle sum to the shoelace area
        let a = [0.2, 0.1];
        let b = [0.9, 0.3];
        let c = [0.4, 0.8];
        let tri = edge_sector_area(0.0, a, b) + edge_sector_area(0.0, b, c)
            + edge_sector_area(0.0, c, a);
        let shoelace = 0.5
            * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        assert_relative_eq!(tri, shoelace, epsilon = 1e-14);
    }

    #[test]
    fn space_form_validation() {
        assert!(SpaceForm::new(-1.0, 1).is_err());
        let h = SpaceForm::new(-1.0, 2).unwrap();
        assert!(h.check_point(&p2(0.5, 0.5)).is_ok());
        assert!(h.check_point(&p2(0.9, 0.9)).is_err());
        let s = SpaceForm::new(1.0, 2).unwrap();
        assert!(s.check_point(&p2(9.0, 0.0)).is_ok());
        assert!(s.check_point(&p2(11.0, 0.0)).is_err());
        let tight = s.with_radius_cap(2.0);
        assert!(tight.check_point(&p2(3.0, 0.0)).is_err());
    }
}

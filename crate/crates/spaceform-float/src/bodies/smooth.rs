//! Strictly convex planar bodies given by a finite trigonometric support
//! expansion `h(t) = a0 + sum_k (a_k cos kt + b_k sin kt)`, `k >= 2`, and
//! their images under projective motions.
//!
//! The boundary is `x(t) = h u(t) + h' u'(t)` with outer normal `u(t)`,
//! curvature radius `h + h''` and arclength element `(h + h'') dt`.

use crate::spaceform::{Motion, Point};
use crate::{Error, Result};

const CONVEXITY_GRID: usize = 4096;

#[derive(Debug, Clone)]
pub(crate) struct SmoothSupport2d {
    pub a0: f64,
    /// `(k, cos coefficient, sin coefficient)` with `k >= 2`.
    pub harmonics: Vec<(usize, f64, f64)>,
}

impl SmoothSupport2d {
    pub fn new(a0: f64, harmonics: Vec<(usize, f64, f64)>) -> Result<SmoothSupport2d> {
        for &(k, _, _) in &harmonics {
            if k < 2 {
                return Err(Error::InvalidBody(
                    "support harmonics start at k = 2 (k = 1 is a translation)".into(),
                ));
            }
        }
        let body = SmoothSupport2d { a0, harmonics };
        let mut min_rho = f64::INFINITY;
        let mut min_h = f64::INFINITY;
        for j in 0..CONVEXITY_GRID {
            let t = j as f64 / CONVEXITY_GRID as f64 * std::f64::consts::TAU;
            min_rho = min_rho.min(body.curvature_radius(t));
            min_h = min_h.min(body.h(t));
        }
        if min_rho <= 0.0 {
            return Err(Error::InvalidBody(format!(
                "not strictly convex: min (h + h'') = {min_rho}"
            )));
        }
        if min_h <= 0.0 {
            return Err(Error::InvalidBody(
                "support must be positive (origin interior)".into(),
            ));
        }
        Ok(body)
    }

    pub fn h(&self, t: f64) -> f64 {
        let mut v = self.a0;
        for &(k, a, b) in &self.harmonics {
            let kt = k as f64 * t;
            v += a * kt.cos() + b * kt.sin();
        }
        v
    }

    pub fn dh(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for &(k, a, b) in &self.harmonics {
            let kf = k as f64;
            let kt = kf * t;
            v += kf * (-a * kt.sin() + b * kt.cos());
        }
        v
    }

    pub fn ddh(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for &(k, a, b) in &self.harmonics {
            let kf = k as f64;
            let kt = kf * t;
            v -= kf * kf * (a * kt.cos() + b * kt.sin());
        }
        v
    }

    pub fn dddh(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for &(k, a, b) in &self.harmonics {
            let kf = k as f64;
            let kt = kf * t;
            v += kf * kf * kf * (a * kt.sin() - b * kt.cos());
        }
        v
    }

    pub fn curvature_radius(&self, t: f64) -> f64 {
        self.h(t) + self.ddh(t)
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        let h = self.h(t);
        let dh = self.dh(t);
        [h * c - dh * s, h * s + dh * c]
    }

    /// Velocity of the boundary parametrization, `rho(t) u'(t)`.
    pub fn velocity(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        let rho = self.curvature_radius(t);
        [-rho * s, rho * c]
    }

    /// Acceleration of the boundary parametrization, `rho' u' - rho u`.
    pub fn acceleration(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        let rho = self.curvature_radius(t);
        let drho = self.dh(t) + self.dddh(t);
        [-drho * s - rho * c, drho * c - rho * s]
    }

    pub fn support(&self, v: &[f64]) -> f64 {
        self.h(v[1].atan2(v[0]))
    }

    pub fn max_radius(&self) -> f64 {
        (0..CONVEXITY_GRID)
            .map(|j| {
                let t = j as f64 / CONVEXITY_GRID as f64 * std::f64::consts::TAU;
                let p = self.point(t);
                (p[0] * p[0] + p[1] * p[1]).sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        // max_t (x . u(t) - h(t)) <= 0; coarse scan then Newton polish
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        if r == 0.0 {
            return true;
        }
        let phi = x[1].atan2(x[0]);
        let g = |t: f64| r * (t - phi).cos() - self.h(t);
        let dg = |t: f64| -r * (t - phi).sin() - self.dh(t);
        let ddg = |t: f64| -r * (t - phi).cos() - self.ddh(t);
        let mut best_t = phi;
        let mut best = g(phi);
        for j in 0..64 {
            let t = phi + (j as f64 / 64.0 - 0.5) * std::f64::consts::TAU;
            let v = g(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        let mut t = best_t;
        for _ in 0..30 {
            let d2 = ddg(t);
            if d2 >= -1e-300 {
                break;
            }
            let step = dg(t) / d2;
            t -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        g(t).max(best) <= tol
    }

    /// `s`-interval of the line `base + s dir` inside the body.
    ///
    /// The boundary crossings of the line `{x . n = c}` are found on the two
    /// monotone branches of `t -> x(t) . n`, which increase up to the normal
    /// angle of `n` and decrease past it.
    pub fn line_interval(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let n = [-dir[1], dir[0]];
        let c = base[0] * n[0] + base[1] * n[1];
        let tn = n[1].atan2(n[0]);
        let hi = self.h(tn);
        let lo = -self.h(std::f64::consts::PI + tn);
        if c <= lo || c >= hi {
            return None;
        }
        let f = |t: f64| {
            let p = self.point(t);
            p[0] * n[0] + p[1] * n[1] - c
        };
        let df = |t: f64| {
            let v = self.velocity(t);
            v[0] * n[0] + v[1] * n[1]
        };
        let t1 = monotone_root(&f, &df, tn - std::f64::consts::PI, tn);
        let t2 = monotone_root(&f, &df, tn, tn + std::f64::consts::PI);
        let s_of = |t: f64| {
            let p = self.point(t);
            (p[0] - base[0]) * dir[0] + (p[1] - base[1]) * dir[1]
        };
        let (s1, s2) = (s_of(t1), s_of(t2));
        Some((s1.min(s2), s1.max(s2)))
    }

    /// Radial function about the origin.
    pub fn radial(&self, u: &[f64]) -> f64 {
        let phi = u[1].atan2(u[0]);
        // boundary point parallel to u: root of h sin(t-phi) + h' cos(t-phi)
        let f = |t: f64| self.h(t) * (t - phi).sin() + self.dh(t) * (t - phi).cos();
        let df = |t: f64| self.curvature_radius(t) * (t - phi).cos();
        let t = monotone_root(
            &f,
            &df,
            phi - std::f64::consts::FRAC_PI_2,
            phi + std::f64::consts::FRAC_PI_2,
        );
        let p = self.point(t);
        p[0] * u[0] + p[1] * u[1]
    }

    /// The body rotated by `angle` (support coefficients rotated exactly).
    pub fn rotated(&self, angle: f64) -> SmoothSupport2d {
        let harmonics = self
            .harmonics
            .iter()
            .map(|&(k, a, b)| {
                let (s, c) = (k as f64 * angle).sin_cos();
                (k, a * c - b * s, a * s + b * c)
            })
            .collect();
        SmoothSupport2d { a0: self.a0, harmonics }
    }
}

/// Root of a monotone function on a bracket: Newton steps guarded by the
/// shrinking bisection bracket.
fn monotone_root<F, G>(f: &F, df: &G, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let flo = f(lo);
    let increasing = flo < 0.0;
    let mut t = 0.5 * (lo + hi);
    for _ in 0..80 {
        let ft = f(t);
        if ft == 0.0 {
            return t;
        }
        let below = if increasing { ft < 0.0 } else { ft > 0.0 };
        if below {
            lo = t;
        } else {
            hi = t;
        }
        let d = df(t);
        let newton = t - ft / d;
        t = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() < 1e-15 * (1.0 + t.abs()) {
            break;
        }
    }
    t
}

/// A smooth body moved by a projective motion, represented exactly through
/// the base parametrization: positions, tangents and curvatures of the image
/// follow from the motion's first and second derivatives.
#[derive(Debug, Clone)]
pub(crate) struct MappedSmooth {
    pub base: SmoothSupport2d,
    pub motion: Motion,
    pub inverse: Motion,
    orient: f64,
}

impl MappedSmooth {
    pub fn new(base: SmoothSupport2d, motion: Motion) -> MappedSmooth {
        let inverse = motion.inverse();
        let mut m = MappedSmooth { base, motion, inverse: inverse, orient: 1.0 };
        // fix the outward orientation once, against an interior point
        let inner = m.motion.apply(&Point::origin(2));
        let (x, ne, _, _) = m.boundary_at(0.0);
        let to_out = [x[0] - inner.coords()[0], x[1] - inner.coords()[1]];
        if ne[0] * to_out[0] + ne[1] * to_out[1] < 0.0 {
            m.orient = -1.0;
        }
        m
    }

    /// Image point, outer unit normal, Euclidean curvature and speed at the
    /// base parameter `t`.
    pub fn boundary_at(&self, t: f64) -> ([f64; 2], [f64; 2], f64, f64) {
        let x = Point::new(self.base.point(t).to_vec());
        let v = self.base.velocity(t);
        let a = self.base.acceleration(t);
        let jac = self.motion.jacobian(&x);
        let tau = [
            jac[(0, 0)] * v[0] + jac[(0, 1)] * v[1],
            jac[(1, 0)] * v[0] + jac[(1, 1)] * v[1],
        ];
        let extra = self.motion.second_derivative(&x, &v);
        let acc = [
            jac[(0, 0)] * a[0] + jac[(0, 1)] * a[1] + extra[0],
            jac[(1, 0)] * a[0] + jac[(1, 1)] * a[1] + extra[1],
        ];
        let speed = (tau[0] * tau[0] + tau[1] * tau[1]).sqrt();
        let kappa = self.orient * (tau[0] * acc[1] - tau[1] * acc[0]) / (speed * speed * speed);
        let ne = [self.orient * tau[1] / speed, -self.orient * tau[0] / speed];
        let y = self.motion.apply(&x);
        ([y.coords()[0], y.coords()[1]], ne, kappa, speed)
    }

    pub fn support(&self, v: &[f64], samples: usize) -> f64 {
        (0..samples)
            .map(|j| {
                let t = j as f64 / samples as f64 * std::f64::consts::TAU;
                let y = self.motion.apply(&Point::new(self.base.point(t).to_vec()));
                y.coords()[0] * v[0] + y.coords()[1] * v[1]
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let pre = self.inverse.apply(&Point::new(x.to_vec()));
        self.base.contains(pre.coords(), tol)
    }

    /// Chords map exactly: straight lines pull back to straight lines under
    /// the inverse motion, so the interval comes from the base body.
    pub fn line_interval(&self, base_pt: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let p0 = self.inverse.apply(&Point::new(base_pt.to_vec()));
        let p1 = self
            .inverse
            .apply(&Point::new(vec![base_pt[0] + dir[0], base_pt[1] + dir[1]]));
        let pre_dir_raw = [
            p1.coords()[0] - p0.coords()[0],
            p1.coords()[1] - p0.coords()[1],
        ];
        let len = (pre_dir_raw[0] * pre_dir_raw[0] + pre_dir_raw[1] * pre_dir_raw[1]).sqrt();
        if len == 0.0 {
            return None;
        }
        let pre_dir = [pre_dir_raw[0] / len, pre_dir_raw[1] / len];
        let (s_lo, s_hi) = self.base.line_interval(p0.coords(), &pre_dir)?;
        let map_s = |s: f64| {
            let q = Point::new(vec![
                p0.coords()[0] + s * pre_dir[0],
                p0.coords()[1] + s * pre_dir[1],
            ]);
            let y = self.motion.apply(&q);
            (y.coords()[0] - base_pt[0]) * dir[0] + (y.coords()[1] - base_pt[1]) * dir[1]
        };
        let (a, b) = (map_s(s_lo), map_s(s_hi));
        Some((a.min(b), a.max(b)))
    }

    pub fn radial(&self, u: &[f64]) -> Option<f64> {
        let (lo, hi) = self.line_interval(&[0.0, 0.0], u)?;
        if lo > 0.0 || hi < 0.0 {
            return None;
        }
        Some(hi)
    }
}

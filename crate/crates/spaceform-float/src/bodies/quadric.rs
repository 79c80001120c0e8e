//! General ellipsoids `(x - m)^T A (x - m) <= 1` with exact support,
//! boundary and curvature oracles.
//!
//! Geodesic balls of the model are Euclidean balls only when centered at the
//! origin; moved by a projective motion they turn into ellipsoids of this
//! form, which is why the quadric keeps an arbitrary center and an arbitrary
//! positive form.

use crate::spaceform::dot;
use crate::{Error, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub(crate) struct Quadric {
    pub center: Vec<f64>,
    /// The positive definite form `A`.
    pub form: DMatrix<f64>,
    /// `A^{-1}` (support evaluations).
    pub inv_form: DMatrix<f64>,
    /// `A^{-1/2}` (sphere parametrization of the boundary).
    pub sqrt_inv: DMatrix<f64>,
    pub det_form: f64,
    pub det_sqrt_inv: f64,
    /// Geodesic radius when this quadric is a geodesic ball.
    pub ball_radius: Option<f64>,
}

impl Quadric {
    pub fn new(center: Vec<f64>, form: DMatrix<f64>) -> Result<Quadric> {
        let n = center.len();
        assert_eq!(form.nrows(), n);
        let sym = form.clone().symmetric_eigen();
        if sym.eigenvalues.iter().any(|&e| e <= 0.0) {
            return Err(Error::InvalidBody("quadric form is not positive definite".into()));
        }
        let mut inv_diag = DMatrix::zeros(n, n);
        let mut sqrt_inv_diag = DMatrix::zeros(n, n);
        for i in 0..n {
            inv_diag[(i, i)] = 1.0 / sym.eigenvalues[i];
            sqrt_inv_diag[(i, i)] = 1.0 / sym.eigenvalues[i].sqrt();
        }
        let v = &sym.eigenvectors;
        let inv_form = v * inv_diag * v.transpose();
        let sqrt_inv = v * sqrt_inv_diag * v.transpose();
        let det_form: f64 = sym.eigenvalues.iter().product();
        Ok(Quadric {
            center,
            inv_form,
            det_sqrt_inv: 1.0 / det_form.sqrt(),
            det_form,
            sqrt_inv,
            form,
        ball_radius: None,
        })
    }

    /// Euclidean ball centered at the origin.
    pub fn centered_ball(n: usize, radius: f64) -> Result<Quadric> {
        if radius <= 0.0 {
            return Err(Error::InvalidBody("ball radius must be positive".into()));
        }
        Quadric::new(vec![0.0; n], DMatrix::identity(n, n) / (radius * radius))
    }

    /// Origin-centered axis-aligned ellipsoid.
    pub fn axis_aligned(semiaxes: &[f64]) -> Result<Quadric> {
        if semiaxes.iter().any(|&a| a <= 0.0) {
            return Err(Error::InvalidBody("semiaxes must be positive".into()));
        }
        let n = semiaxes.len();
        let mut form = DMatrix::zeros(n, n);
        for i in 0..n {
            form[(i, i)] = 1.0 / (semiaxes[i] * semiaxes[i]);
        }
        Quadric::new(vec![0.0; n], form)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Image under a projective map given by its homogeneous inverse action:
    /// quadrics map to quadrics, with the homogeneous matrix transformed by
    /// congruence with the inverse map.
    pub fn transformed(&self, motion: &crate::spaceform::Motion) -> Result<Quadric> {
        let n = self.dim();
        // homogeneous matrix of the quadric: [[A, -A m], [-m^T A, m^T A m - 1]]
        let mut s = DMatrix::zeros(n + 1, n + 1);
        let am = &self.form * DMatrix::from_column_slice(n, 1, &self.center);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = self.form[(i, j)];
            }
            s[(i, n)] = -am[(i, 0)];
            s[(n, i)] = -am[(i, 0)];
        }
        let mam = dot(
            &self.center,
            am.column(0).iter().copied().collect::<Vec<_>>().as_slice(),
        );
        s[(n, n)] = mam - 1.0;

        let hm = motion.inverse().homogeneous();
        let mut sp = hm.transpose() * s * hm;
        // extract center and normalize
        let mut q = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] = sp[(i, j)];
            }
        }
        let b: Vec<f64> = (0..n).map(|i| sp[(i, n)]).collect();
        let qinv = q
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("degenerate quadric image".into()))?;
        let mut m_new = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                m_new[i] -= qinv[(i, j)] * b[j];
            }
        }
        let mut r2 = -sp[(n, n)];
        for i in 0..n {
            r2 -= b[i] * m_new[i];
        }
        if r2 < 0.0 {
            sp *= -1.0;
            r2 = -r2;
            for i in 0..n {
                for j in 0..n {
                    q[(i, j)] = sp[(i, j)];
                }
            }
        }
        if r2 <= 0.0 {
            return Err(Error::InvalidBody("quadric image is empty".into()));
        }
        let mut q2 = Quadric::new(m_new, q / r2)?;
        q2.ball_radius = self.ball_radius;
        Ok(q2)
    }

    pub fn support(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let mut av = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                av[i] += self.inv_form[(i, j)] * v[j];
            }
        }
        dot(&self.center, v) + dot(&av, v).sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.gauge(x) <= 1.0 + tol
    }

    /// The quadratic form value `(x - m)^T A (x - m)`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let d: Vec<f64> = (0..n).map(|i| x[i] - self.center[i]).collect();
        let mut g = 0.0;
        for i in 0..n {
            for j in 0..n {
                g += d[i] * self.form[(i, j)] * d[j];
            }
        }
        g
    }

    /// Boundary point, outer unit normal, Gauss–Kronecker curvature and the
    /// surface-measure scale at the sphere parameter `u`.
    pub fn boundary_at(&self, u: &[f64]) -> ([f64; 3], [f64; 3], f64, f64) {
        let n = self.dim();
        let mut x = [0.0; 3];
        let mut grad = [0.0; 3];
        for i in 0..n {
            let mut bi = 0.0;
            for j in 0..n {
                bi += self.sqrt_inv[(i, j)] * u[j];
            }
            x[i] = self.center[i] + bi;
        }
        let d: Vec<f64> = (0..n).map(|i| x[i] - self.center[i]).collect();
        for i in 0..n {
            for j in 0..n {
                grad[i] += self.form[(i, j)] * d[j];
            }
        }
        let g = norm3(&grad, n);
        let ne = [grad[0] / g, grad[1] / g, if n > 2 { grad[2] / g } else { 0.0 }];
        let he = self.det_form / g.powi(n as i32 + 1);
        let measure_scale = self.det_sqrt_inv * g;
        (x, ne, he, measure_scale)
    }

    /// Intersection of the line `base + s dir` with the quadric, as an
    /// `s`-interval.
    pub fn line_interval(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let n = self.dim();
        let d: Vec<f64> = (0..n).map(|i| base[i] - self.center[i]).collect();
        let mut adir = vec![0.0; n];
        let mut ad = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                adir[i] += self.form[(i, j)] * dir[j];
                ad[i] += self.form[(i, j)] * d[j];
            }
        }
        let a = dot(&adir, dir);
        let b = 2.0 * dot(&ad, dir);
        let c = dot(&ad, &d) - 1.0;
        let disc = b * b - 4.0 * a * c;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        Some(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    }

    /// `s1`-range on which the planar section `{t v + s1 w1 + s2 w2}` meets
    /// the quadric: the discriminant of the `s2`-quadratic is itself a
    /// downward quadratic in `s1`.
    pub fn section_s1_range(
        &self,
        v: &[f64],
        w1: &[f64],
        w2: &[f64],
        t: f64,
    ) -> Option<(f64, f64)> {
        let n = self.dim();
        let d0: Vec<f64> = (0..n).map(|i| t * v[i] - self.center[i]).collect();
        let mul = |a: &[f64], b: &[f64]| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += a[i] * self.form[(i, j)] * b[j];
                }
            }
            s
        };
        let a = mul(w2, w2);
        let b0 = mul(w2, &d0);
        let b1 = mul(w2, w1);
        let g0 = mul(&d0, &d0) - 1.0;
        let g1 = mul(w1, &d0);
        let g2 = mul(w1, w1);
        let qa = b1 * b1 - a * g2;
        let qb = 2.0 * (b0 * b1 - a * g1);
        let qc = b0 * b0 - a * g0;
        if qa >= 0.0 {
            return None; // unbounded section cannot occur for an ellipsoid
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let r1 = (-qb + sq) / (2.0 * qa);
        let r2 = (-qb - sq) / (2.0 * qa);
        Some((r1.min(r2), r1.max(r2)))
    }

    /// Radial function about the origin (requires the origin inside).
    pub fn radial(&self, u: &[f64]) -> Option<f64> {
        let zero = vec![0.0; self.dim()];
        let (lo, hi) = self.line_interval(&zero, u)?;
        if lo > 0.0 || hi < 0.0 {
            return None;
        }
        Some(hi)
    }
}

fn norm3(v: &[f64; 3], n: usize) -> f64 {
    let mut s = 0.0;
    for x in v.iter().take(n) {
        s += x * x;
    }
    s.sqrt()
}

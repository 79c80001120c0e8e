//! The floating area: a curvature integral over the boundary in the curved
//! boundary measure, evaluated through its Euclidean-model form
//! `H_e^{1/(n+1)} (1 + lambda |x|^2)^{-(n-1)/2} dS_e`, together with curved
//! volumes, cone-volume differences and the convergence experiment tying the
//! floating body's volume deficit to the floating area.

use crate::bodies::{ConvexBody, DirectionGrid, Rep};
use crate::capvolume::{assemble_floating_body, body_measure, solve_profile};
use crate::numerics::fit_power_law;
use crate::spaceform::{dot, radial_measure, tan_lambda, Point};
use crate::{Error, NumericParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Scalar floating area (or floating measure, when restricted to a region)
/// with a quadrature error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct FloatingAreaResult {
    pub value: f64,
    pub quadrature_error: f64,
    /// Set when the integral was restricted to a caller-supplied region.
    pub restricted: bool,
}

/// Outcome of the volume-deficit convergence experiment: quotients over a
/// decreasing delta grid, the extrapolated limit and the curvature-integral
/// target `c_n * floating_area`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub delta_grid: Vec<f64>,
    pub quotients: Vec<f64>,
    /// Direction-grid size that the quotient stabilized at, per delta.
    pub resolutions: Vec<usize>,
    pub extrapolated_limit: f64,
    pub fit_exponent: f64,
    pub target: f64,
    /// Relative to the target when it is nonzero, absolute otherwise.
    pub relative_error: f64,
}

/// Volume of the Euclidean unit ball in dimension `m`,
/// `kappa_m = kappa_{m-2} * 2 pi / m`.
pub fn unit_ball_volume(m: usize) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(m - 2) * std::f64::consts::TAU / m as f64,
    }
}

/// The dimensional constant in the volume-derivative limit,
/// `((n+1)/kappa_{n-1})^{2/(n+1)} / 2`.
pub fn constant_c_n(n: usize) -> f64 {
    assert!(n >= 2);
    0.5 * ((n as f64 + 1.0) / unit_ball_volume(n - 1)).powf(2.0 / (n as f64 + 1.0))
}

/// Curved volume of a body.
pub fn lambda_volume(k: &ConvexBody, params: &NumericParams) -> Result<f64> {
    body_measure(k, params)
}

/// The floating area of a body: zero for polytopes, a boundary-quadrature
/// integral otherwise. The error estimate compares against half resolution.
pub fn floating_area(k: &ConvexBody, resolution: usize, params: &NumericParams) -> Result<FloatingAreaResult> {
    floating_measure_impl(k, resolution, params, None)
}

/// The floating measure of a region: the same integral restricted to
/// boundary points selected by `omega`. Additive over disjoint regions.
pub fn floating_measure(
    k: &ConvexBody,
    resolution: usize,
    params: &NumericParams,
    omega: &dyn Fn(&Point) -> bool,
) -> Result<FloatingAreaResult> {
    floating_measure_impl(k, resolution, params, Some(omega))
}

fn floating_measure_impl(
    k: &ConvexBody,
    resolution: usize,
    params: &NumericParams,
    omega: Option<&dyn Fn(&Point) -> bool>,
) -> Result<FloatingAreaResult> {
    if k.is_polytope() {
        // flat facets carry zero curvature; edges and vertices carry zero
        // surface measure
        return Ok(FloatingAreaResult { value: 0.0, quadrature_error: 0.0, restricted: omega.is_some() });
    }
    let _ = params;
    let coarse = integral_at(k, resolution / 2, omega)?;
    let fine = integral_at(k, resolution, omega)?;
    Ok(FloatingAreaResult {
        value: fine,
        quadrature_error: (fine - coarse).abs(),
        restricted: omega.is_some(),
    })
}

fn integral_at(
    k: &ConvexBody,
    resolution: usize,
    omega: Option<&dyn Fn(&Point) -> bool>,
) -> Result<f64> {
    let n = k.dim() as f64;
    let lambda = k.space().lambda;
    let samples = k.boundary_quadrature(resolution.max(8))?;
    let mut acc = 0.0;
    for s in samples {
        if let Some(pred) = omega {
            if !pred(&s.x) {
                continue;
            }
        }
        let r2 = dot(s.x.coords(), s.x.coords());
        acc += s.he.max(0.0).powf(1.0 / (n + 1.0))
            * (1.0 + lambda * r2).powf(-(n - 1.0) / 2.0)
            * s.weight;
    }
    Ok(acc)
}

/// Closed-form floating area of a centered geodesic ball of geodesic radius
/// `alpha`: `n kappa_n rho^{n(n-1)/(n+1)} (1 + lambda rho^2)^{-(n-1)/2}`
/// with `rho = tan_lambda(alpha)`.
pub fn ball_floating_area_closed(alpha: f64, lambda: f64, n: usize) -> Result<f64> {
    let rho = tan_lambda(alpha, lambda)?;
    let nf = n as f64;
    Ok(nf
        * unit_ball_volume(n)
        * rho.powf(nf * (nf - 1.0) / (nf + 1.0))
        * (1.0 + lambda * rho * rho).powf(-(nf - 1.0) / 2.0))
}

/// Curved volume of `K \ L` for `L ⊆ K` with the origin interior to `L`,
/// by the cone decomposition over the boundary of `K`: each boundary patch
/// contributes the radial closed form between `bd L` and `bd K` along rays.
pub fn cone_volume_difference(
    k: &ConvexBody,
    l: &ConvexBody,
    resolution: usize,
    params: &NumericParams,
) -> Result<f64> {
    let n = k.dim();
    let lambda = k.space().lambda;
    // preconditions: L inside K, origin inside L, checked on a support grid
    let grid = if n == 2 {
        DirectionGrid::uniform_2d(256)
    } else {
        DirectionGrid::icosahedral_3d(320)
    };
    for v in grid.dirs() {
        let hl = l.support(v);
        if hl > k.support(v) + 1e-9 {
            return Err(Error::OutOfRange("L is not contained in K".into()));
        }
        if hl <= 0.0 {
            return Err(Error::OutOfRange("origin must be interior to L".into()));
        }
    }
    let _ = params;
    let samples = k.boundary_quadrature(resolution)?;
    let mut acc = 0.0;
    for s in samples {
        let x = s.x.coords();
        let r = dot(x, x).sqrt();
        if r == 0.0 {
            continue;
        }
        let u: Vec<f64> = x.iter().map(|c| c / r).collect();
        let rl = l
            .radial(&u)
            .ok_or_else(|| Error::OutOfRange("ray misses L".into()))?;
        let xn = dot(x, s.ne.coords());
        acc += xn / r.powi(n as i32) * radial_measure(n, lambda, rl.min(r), r) * s.weight;
    }
    Ok(acc)
}

/// Options of [`derivative_estimate`]: the direction grid starts at
/// `base_directions` per delta and doubles until the quotient moves by less
/// than `refine_rel_tol` relatively, capped at `max_directions`.
#[derive(Debug, Clone)]
pub struct DerivativeOptions {
    pub base_directions: usize,
    pub max_directions: usize,
    pub refine_rel_tol: f64,
    /// Boundary resolution of the floating-area target integral.
    pub area_resolution: usize,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        DerivativeOptions {
            base_directions: 2048,
            max_directions: 1 << 17,
            refine_rel_tol: 1e-3,
            area_resolution: 4096,
        }
    }
}

impl DerivativeOptions {
    pub fn for_dim(n: usize) -> DerivativeOptions {
        if n == 2 {
            DerivativeOptions::default()
        } else {
            DerivativeOptions {
                base_directions: 1280,
                max_directions: 1280 * 16,
                refine_rel_tol: 5e-3,
                area_resolution: 20480,
            }
        }
    }
}

/// The convergence experiment: for every `delta` of the (decreasing) grid,
/// the floating body is solved and the quotient
/// `(vol(K) - vol(floating body)) / delta` recorded; the quotients are
/// extrapolated to `delta -> 0` by a fitted power law and compared against
/// `c_n` times the floating area.
pub fn derivative_estimate(
    k: &ConvexBody,
    delta_grid: &[f64],
    params: &NumericParams,
    opts: &DerivativeOptions,
) -> Result<ConvergenceReport> {
    let n = k.dim();
    let mu = body_measure(k, params)?;
    let admissible = mu.powf(2.0 / (n as f64 + 1.0));
    if delta_grid.is_empty() || delta_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::OutOfRange("delta grid must be strictly decreasing".into()));
    }
    if delta_grid[0] >= admissible {
        return Err(Error::OutOfRange(format!(
            "delta {} is not admissible (limit {admissible})",
            delta_grid[0]
        )));
    }

    let mut quotients = Vec::with_capacity(delta_grid.len());
    let mut resolutions = Vec::with_capacity(delta_grid.len());
    let mut dirs = opts.base_directions;
    for &delta in delta_grid {
        let mut q = quotient_at(k, delta, mu, dirs, params)?;
        loop {
            if dirs >= opts.max_directions {
                break;
            }
            let q2 = quotient_at(k, delta, mu, dirs * 2, params)?;
            let moved = (q2 - q).abs();
            q = q2;
            dirs *= 2;
            if moved <= opts.refine_rel_tol * q.abs().max(1e-12) {
                break;
            }
        }
        quotients.push(q);
        resolutions.push(dirs);
    }

    let area = floating_area(k, opts.area_resolution, params)?;
    let target = constant_c_n(n) * area.value;
    let nf = n as f64;
    let fit = fit_power_law(delta_grid, &quotients, 0.4, 1.2, 2.0 / (nf + 1.0));
    let relative_error = if target.abs() > 0.0 {
        (fit.q0 - target).abs() / target.abs()
    } else {
        fit.q0.abs()
    };
    Ok(ConvergenceReport {
        delta_grid: delta_grid.to_vec(),
        quotients,
        resolutions,
        extrapolated_limit: fit.q0,
        fit_exponent: fit.p,
        target,
        relative_error,
    })
}

fn quotient_at(
    k: &ConvexBody,
    delta: f64,
    mu: f64,
    dirs: usize,
    params: &NumericParams,
) -> Result<f64> {
    let grid = match k.dim() {
        2 => DirectionGrid::uniform_2d(dirs),
        _ => DirectionGrid::icosahedral_3d(dirs),
    };
    let profile = solve_profile(k, delta, mu, &grid, params)?;
    let fb = assemble_floating_body(k, profile)?;
    let body = fb.body.ok_or(Error::EmptyWulff)?;
    let vol = match &body.rep {
        Rep::Polygon(p) => p.lambda_area(k.space().lambda),
        Rep::Polyhedron(p) => p.lambda_volume(k.space().lambda, params.quad_rel_tol),
        _ => unreachable!("floating bodies are polytopes"),
    };
    Ok((mu - vol) / delta)
}

/// Monte-Carlo estimate of the symmetric-difference volume
/// `vol(K \ L) + vol(L \ K)`; a diagnostic, not a metric implementation.
/// Returns `(estimate, standard error)`.
pub fn symmetric_difference_volume(
    k: &ConvexBody,
    l: &ConvexBody,
    samples: u64,
    seed: u64,
) -> (f64, f64) {
    let n = k.dim();
    let lambda = k.space().lambda;
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let epos = e.clone();
        e[i] = -1.0;
        hi[i] = k.support_raw(&epos).max(l.support_raw(&epos));
        lo[i] = -k.support_raw(&e).max(l.support_raw(&e));
    }
    let boxvol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..*b)).collect();
        let p = Point::new(x.clone());
        let in_k = k.contains(&p, 0.0);
        let in_l = l.contains(&p, 0.0);
        let f = if in_k != in_l {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            (1.0 + lambda * r2).powf(-(n as f64 + 1.0) / 2.0)
        } else {
            0.0
        };
        sum += f;
        sumsq += f * f;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sumsq / m - mean * mean).max(0.0) / (m - 1.0);
    (boxvol * mean, boxvol * var.sqrt())
}

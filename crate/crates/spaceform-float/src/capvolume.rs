//! Weighted cap measures, the per-direction cap-depth equation, and the
//! floating body assembled as a Wulff shape of the solved profile.
//!
//! The cap cut off by `{x . v >= h_K(v) - depth}` carries the curved measure
//! `int (1 + lambda |x|^2)^{-(n+1)/2}`; by Fubini in the frame of `v` the
//! innermost direction integrates in closed form, leaving one adaptive
//! quadrature over the slab coordinate (two for spatial sections). The
//! slab coordinate is substituted quadratically at both ends, where the
//! section shrinks like a square root.

use crate::bodies::{wulff_shape, ConvexBody, DirectionGrid, Rep};
use crate::numerics::{adaptive_simpson_noisy, bracketed_root, RootStop};
use crate::spaceform::{
    chord_antiderivative_2d, chord_antiderivative_3d, radial_measure, tan_lambda, Direction,
};
use crate::{Error, NumericParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Per-direction solved cap depths for a fixed `delta`: the Wulff profile of
/// the floating body is `h_K - depths`.
#[derive(Debug, Clone)]
pub struct CapDepthProfile {
    pub delta: f64,
    pub grid: DirectionGrid,
    pub depths: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Floating body of a convex body: the Wulff polytope over the solved
/// profile, or the empty flag when the cuts left nothing.
#[derive(Debug, Clone)]
pub struct FloatingBodyResult {
    pub body: Option<ConvexBody>,
    pub profile: CapDepthProfile,
    pub empty: bool,
}

impl FloatingBodyResult {
    pub fn is_empty(&self) -> bool {
        self.empty
    }
}

/// Curved measure of the whole body. Closed forms for centered geodesic
/// balls and polytopes, a full-width cap quadrature otherwise.
pub(crate) fn body_measure(k: &ConvexBody, params: &NumericParams) -> Result<f64> {
    let lambda = k.space().lambda;
    let n = k.dim();
    if let Some(alpha) = k.centered_ball_radius() {
        let rho = tan_lambda(alpha, lambda)?;
        let shell = match n {
            2 => std::f64::consts::TAU,
            _ => 4.0 * std::f64::consts::PI,
        };
        return Ok(shell * radial_measure(n, lambda, 0.0, rho));
    }
    match &k.rep {
        Rep::Polygon(p) => return Ok(p.lambda_area(lambda)),
        Rep::Polyhedron(p) => return Ok(p.lambda_volume(lambda, params.quad_rel_tol)),
        _ => {}
    }
    let v = Direction::axis(n, 0);
    let width = k.support(&v) + k.support(&v.opposite());
    cap_measure(k, &v, width, params)
}

/// Curved measure of the cap `K ∩ {x . v >= h_K(v) - depth}`.
pub fn cap_measure(k: &ConvexBody, v: &Direction, depth: f64, params: &NumericParams) -> Result<f64> {
    let h = k.support(v);
    let width = h + k.support(&v.opposite());
    if depth < 0.0 || depth > width * (1.0 + 1e-12) {
        return Err(Error::OutOfRange(format!(
            "cap depth {depth} outside [0, {width}]"
        )));
    }
    if depth == 0.0 {
        return Ok(0.0);
    }
    let depth = depth.min(width);
    match k.dim() {
        2 => cap_measure_2d(k, v.coords(), h, depth, params.quad_rel_tol, params.quad_max_depth),
        3 => cap_measure_3d(k, v.coords(), h, depth, params.quad_rel_tol, params.quad_max_depth),
        _ => Err(Error::InvalidBody("caps are planar or spatial".into())),
    }
}

fn cap_measure_2d(
    k: &ConvexBody,
    v: &[f64],
    h: f64,
    depth: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let lambda = k.space().lambda;
    let w = [-v[1], v[0]];
    let cross = |t: f64| -> f64 {
        let base = [t * v[0], t * v[1]];
        match k.line_interval(&base, &w) {
            None => 0.0,
            Some((s0, s1)) => {
                let c = 1.0 + lambda * t * t;
                chord_antiderivative_2d(lambda, c, s1) - chord_antiderivative_2d(lambda, c, s0)
            }
        }
    };
    integrate_slab(&cross, h - depth, h, rel_tol, 1e-13, max_depth)
}

fn cap_measure_3d(
    k: &ConvexBody,
    v: &[f64],
    h: f64,
    depth: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let lambda = k.space().lambda;
    // centered balls: the section about the axis foot is a disk, closed form
    if let Some(alpha) = k.centered_ball_radius() {
        let rho = tan_lambda(alpha, lambda)?;
        let cross = |t: f64| {
            let r2 = rho * rho - t * t;
            if r2 <= 0.0 {
                return 0.0;
            }
            let c = 1.0 + lambda * t * t;
            std::f64::consts::PI * r2 / (c * (c + lambda * r2))
        };
        return integrate_slab(&cross, h - depth, h, rel_tol, 1e-13, max_depth);
    }
    let (w1, w2) = orthoframe(v);
    // inner sections are integrated a decade tighter; the outer quadrature
    // treats that inner tolerance as its noise level
    let inner_tol = (rel_tol * 0.1).max(1e-12);
    let cross = |t: f64| -> f64 {
        let (a, b) = match section_range(k, v, &w1, &w2, t) {
            None => return 0.0,
            Some(r) => r,
        };
        let line = |s1: f64| -> f64 {
            let base = [
                t * v[0] + s1 * w1[0],
                t * v[1] + s1 * w1[1],
                t * v[2] + s1 * w1[2],
            ];
            match k.line_interval(&base, &w2) {
                None => 0.0,
                Some((s0, s1b)) => {
                    let c = 1.0 + lambda * (t * t + s1 * s1);
                    chord_antiderivative_3d(lambda, c, s1b) - chord_antiderivative_3d(lambda, c, s0)
                }
            }
        };
        integrate_slab(&line, a, b, inner_tol, 1e-13, 36).unwrap_or(0.0)
    };
    integrate_slab(&cross, h - depth, h, rel_tol, 3.0 * inner_tol, max_depth)
}

/// `s1`-interval of the planar section at slab coordinate `t`.
fn section_range(
    k: &ConvexBody,
    v: &[f64],
    w1: &[f64],
    w2: &[f64],
    t: f64,
) -> Option<(f64, f64)> {
    match &k.rep {
        Rep::Quadric(q) => q.section_s1_range(v, w1, w2, t),
        _ => {
            // generic bound from the body support; empty chords inside the
            // range integrate to zero
            let lo = -k.support_raw(&[-w1[0], -w1[1], -w1[2]]);
            let hi = k.support_raw(w1);
            (lo < hi).then_some((lo, hi))
        }
    }
}

/// Adaptive integral over a slab coordinate with a square-root substitution
/// at both endpoints (sections vanish like sqrt at tangency). `noise_rel`
/// is the relative noise of the section evaluations.
fn integrate_slab<F: Fn(f64) -> f64>(
    cross: &F,
    t0: f64,
    t1: f64,
    rel_tol: f64,
    noise_rel: f64,
    max_depth: u32,
) -> Result<f64> {
    if t1 <= t0 {
        return Ok(0.0);
    }
    let tm = 0.5 * (t0 + t1);
    let lo_half = {
        let len = (tm - t0).sqrt();
        adaptive_simpson_noisy(|xi| 2.0 * xi * cross(t0 + xi * xi), 0.0, len, rel_tol, noise_rel, max_depth)?
    };
    let hi_half = {
        let len = (t1 - tm).sqrt();
        adaptive_simpson_noisy(|xi| 2.0 * xi * cross(t1 - xi * xi), 0.0, len, rel_tol, noise_rel, max_depth)?
    };
    Ok(lo_half.0 + hi_half.0)
}

fn orthoframe(v: &[f64]) -> ([f64; 3], [f64; 3]) {
    let pick = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let mut w1 = [
        pick[1] * v[2] - pick[2] * v[1],
        pick[2] * v[0] - pick[0] * v[2],
        pick[0] * v[1] - pick[1] * v[0],
    ];
    let l = (w1[0] * w1[0] + w1[1] * w1[1] + w1[2] * w1[2]).sqrt();
    w1 = [w1[0] / l, w1[1] / l, w1[2] / l];
    let w2 = [
        v[1] * w1[2] - v[2] * w1[1],
        v[2] * w1[0] - v[0] * w1[2],
        v[0] * w1[1] - v[1] * w1[0],
    ];
    (w1, w2)
}

/// Monte-Carlo estimate of the cap measure: uniform samples in the cap's
/// bounding box in the frame of `v`, weighted by the volume density.
/// Returns `(estimate, standard error)`.
pub fn cap_measure_mc(
    k: &ConvexBody,
    v: &Direction,
    depth: f64,
    samples: u64,
    seed: u64,
) -> (f64, f64) {
    let n = k.dim();
    let lambda = k.space().lambda;
    let h = k.support(v);
    let mut frame: Vec<Vec<f64>> = vec![v.coords().to_vec()];
    if n == 2 {
        frame.push(vec![-v.coords()[1], v.coords()[0]]);
    } else {
        let (w1, w2) = orthoframe(v.coords());
        frame.push(w1.to_vec());
        frame.push(w2.to_vec());
    }
    let mut lo = vec![h - depth];
    let mut hi = vec![h];
    for w in frame.iter().skip(1) {
        let neg: Vec<f64> = w.iter().map(|c| -c).collect();
        lo.push(-k.support_raw(&neg));
        hi.push(k.support_raw(w));
    }
    let boxvol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    if boxvol <= 0.0 || depth == 0.0 {
        return (0.0, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        x.iter_mut().for_each(|c| *c = 0.0);
        for (j, w) in frame.iter().enumerate() {
            let c = rng.gen_range(lo[j]..hi[j]);
            for i in 0..n {
                x[i] += c * w[i];
            }
        }
        let p = crate::Point::new(x.clone());
        let f = if k.contains(&p, 0.0) {
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

/// Solves the cap-depth equation
/// `measure(cap(v, s)) = delta^{(n+1)/2}` for `s`.
pub fn cap_depth_solve(
    k: &ConvexBody,
    v: &Direction,
    delta: f64,
    params: &NumericParams,
) -> Result<f64> {
    let mu = body_measure(k, params)?;
    solve_depth(k, v, delta, mu, params, None).map(|(d, _)| d)
}

pub(crate) fn solve_depth(
    k: &ConvexBody,
    v: &Direction,
    delta: f64,
    mu: f64,
    params: &NumericParams,
    hint: Option<f64>,
) -> Result<(f64, f64)> {
    let n = k.dim() as f64;
    let target = delta.powf((n + 1.0) / 2.0);
    if !(target > 0.0 && target < mu) {
        return Err(Error::OutOfRange(format!(
            "delta^((n+1)/2) = {target} must lie in (0, total measure {mu})"
        )));
    }
    let width = k.support(v) + k.support(&v.opposite());
    // keep the residual well below both the global measure scale and the
    // cap itself, so that solved depths stay accurate for small cuts
    let residual_tol = (params.residual_factor * mu).min(1e-6 * target);
    let quad_tol = params.quad_rel_tol.min(0.1 * residual_tol / target);
    let g = |s: f64| -> f64 {
        cap_measure_with_tol(k, v, s, quad_tol, params.quad_max_depth).unwrap_or(f64::NAN) - target
    };
    let stop = RootStop { x_tol: params.depth_tol, f_tol: residual_tol, max_iter: params.max_iter };
    if let Some(hc) = hint {
        let lo = (hc * 0.7).max(width * 1e-9);
        let hi = (hc * 1.4).min(width * (1.0 - 1e-12));
        if lo < hi {
            let (glo, ghi) = (g(lo), g(hi));
            if glo.is_finite() && ghi.is_finite() && glo < 0.0 && ghi > 0.0 {
                if let Ok((root, res)) = bracketed_root(g, lo, hi, stop) {
                    return Ok((root, res));
                }
            }
        }
    }
    bracketed_root(g, 0.0, width, stop)
}

fn cap_measure_with_tol(
    k: &ConvexBody,
    v: &Direction,
    depth: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let p = NumericParams { quad_rel_tol: rel_tol, quad_max_depth: max_depth, ..Default::default() };
    cap_measure(k, v, depth, &p)
}

/// The floating body for cut parameter `delta` over a direction grid:
/// solves one cap depth per direction and intersects the half-spaces
/// `{x . v <= h_K(v) - s(v)}`.
pub fn floating_body(
    k: &ConvexBody,
    delta: f64,
    grid: &DirectionGrid,
    params: &NumericParams,
) -> Result<FloatingBodyResult> {
    let mu = body_measure(k, params)?;
    let profile = solve_profile(k, delta, mu, grid, params)?;
    assemble_floating_body(k, profile)
}

pub(crate) fn solve_profile(
    k: &ConvexBody,
    delta: f64,
    mu: f64,
    grid: &DirectionGrid,
    params: &NumericParams,
) -> Result<CapDepthProfile> {
    let dirs = grid.dirs();
    // chunks are solved serially with the previous depth as a warm bracket
    // and run in parallel, collected back in grid order
    let size = 64.max(dirs.len() / (8 * rayon::current_num_threads()).max(1));
    let solved: Result<Vec<Vec<(f64, f64)>>> = dirs
        .par_chunks(size)
        .map(|chunk| {
            let mut hint = None;
            let mut out = Vec::with_capacity(chunk.len());
            for v in chunk.iter() {
                let (s, r) = solve_depth(k, v, delta, mu, params, hint)?;
                hint = Some(s);
                out.push((s, r));
            }
            Ok(out)
        })
        .collect();
    let solved = solved?;
    let mut depths = Vec::with_capacity(dirs.len());
    let mut residuals = Vec::with_capacity(dirs.len());
    for chunk in solved {
        for (s, r) in chunk {
            depths.push(s);
            residuals.push(r);
        }
    }
    Ok(CapDepthProfile { delta, grid: grid.clone(), depths, residuals })
}

pub(crate) fn assemble_floating_body(
    k: &ConvexBody,
    profile: CapDepthProfile,
) -> Result<FloatingBodyResult> {
    let values: Vec<f64> = profile
        .grid
        .dirs()
        .iter()
        .zip(&profile.depths)
        .map(|(v, s)| k.support(v) - s)
        .collect();
    match wulff_shape(*k.space(), &profile.grid, &values) {
        Ok(body) => Ok(FloatingBodyResult { body: Some(body), profile, empty: false }),
        Err(Error::EmptyWulff) => Ok(FloatingBodyResult { body: None, profile, empty: true }),
        Err(e) => Err(e),
    }
}

/// The rescaled cut parameters of the sandwich bounds: a geodesic ball
/// pinch `B(p, alpha) ⊆ K ⊆ B(p, beta)` rescales `delta` by
/// `1 + lambda tan_lambda(d(0,p) ∓ alpha/beta)^2` on the two sides.
pub fn sandwich_deltas(
    delta: f64,
    lambda: f64,
    dist_origin_p: f64,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    if !(0.0 <= alpha && alpha < beta) {
        return Err(Error::OutOfRange("need 0 <= alpha < beta".into()));
    }
    let t1 = tan_lambda(dist_origin_p - alpha, lambda)?;
    let t2 = tan_lambda(dist_origin_p + beta, lambda)?;
    Ok((delta * (1.0 + lambda * t1 * t1), delta * (1.0 + lambda * t2 * t2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::hausdorff_distance;
    use crate::{Point, SpaceForm};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit_disk() -> ConvexBody {
        let e = SpaceForm::new(0.0, 2).unwrap();
        ConvexBody::ball(e, &Point::origin(2), 1.0).unwrap()
    }

    fn hyper_disk(alpha: f64) -> ConvexBody {
        let h = SpaceForm::new(-1.0, 2).unwrap();
        ConvexBody::ball(h, &Point::origin(2), alpha).unwrap()
    }

    const SEG_AREA_HALF: f64 = 0.614_184_849_304_378_4; // pi/3 - sqrt(3)/4

    #[test]
    fn cap_measure_examples() {
        let p = NumericParams::default();
        let disk = unit_disk();
        let v = Direction::axis(2, 0);
        assert_relative_eq!(
            cap_measure(&disk, &v, 1.0, &p).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-10
        );
        assert_relative_eq!(
            cap_measure(&disk, &v, 0.5, &p).unwrap(),
            SEG_AREA_HALF,
            epsilon = 1e-10
        );
        assert_eq!(cap_measure(&disk, &v, 0.0, &p).unwrap(), 0.0);
        let hd = hyper_disk(1.0);
        let width = 2.0 * 1.0f64.tanh();
        assert_relative_eq!(
            cap_measure(&hd, &v, width, &p).unwrap(),
            3.412_276_265_284_902,
            epsilon = 1e-9
        );
        assert!(cap_measure(&disk, &v, 3.0, &p).is_err());
    }

    #[test]
    fn cap_measure_matches_body_measure() {
        let p = NumericParams::default();
        let s = SpaceForm::new(1.0, 2).unwrap();
        let sd = ConvexBody::ball(s, &Point::origin(2), std::f64::consts::FRAC_PI_4).unwrap();
        assert_relative_eq!(
            body_measure(&sd, &p).unwrap(),
            1.840_302_369_021_220_2,
            epsilon = 1e-12
        );
        let v = Direction::from_angle(0.3);
        assert_relative_eq!(
            cap_measure(&sd, &v, 2.0, &p).unwrap(),
            body_measure(&sd, &p).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn cap_measure_strictly_increasing_in_depth() {
        let p = NumericParams::default();
        let body = ConvexBody::smooth2d(SpaceForm::new(-1.0, 2).unwrap(), 0.55, &[(3, 0.04, 0.0)])
            .unwrap();
        let v = Direction::from_angle(1.1);
        let width = body.support(&v) + body.support(&v.opposite());
        let mut last = 0.0;
        for j in 1..12 {
            let depth = width * j as f64 / 12.0;
            let m = cap_measure(&body, &v, depth, &p).unwrap();
            assert!(m > last, "not increasing at depth {depth}");
            last = m;
        }
    }

    #[test]
    fn cap_measure_3d_ball_and_box() {
        let p = NumericParams::default();
        let e3 = SpaceForm::new(0.0, 3).unwrap();
        let ball = ConvexBody::ball(e3, &Point::origin(3), 1.0).unwrap();
        let v = Direction::axis(3, 0);
        assert_relative_eq!(
            cap_measure(&ball, &v, 1.0, &p).unwrap(),
            2.0 / 3.0 * std::f64::consts::PI,
            epsilon = 1e-9
        );
        // spherical cap of height h: pi h^2 (3r - h)/3
        assert_relative_eq!(
            cap_measure(&ball, &v, 0.5, &p).unwrap(),
            std::f64::consts::PI * 0.25 * 2.5 / 3.0,
            epsilon = 1e-9
        );
        let h3 = SpaceForm::new(-1.0, 3).unwrap();
        let hball = ConvexBody::ball(h3, &Point::origin(3), 1.0).unwrap();
        let w = Direction::new(vec![0.3, -0.5, 0.8]).unwrap();
        let width = hball.support(&w) + hball.support(&w.opposite());
        assert_relative_eq!(
            cap_measure(&hball, &w, width, &p).unwrap(),
            5.110_932_705_708_289,
            epsilon = 1e-8
        );
        // ellipsoid half-volume via the generic section path
        let ell = ConvexBody::ellipsoid(e3, &[1.5, 1.0, 0.5]).unwrap();
        let u = Direction::new(vec![1.0, 1.0, 1.0]).unwrap();
        let hv = ell.support(&u);
        assert_relative_eq!(
            cap_measure(&ell, &u, hv, &p).unwrap(),
            0.5 * 4.0 / 3.0 * std::f64::consts::PI * 0.75,
            epsilon = 1e-8
        );
        // flat slab of a cube along an axis
        let cube = ConvexBody::polytope_from_vertices(
            e3,
            &(0..8)
                .map(|k| {
                    vec![
                        (1 - 2 * (k & 1)) as f64 * 0.5,
                        (1 - 2 * ((k >> 1) & 1)) as f64 * 0.5,
                        (1 - 2 * ((k >> 2) & 1)) as f64 * 0.5,
                    ]
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let vz = Direction::axis(3, 2);
        assert_relative_eq!(cap_measure(&cube, &vz, 0.25, &p).unwrap(), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn mc_oracle_agrees() {
        let p = NumericParams::default();
        let cases: Vec<(ConvexBody, f64)> = vec![
            (unit_disk(), 0.6),
            (hyper_disk(1.0), 0.9),
            (
                ConvexBody::smooth2d(SpaceForm::new(1.0, 2).unwrap(), 0.8, &[(2, 0.1, 0.05)])
                    .unwrap(),
                0.5,
            ),
        ];
        for (i, (body, depth)) in cases.iter().enumerate() {
            let v = Direction::from_angle(0.4 + i as f64);
            let exact = cap_measure(body, &v, *depth, &p).unwrap();
            let (mc, se) = cap_measure_mc(body, &v, *depth, 400_000, 1234 + i as u64);
            assert!(
                (mc - exact).abs() <= 3.5 * se,
                "case {i}: exact {exact}, mc {mc} +- {se}"
            );
        }
    }

    #[test]
    fn depth_solve_examples() {
        let p = NumericParams::default();
        let disk = unit_disk();
        let v = Direction::axis(2, 0);
        // half disk: delta^{3/2} = pi/2
        let delta_half = std::f64::consts::FRAC_PI_2.powf(2.0 / 3.0);
        assert_abs_diff_eq!(cap_depth_solve(&disk, &v, delta_half, &p).unwrap(), 1.0, epsilon = 1e-9);
        let delta_seg = SEG_AREA_HALF.powf(2.0 / 3.0);
        assert_abs_diff_eq!(cap_depth_solve(&disk, &v, delta_seg, &p).unwrap(), 0.5, epsilon = 1e-9);
        let too_big = std::f64::consts::PI.powf(2.0 / 3.0) * 1.01;
        assert!(matches!(cap_depth_solve(&disk, &v, too_big, &p), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn depth_increasing_in_delta_and_residuals_small() {
        let p = NumericParams::default();
        let body = hyper_disk(0.8);
        let v = Direction::from_angle(2.2);
        let mu = body_measure(&body, &p).unwrap();
        let mut last = 0.0;
        for j in 1..8 {
            let delta = (0.9 * mu).powf(2.0 / 3.0) * j as f64 / 8.0;
            let (s, res) = solve_depth(&body, &v, delta, mu, &p, None).unwrap();
            assert!(s > last);
            assert!(res <= 1e-10 * mu);
            last = s;
        }
    }

    #[test]
    fn floating_body_of_disk_is_disk() {
        let p = NumericParams::default();
        let disk = unit_disk();
        let grid = DirectionGrid::uniform_2d(512);
        let delta = SEG_AREA_HALF.powf(2.0 / 3.0);
        let fb = floating_body(&disk, delta, &grid, &p).unwrap();
        assert!(!fb.is_empty());
        // constant profile: every cut sits at distance 1/2
        let (lo, hi) = fb
            .profile
            .depths
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(hi, 0.5, epsilon = 1e-8);
        let body = fb.body.unwrap();
        for k in 0..16 {
            let v = Direction::from_angle(0.123 + 0.4 * k as f64);
            let h = body.support(&v);
            assert!((0.5 - 1e-8..0.5001).contains(&h), "support {h}");
        }
    }

    #[test]
    fn hyperbolic_disk_profile_constant() {
        let p = NumericParams::default();
        let hd = hyper_disk(1.0);
        let grid = DirectionGrid::uniform_2d(256);
        let fb = floating_body(&hd, 0.05, &grid, &p).unwrap();
        let (lo, hi) = fb
            .profile
            .depths
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        assert!(hi - lo <= 1e-8, "profile spread {}", hi - lo);
    }

    #[test]
    fn floating_body_nesting_and_inclusion() {
        let p = NumericParams::default();
        let body = ConvexBody::smooth2d(SpaceForm::new(-1.0, 2).unwrap(), 0.55, &[(3, 0.04, 0.0)])
            .unwrap();
        let grid = DirectionGrid::uniform_2d(256);
        let f1 = floating_body(&body, 0.02, &grid, &p).unwrap().body.unwrap();
        let f2 = floating_body(&body, 0.06, &grid, &p).unwrap().body.unwrap();
        for v in grid.dirs() {
            let h_k = body.support(v);
            let h1 = f1.support(v);
            let h2 = f2.support(v);
            assert!(h2 <= h1 + 1e-10, "nesting violated");
            assert!(h1 <= h_k + 1e-10, "inclusion violated");
        }
    }

    #[test]
    fn floating_body_empty_for_huge_delta() {
        let p = NumericParams::default();
        let disk = unit_disk();
        let grid = DirectionGrid::uniform_2d(128);
        let delta = (0.98 * std::f64::consts::PI).powf(2.0 / 3.0);
        let fb = floating_body(&disk, delta, &grid, &p).unwrap();
        assert!(fb.is_empty());
        assert!(fb.body.is_none());
    }

    #[test]
    fn equivariance_under_grid_rotation() {
        let p = NumericParams::default();
        let body = ConvexBody::smooth2d(SpaceForm::new(0.0, 2).unwrap(), 0.7, &[(2, 0.08, 0.03)])
            .unwrap();
        let m = 64usize;
        let grid = DirectionGrid::uniform_2d(m);
        let shift = 5usize;
        let rot = body.rotated2(shift as f64 / m as f64 * std::f64::consts::TAU).unwrap();
        let fb = floating_body(&body, 0.05, &grid, &p).unwrap();
        let fr = floating_body(&rot, 0.05, &grid, &p).unwrap();
        for j in 0..m {
            let a = fb.profile.depths[j];
            let b = fr.profile.depths[(j + shift) % m];
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn euclidean_floating_body_converges_to_body() {
        let p = NumericParams::default();
        let disk = unit_disk();
        let grid = DirectionGrid::uniform_2d(512);
        let probe = DirectionGrid::uniform_2d(512);
        let mut last = f64::INFINITY;
        for &delta in &[0.05, 0.02, 0.008, 0.003] {
            let fb = floating_body(&disk, delta, &grid, &p).unwrap().body.unwrap();
            let hd = hausdorff_distance(&fb, &disk, &probe);
            assert!(hd < last);
            last = hd;
        }
        assert!(last < 2e-3);
    }

    #[test]
    fn sandwich_deltas_examples() {
        assert_eq!(sandwich_deltas(0.3, 0.0, 0.5, 0.1, 0.9).unwrap(), (0.3, 0.3));
        let (d1, d2) = sandwich_deltas(1.0, -1.0, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(d1, 1.0);
        assert_relative_eq!(d2, 0.419_974_341_614_026_1, epsilon = 1e-14);
        let (_, d2s) = sandwich_deltas(1.0, 1.0, 0.0, 0.0, std::f64::consts::PI / 6.0).unwrap();
        assert_relative_eq!(d2s, 4.0 / 3.0, epsilon = 1e-14);
        assert!(sandwich_deltas(1.0, -1.0, 0.0, 0.5, 0.2).is_err());
    }

    #[test]
    fn solver_residuals_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let p = NumericParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let lambda = rng.gen_range(-1.0..1.0);
            let sf = SpaceForm::new(lambda, 2).unwrap();
            let r = rng.gen_range(0.3..0.8);
            let body = ConvexBody::ball(sf, &Point::origin(2), r).unwrap();
            let mu = body_measure(&body, &p).unwrap();
            let delta = (mu * rng.gen_range(0.05..0.8)).powf(2.0 / 3.0);
            let v = Direction::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let (_, res) = solve_depth(&body, &v, delta, mu, &p, None).unwrap();
            assert!(res <= 1e-10 * mu, "residual {res} vs mu {mu}");
        }
    }
}

//! Scalar numerics: adaptive quadrature, bracketed root solving, golden
//! section search and the power-law fit used by the convergence reports.

use crate::{Error, Result};

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// Returns the integral together with an error estimate. Fails when the
/// requested tolerance is unattainable within `max_depth` bisections.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson_noisy(f, a, b, rel_tol, 1e-13, max_depth)
}

/// [`adaptive_simpson`] for integrands with a known relative noise level
/// (nested quadratures, root-found section endpoints). Intervals whose
/// refinement difference is at the noise are accepted; without this the
/// noise-to-tolerance ratio stays constant under bisection and the
/// subdivision never terminates.
pub fn adaptive_simpson_noisy<F>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    noise_rel: f64,
    max_depth: u32,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok((0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Coarse magnitude scale so that the relative tolerance also works for
    // integrals that happen to be near zero by cancellation.
    let scale = ((b - a).abs() * (fa.abs() + 4.0 * fm.abs() + fb.abs()) / 6.0).max(f64::MIN_POSITIVE);
    let tol = rel_tol * scale;
    let floor_density = noise_rel * scale / (b - a).abs();
    let mut err_acc = 0.0;
    let value = simpson_rec(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol,
        floor_density,
        max_depth,
        &mut err_acc,
    )?;
    Ok((value, err_acc))
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    floor_density: f64,
    depth: u32,
    err_acc: &mut f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand near [{a}, {b}]"
        )));
    }
    let accept = tol.max(floor_density * (b - a).abs());
    if delta.abs() <= 15.0 * accept {
        *err_acc += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "tolerance unattained on [{a}, {b}]"
        )));
    }
    let lv = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, floor_density, depth - 1, err_acc)?;
    let rv = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, floor_density, depth - 1, err_acc)?;
    Ok(lv + rv)
}

/// Stopping rule for [`bracketed_root`].
#[derive(Debug, Clone, Copy)]
pub struct RootStop {
    /// Absolute tolerance on the argument.
    pub x_tol: f64,
    /// Absolute tolerance on the residual `|f(x)|`.
    pub f_tol: f64,
    /// Iteration cap.
    pub max_iter: u32,
}

/// Root of a strictly monotone `f` on the bracket `[lo, hi]`.
///
/// Bisection with secant acceleration: the secant candidate is used when it
/// falls safely inside the current bracket, otherwise the step falls back to
/// a bisection. Requires `f(lo) <= 0 <= f(hi)` or the reverse.
pub fn bracketed_root<F>(mut f: F, mut lo: f64, mut hi: f64, stop: RootStop) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok((lo, 0.0));
    }
    if fhi == 0.0 {
        return Ok((hi, 0.0));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::SolverFailure(format!(
            "no sign change on bracket [{lo}, {hi}]: f = [{flo}, {fhi}]"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x);
    for _ in 0..stop.max_iter {
        if fx.abs() <= stop.f_tol || (hi - lo).abs() <= stop.x_tol {
            return Ok((x, fx.abs()));
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // Secant through the bracket endpoints; accept only interior points
        // that actually shrink the bracket.
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        let margin = 0.01 * (hi - lo);
        x = if secant.is_finite() && secant > lo + margin && secant < hi - margin {
            secant
        } else {
            0.5 * (lo + hi)
        };
        fx = f(x);
    }
    if fx.abs() <= stop.f_tol * 10.0 || (hi - lo).abs() <= stop.x_tol * 10.0 {
        return Ok((x, fx.abs()));
    }
    Err(Error::SolverFailure(format!(
        "no convergence after {} iterations, bracket [{lo}, {hi}], residual {fx}",
        stop.max_iter
    )))
}

/// Maximizer of a function on `[a, b]` by golden-section search.
///
/// Intended for unimodal profiles; for an (anti)monotone profile it converges
/// to the corresponding endpoint.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    (x, fx)
}

/// Result of [`fit_power_law`].
#[derive(Debug, Clone, Copy)]
pub struct PowerFit {
    /// Extrapolated value at `delta = 0`.
    pub q0: f64,
    /// Coefficient of the correction term.
    pub q1: f64,
    /// Fitted exponent.
    pub p: f64,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
}

/// Least-squares fit of `q(delta) = q0 + q1 * delta^p` over a delta grid.
///
/// For each candidate exponent the two linear coefficients have a closed
/// normal-equation solution; the exponent itself is scanned over
/// `[p_min, p_max]` and refined by golden section around the best residual.
pub fn fit_power_law(deltas: &[f64], values: &[f64], p_min: f64, p_max: f64, p_seed: f64) -> PowerFit {
    assert_eq!(deltas.len(), values.len());
    assert!(deltas.len() >= 3, "need at least 3 points for the fit");
    let solve = |p: f64| -> (f64, f64, f64) {
        let n = deltas.len() as f64;
        let mut sx = 0.0;
        let mut sxx = 0.0;
        let mut sy = 0.0;
        let mut sxy = 0.0;
        for (&d, &q) in deltas.iter().zip(values) {
            let x = d.powf(p);
            sx += x;
            sxx += x * x;
            sy += q;
            sxy += x * q;
        }
        let det = n * sxx - sx * sx;
        if det.abs() < 1e-300 {
            return (values[values.len() - 1], 0.0, f64::INFINITY);
        }
        let q0 = (sxx * sy - sx * sxy) / det;
        let q1 = (n * sxy - sx * sy) / det;
        let mut ss = 0.0;
        for (&d, &q) in deltas.iter().zip(values) {
            let r = q0 + q1 * d.powf(p) - q;
            ss += r * r;
        }
        (q0, q1, (ss / n).sqrt())
    };

    // Coarse scan keeps the search robust when the residual is not unimodal.
    let mut best_p = p_seed.clamp(p_min, p_max);
    let mut best_rms = solve(best_p).2;
    let scan = 33;
    for i in 0..=scan {
        let p = p_min + (p_max - p_min) * i as f64 / scan as f64;
        let rms = solve(p).2;
        if rms < best_rms {
            best_rms = rms;
            best_p = p;
        }
    }
    let half = (p_max - p_min) / scan as f64;
    let (p, _) = golden_section_max(
        |p| -solve(p).2,
        (best_p - half).max(p_min),
        (best_p + half).min(p_max),
        1e-6,
    );
    let (q0, q1, rms) = solve(p);
    PowerFit { q0, q1, p, rms }
}

/// Geometric grid from `max` down to `min` (inclusive, `count >= 2` points).
pub fn geometric_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(min > 0.0 && max > min && count >= 2);
    let ratio = (min / max).powf(1.0 / (count as f64 - 1.0));
    (0..count).map(|i| max * ratio.powi(i as i32)).collect()
}

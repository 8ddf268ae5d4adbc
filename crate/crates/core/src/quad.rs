//! Adaptive Simpson quadrature.
//!
//! Used by the spectral oracle for sine coefficients of general data and
//! by the kernel diagnostics that compare discrete coefficients against
//! the integrals they approximate. Integrands must be finite on the whole
//! closed interval; weakly singular factors are removed analytically by
//! the callers (via substitution) before integration.

use crate::error::{Result, SforError};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns the integral estimate, or an accuracy error carrying the
/// achieved error estimate when the subdivision budget is exhausted
/// before the tolerance is met. Nonfinite integrand values are reported
/// as numerical failures.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_impl(&f, a, b, tol, MAX_DEPTH)
}

/// Integrates `f` over `[a, b]`, splitting first at the given interior
/// breakpoints (points outside `(a, b)` are ignored). Suited to data with
/// kinks or jumps at known locations.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);
    let pieces = nodes.len() - 1;
    let mut total = 0.0;
    for w in nodes.windows(2) {
        total += integrate_impl(&f, w[0], w[1], tol / pieces as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

fn integrate_impl<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(SforError::InvalidArgument(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(SforError::InvalidArgument(
            "quadrature endpoints must be finite".into(),
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    for (x, v) in [(a, fa), (m, fm), (b, fb)] {
        if !v.is_finite() {
            return Err(SforError::Numerical(format!(
                "integrand is not finite at x = {x}"
            )));
        }
    }
    let whole = simpson(a, b, fa, fm, fb);
    let mut achieved = 0.0;
    let value = adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth, &mut achieved)?;
    if achieved > tol {
        return Err(SforError::Accuracy {
            achieved,
            requested: tol,
        });
    }
    Ok(value)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    achieved: &mut f64,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    for (x, v) in [(lm, flm), (rm, frm)] {
        if !v.is_finite() {
            return Err(SforError::Numerical(format!(
                "integrand is not finite at x = {x}"
            )));
        }
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Standard Richardson estimate: Simpson halving gains a factor 15.
    if delta.abs() <= 15.0 * tol || depth == 0 || (m - a).abs() < f64::EPSILON * m.abs() {
        if delta.abs() > 15.0 * tol {
            *achieved += delta.abs() / 15.0;
        }
        return Ok(left + right + delta / 15.0);
    }
    let half = 0.5 * tol;
    let l = adapt(f, a, fa, m, fm, lm, flm, left, half, depth - 1, achieved)?;
    let r = adapt(f, m, fm, b, fb, rm, frm, right, half, depth - 1, achieved)?;
    Ok(l + r)
}

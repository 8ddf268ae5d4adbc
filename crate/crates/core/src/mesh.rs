//! Graded temporal meshes `t_k = T (k/N)^r`.
//!
//! Solutions of time-fractional wave problems with nonsmooth data behave
//! like `t^sigma` with small `sigma > 0` near `t = 0`; a mesh graded with
//! exponent `r > 1` clusters points there so that low-order time-stepping
//! formulas recover their full convergence rates. `r = 1` is the uniform
//! mesh.
//!
//! The grading exponents that balance the initial layer against interior
//! accuracy for each scheme/formulation pair live in [`grading`].

use crate::error::{Result, SforError};

/// A nonuniform partition `0 = t_0 < t_1 < ... < t_N = T` with
/// `t_k = T (k/N)^r`.
#[derive(Debug, Clone)]
pub struct GradedMesh {
    t_final: f64,
    n_intervals: usize,
    grading: f64,
    points: Vec<f64>,
    steps: Vec<f64>,
}

/// Builds the graded mesh `t_k = T (k/N)^r`, `k = 0..=N`.
///
/// Requires `T > 0`, `N >= 1`, and `r >= 1`; the endpoints `t_0 = 0` and
/// `t_N = T` are exact.
pub fn build_graded_mesh(t_final: f64, n: usize, r: f64) -> Result<GradedMesh> {
    if t_final <= 0.0 || !t_final.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "final time must be positive and finite, got {t_final}"
        )));
    }
    if n == 0 {
        return Err(SforError::InvalidArgument(
            "mesh needs at least one interval (N >= 1)".into(),
        ));
    }
    if r < 1.0 || !r.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "grading exponent must satisfy r >= 1, got {r}"
        )));
    }
    let nf = n as f64;
    let points: Vec<f64> = (0..=n).map(|k| t_final * (k as f64 / nf).powf(r)).collect();
    let steps: Vec<f64> = (1..=n).map(|k| points[k] - points[k - 1]).collect();
    // powf is monotone for these arguments, but guard against pathological
    // underflow at huge r producing a zero step.
    if steps.iter().any(|&tau| tau <= 0.0 || tau.is_nan()) {
        return Err(SforError::InvalidArgument(format!(
            "mesh degenerates: some step is not positive for N = {n}, r = {r}"
        )));
    }
    Ok(GradedMesh {
        t_final,
        n_intervals: n,
        grading: r,
        points,
        steps,
    })
}

impl GradedMesh {
    /// Final time `T`.
    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Number of intervals `N`.
    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    /// Grading exponent `r`.
    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// All mesh points `t_0, ..., t_N`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Mesh point `t_k`, `0 <= k <= N`.
    pub fn point(&self, k: usize) -> f64 {
        self.points[k]
    }

    /// Step `tau_k = t_k - t_{k-1}`, `1 <= k <= N`.
    pub fn step(&self, k: usize) -> f64 {
        self.steps[k - 1]
    }

    /// All steps `tau_1, ..., tau_N`.
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Step ratio `rho_k = tau_k / tau_{k+1}`, `1 <= k <= N-1`.
    pub fn ratio(&self, k: usize) -> f64 {
        self.steps[k - 1] / self.steps[k]
    }

    /// Largest step ratio `max_k rho_k` (zero intervals yield 0.0).
    pub fn max_ratio(&self) -> f64 {
        (1..self.n_intervals)
            .map(|k| self.ratio(k))
            .fold(0.0, f64::max)
    }
}

/// Offset evaluation point `t_{n-theta} = theta t_{n-1} + (1-theta) t_n`.
///
/// Requires `1 <= n <= N` and `0 <= theta < 1`. With `theta = 0` this is
/// `t_n` exactly; the Alikhanov formula uses `theta = beta/2`.
pub fn offset_time(mesh: &GradedMesh, n: usize, theta: f64) -> Result<f64> {
    if n == 0 || n > mesh.n_intervals {
        return Err(SforError::IndexOutOfRange(format!(
            "time level n = {n} outside 1..={}",
            mesh.n_intervals
        )));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(SforError::InvalidArgument(format!(
            "offset theta must lie in [0, 1), got {theta}"
        )));
    }
    if theta == 0.0 {
        return Ok(mesh.points[n]);
    }
    Ok(theta * mesh.points[n - 1] + (1.0 - theta) * mesh.points[n])
}

/// Optimal grading exponents for each scheme / reduced-formulation pair.
///
/// The exponents trade the strength of the initial singularity of the
/// stepped variable against the formula's interior order; each function
/// returns the smallest `r` attaining the best possible global rate for
/// `alpha in (1, 2)` (`beta = alpha/2`):
///
/// | formula    | V-form            | Z-form                        |
/// |------------|-------------------|-------------------------------|
/// | L1         | `(4-alpha)/(2-alpha)` | `max{(4-alpha)/alpha, 2}` |
/// | Alikhanov  | `4/(2-alpha)`     | `max{4/alpha, 8/(4-alpha)}`   |
pub mod grading {
    fn check_alpha(alpha: f64) {
        assert!(
            alpha > 1.0 && alpha < 2.0,
            "fractional order must lie in (1, 2), got {alpha}"
        );
    }

    /// Optimal `r` for the L1 formula applied to the V-form.
    pub fn r_l1_v(alpha: f64) -> f64 {
        check_alpha(alpha);
        (4.0 - alpha) / (2.0 - alpha)
    }

    /// Optimal `r` for the L1 formula applied to the Z-form.
    pub fn r_l1_z(alpha: f64) -> f64 {
        check_alpha(alpha);
        ((4.0 - alpha) / alpha).max(2.0)
    }

    /// Optimal `r` for the Alikhanov formula applied to the V-form.
    pub fn r_alikhanov_v(alpha: f64) -> f64 {
        check_alpha(alpha);
        4.0 / (2.0 - alpha)
    }

    /// Optimal `r` for the Alikhanov formula applied to the Z-form.
    pub fn r_alikhanov_z(alpha: f64) -> f64 {
        check_alpha(alpha);
        (4.0 / alpha).max(8.0 / (4.0 - alpha))
    }
}

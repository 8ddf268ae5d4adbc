//! Time stepping for the reduced first-order-in-`beta` system.
//!
//! The wave-type problem `D_t^alpha u - u_xx = t^{1-alpha} f(x)` with
//! `alpha in (1, 2)`, `u(., 0) = a0`, `u_t(., 0) = a1`, is split
//! symmetrically with `beta = alpha/2 in (1/2, 1)`:
//!
//! * **V-form** — `w = D_t^beta u`:
//!   `D_t^beta w - u_xx = a1 omega_{2-alpha}(t) + t^{1-alpha} f`.
//! * **Z-form** — `w = D_t^beta u - q omega_{2-beta}(t)` with
//!   `q = a1 + Gamma(2-alpha) f`: `D_t^beta w - u_xx = 0`, i.e. the
//!   singular part of the source is absorbed into the reduction.
//!
//! Both Caputo derivatives are discretized with the same kernel row
//! (L1 or Alikhanov), so each time step is a 2x2 block system in
//! `(U^n, W^n)`. The block system is solved in increment form: the
//! auxiliary equation is used to eliminate `W^n`, leaving one SPD
//! tridiagonal solve for `delta = U^n - U^{n-1}` per step. Eliminating
//! `U^n` directly (rather than its increment) is algebraically equivalent
//! but subtracts two near-equal history sums and loses most of the
//! solution on strongly graded meshes.

use crate::error::{Result, SforError};
use crate::fracops::{alikhanov_certified, kernel_row};
use crate::mesh::{offset_time, GradedMesh};
use crate::space1d::{l2_project, solve_spd_tridiagonal, DataDescriptor, SpatialDisc, SymTridiag};
use crate::special::{gamma_fn, omega};

pub use crate::fracops::Formula;

/// Which reduced system is stepped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `w = D_t^beta u`; the source keeps its `t^{1-alpha}` singularity.
    VForm,
    /// `w = D_t^beta u - q omega_{2-beta}(t)`; homogeneous source.
    ZForm,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::VForm => "V",
            Scheme::ZForm => "Z",
        }
    }
}

/// Continuous problem plus discretization choices.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// Time-fractional order, `alpha in (1, 2)`.
    pub alpha: f64,
    /// Spatial domain `(0, length)`.
    pub length: f64,
    /// Final time.
    pub t_final: f64,
    /// Initial value `u(., 0)`.
    pub a0: DataDescriptor,
    /// Initial velocity `u_t(., 0)`.
    pub a1: DataDescriptor,
    /// Spatial factor of the source `t^{1-alpha} f(x)`.
    pub f: DataDescriptor,
    pub scheme: Scheme,
    pub formula: Formula,
}

impl ProblemSpec {
    /// Reduced order `beta = alpha / 2`.
    pub fn beta(&self) -> f64 {
        0.5 * self.alpha
    }

    /// Evaluation offset `theta` of the chosen formula.
    pub fn theta(&self) -> f64 {
        self.formula.theta(self.beta())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(SforError::InvalidArgument(format!(
                "fractional order must lie in (1, 2), got {}",
                self.alpha
            )));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(SforError::InvalidArgument(format!(
                "domain length must be positive, got {}",
                self.length
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(SforError::InvalidArgument(format!(
                "final time must be positive, got {}",
                self.t_final
            )));
        }
        Ok(())
    }
}

/// Solver state after `level` accepted steps.
#[derive(Debug, Clone)]
pub struct SolverState {
    level: usize,
    u: Vec<f64>,
    w: Vec<f64>,
    /// Stored increments `U^k - U^{k-1}`, k = 1..=level. History sums are
    /// formed from increments directly; differencing stored values would
    /// reintroduce the cancellation the increment form avoids.
    du: Vec<Vec<f64>>,
    dw: Vec<Vec<f64>>,
    proj_a1: Vec<f64>,
    proj_f: Vec<f64>,
    proj_q: Vec<f64>,
    notes: Vec<String>,
}

impl SolverState {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// Full time history of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// `times[n] = t_n`, `n = 0..=N`.
    pub times: Vec<f64>,
    /// `u[n]` holds the interior nodal values of `U^n`.
    pub u: Vec<Vec<f64>>,
    /// `w[n]` holds the auxiliary variable `W^n`.
    pub w: Vec<Vec<f64>>,
    pub notes: Vec<String>,
}

impl Trajectory {
    pub fn final_u(&self) -> &[f64] {
        self.u
            .last()
            .expect("trajectory holds at least the initial level")
    }
}

/// Source terms of the two block equations at `t_{n-theta}`:
/// equation 1 reads `(D_tau^beta W)^{n-theta} - Delta_h U^{n-theta} = s1`,
/// equation 2 reads `W^{n-theta} = (D_tau^beta U)^{n-theta} + s2`.
fn sources(
    spec: &ProblemSpec,
    state_proj: (&[f64], &[f64], &[f64]),
    t_off: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (p_a1, p_f, p_q) = state_proj;
    let dim = p_a1.len();
    match spec.scheme {
        Scheme::VForm => {
            let w_a = omega(2.0 - spec.alpha, t_off).expect("t_off > 0");
            let pw = t_off.powf(1.0 - spec.alpha);
            let s1 = (0..dim).map(|i| p_a1[i] * w_a + pw * p_f[i]).collect();
            (s1, vec![0.0; dim])
        }
        Scheme::ZForm => {
            let w_b = omega(2.0 - spec.beta(), t_off).expect("t_off > 0");
            let s2 = (0..dim).map(|i| -p_q[i] * w_b).collect();
            (vec![0.0; dim], s2)
        }
    }
}

/// Projects the problem data and sets the initial state
/// `U^0 = P_h a0`, `W^0 = 0` (the reduced variable vanishes at `t = 0`
/// for both forms).
pub fn init(spec: &ProblemSpec, mesh: &GradedMesh, disc: &SpatialDisc) -> Result<SolverState> {
    spec.validate()?;
    if (spec.length - disc.length).abs() > 1e-12 * spec.length {
        return Err(SforError::InvalidArgument(format!(
            "spatial discretization covers (0, {}) but the problem lives on (0, {})",
            disc.length, spec.length
        )));
    }
    if (spec.t_final - mesh.t_final()).abs() > 1e-12 * spec.t_final {
        return Err(SforError::InvalidArgument(format!(
            "time mesh ends at {} but the problem runs to {}",
            mesh.t_final(),
            spec.t_final
        )));
    }
    let u0 = l2_project(disc, &spec.a0)?;
    let proj_a1 = l2_project(disc, &spec.a1)?;
    let proj_f = l2_project(disc, &spec.f)?;
    let g2a = gamma_fn(2.0 - spec.alpha)?;
    let proj_q: Vec<f64> = proj_a1
        .iter()
        .zip(&proj_f)
        .map(|(a, f)| a + g2a * f)
        .collect();
    let dim = u0.len();
    let mut notes = vec![format!(
        "init: U^0 = L2 projection of the initial value ({} interior nodes); \
         auxiliary variable W^0 = 0 since the reduced variable vanishes at t = 0",
        dim
    )];
    if spec.formula == Formula::Alikhanov && !alikhanov_certified(mesh) {
        notes.push(format!(
            "warning: max step ratio {:.3} exceeds 7/4; the Alikhanov kernel \
             positivity certificate does not cover this mesh",
            mesh.max_ratio()
        ));
    }
    Ok(SolverState {
        level: 0,
        u: u0,
        w: vec![0.0; dim],
        du: Vec::new(),
        dw: Vec::new(),
        proj_a1,
        proj_f,
        proj_q,
        notes,
    })
}

/// Advances the state one level. Eliminating `W^n` via equation 2 turns
/// the block system into one SPD solve for the increment
/// `delta = U^n - U^{n-1}`:
///
/// ```text
///   [A_0^2/(1-theta) M + (1-theta) K] delta =
///       M [s1 - A_0/(1-theta) s2 + A_0/(1-theta) (W^{n-1} - H_U) - H_W]
///       - K U^{n-1},
/// ```
///
/// with history sums `H_X = sum_{k<n} A_{n-k} (X^k - X^{k-1})`, then
/// `W^n = (A_0 delta + H_U + s2 - theta W^{n-1}) / (1-theta)`.
pub fn step(
    state: SolverState,
    spec: &ProblemSpec,
    mesh: &GradedMesh,
    disc: &SpatialDisc,
) -> Result<SolverState> {
    let n = state.level + 1;
    step_inner(state, spec, mesh, disc, n).map_err(|e| SforError::StepFailed {
        level: n,
        source: Box::new(e),
    })
}

fn step_inner(
    mut state: SolverState,
    spec: &ProblemSpec,
    mesh: &GradedMesh,
    disc: &SpatialDisc,
    n: usize,
) -> Result<SolverState> {
    let beta = spec.beta();
    let theta = spec.theta();
    let omt = 1.0 - theta;
    let dim = state.u.len();

    let row = kernel_row(mesh, beta, n, spec.formula)?;
    let a0 = row.coeffs[0];
    let t_off = offset_time(mesh, n, theta)?;
    let (s1, s2) = sources(spec, (&state.proj_a1, &state.proj_f, &state.proj_q), t_off);

    let mut h_u = vec![0.0; dim];
    let mut h_w = vec![0.0; dim];
    for k in 1..n {
        let c = row.coeffs[n - k];
        let (duk, dwk) = (&state.du[k - 1], &state.dw[k - 1]);
        for i in 0..dim {
            h_u[i] += c * duk[i];
            h_w[i] += c * dwk[i];
        }
    }

    let r = a0 / omt;
    let mass_arg: Vec<f64> = (0..dim)
        .map(|i| s1[i] - r * s2[i] + r * (state.w[i] - h_u[i]) - h_w[i])
        .collect();
    let m_part = disc.mass.apply(&mass_arg);
    let k_part = disc.stiffness.apply(&state.u);
    let rhs: Vec<f64> = (0..dim).map(|i| m_part[i] - k_part[i]).collect();

    let lhs = SymTridiag::new(
        disc.mass
            .diag()
            .iter()
            .zip(disc.stiffness.diag())
            .map(|(m, k)| a0 * r * m + omt * k)
            .collect(),
        disc.mass
            .off()
            .iter()
            .zip(disc.stiffness.off())
            .map(|(m, k)| a0 * r * m + omt * k)
            .collect(),
    )?;
    let delta = solve_spd_tridiagonal(&lhs, &rhs)?;

    let mut w_new = vec![0.0; dim];
    let mut dw_new = vec![0.0; dim];
    for i in 0..dim {
        w_new[i] = (a0 * delta[i] + h_u[i] + s2[i] - theta * state.w[i]) / omt;
        dw_new[i] = w_new[i] - state.w[i];
        state.u[i] += delta[i];
    }
    state.w = w_new;
    state.du.push(delta);
    state.dw.push(dw_new);
    state.level = n;
    Ok(state)
}

/// Runs the scheme over the whole mesh and returns the full history.
pub fn run(spec: &ProblemSpec, mesh: &GradedMesh, disc: &SpatialDisc) -> Result<Trajectory> {
    let mut state = init(spec, mesh, disc)?;
    let n_levels = mesh.n_intervals();
    let mut u_hist = Vec::with_capacity(n_levels + 1);
    let mut w_hist = Vec::with_capacity(n_levels + 1);
    u_hist.push(state.u.clone());
    w_hist.push(state.w.clone());
    for _ in 1..=n_levels {
        state = step(state, spec, mesh, disc)?;
        u_hist.push(state.u.clone());
        w_hist.push(state.w.clone());
    }
    Ok(Trajectory {
        times: mesh.points().to_vec(),
        u: u_hist,
        w: w_hist,
        notes: state.notes,
    })
}

/// Relative residuals of the two block equations at one level.
#[derive(Debug, Clone, Copy)]
pub struct StepResidual {
    pub level: usize,
    /// `||M (D^beta W) + K U - M s1||_inf`, relative to its largest term.
    pub eq1: f64,
    /// `||W^{n-theta} - (D^beta U)^{n-theta} - s2||_inf`, relative.
    pub eq2: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Recomputes both discrete equations directly (not in increment form)
/// at every level of a trajectory. The solver contract is that each
/// relative residual stays below `1e-9`.
pub fn residuals(
    traj: &Trajectory,
    spec: &ProblemSpec,
    mesh: &GradedMesh,
    disc: &SpatialDisc,
) -> Result<Vec<StepResidual>> {
    spec.validate()?;
    let n_levels = mesh.n_intervals();
    if traj.u.len() != n_levels + 1 {
        return Err(SforError::InvalidArgument(format!(
            "trajectory has {} levels but the mesh has {}",
            traj.u.len(),
            n_levels + 1
        )));
    }
    let beta = spec.beta();
    let theta = spec.theta();
    let proj_a1 = l2_project(disc, &spec.a1)?;
    let proj_f = l2_project(disc, &spec.f)?;
    let g2a = gamma_fn(2.0 - spec.alpha)?;
    let proj_q: Vec<f64> = proj_a1
        .iter()
        .zip(&proj_f)
        .map(|(a, f)| a + g2a * f)
        .collect();
    let dim = proj_a1.len();

    let mut out = Vec::with_capacity(n_levels);
    for n in 1..=n_levels {
        let row = kernel_row(mesh, beta, n, spec.formula)?;
        let t_off = offset_time(mesh, n, theta)?;
        let (s1, s2) = sources(spec, (&proj_a1, &proj_f, &proj_q), t_off);

        let mut dbar_u = vec![0.0; dim];
        let mut dbar_w = vec![0.0; dim];
        for k in 1..=n {
            let c = row.coeffs[n - k];
            for i in 0..dim {
                dbar_u[i] += c * (traj.u[k][i] - traj.u[k - 1][i]);
                dbar_w[i] += c * (traj.w[k][i] - traj.w[k - 1][i]);
            }
        }
        let u_off: Vec<f64> = (0..dim)
            .map(|i| theta * traj.u[n - 1][i] + (1.0 - theta) * traj.u[n][i])
            .collect();
        let w_off: Vec<f64> = (0..dim)
            .map(|i| theta * traj.w[n - 1][i] + (1.0 - theta) * traj.w[n][i])
            .collect();

        let m_dw = disc.mass.apply(&dbar_w);
        let k_u = disc.stiffness.apply(&u_off);
        let m_s1 = disc.mass.apply(&s1);
        let r1: Vec<f64> = (0..dim).map(|i| m_dw[i] + k_u[i] - m_s1[i]).collect();
        let scale1 = inf_norm(&m_dw)
            .max(inf_norm(&k_u))
            .max(inf_norm(&m_s1))
            .max(1e-300);

        let r2: Vec<f64> = (0..dim).map(|i| w_off[i] - dbar_u[i] - s2[i]).collect();
        let scale2 = inf_norm(&w_off)
            .max(inf_norm(&dbar_u))
            .max(inf_norm(&s2))
            .max(1e-300);

        out.push(StepResidual {
            level: n,
            eq1: inf_norm(&r1) / scale1,
            eq2: inf_norm(&r2) / scale2,
        });
    }
    Ok(out)
}

//! Experiment driver: refinement sweeps, error measurement against a
//! fine reference run, and table assembly.
//!
//! The error of a run with `N` steps is measured exactly the way
//! convergence studies report it: a reference trajectory is computed once
//! on the *same* grading with `N_ref` steps, and
//!
//! ```text
//!   e(N) = max_{1 <= n <= N} || U^n - U_ref(t_n) ||
//! ```
//!
//! in the configured spatial norm. Graded points satisfy
//! `t_k(N) = t_{k s}(N_ref)` exactly when `s = N_ref / N` is an integer
//! (both are `T (k/N)^r` with the same real quotient), so reference
//! values are read off at matching indices — never interpolated — and any
//! misalignment is a hard error.

pub mod check;
pub mod config;
pub mod table;

pub use check::{check_kernels, FormulaCheck, KernelCheckReport};
pub use config::{parse_config, render_config};
pub use table::{
    emit, emit_group, format_sci, parse_csv, ConvergenceTable, Format, TableGroup, TableMeta,
    TableRow,
};

use crate::error::{Result, SforError};
use crate::fracops::Formula;
use crate::mesh::{build_graded_mesh, GradedMesh};
use crate::sfor::{self, ProblemSpec, Scheme, Trajectory};
use crate::space1d::{build_fem, h1_norm, h1_seminorm, l2_norm, DataDescriptor, SpatialDisc};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Benchmark problems on `(0, pi)` up to `T = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// Hat initial value, hat initial velocity, sine forcing.
    Ex1,
    /// Hat initial value, indicator initial velocity, sine forcing.
    Ex2,
}

impl Example {
    pub fn label(self) -> &'static str {
        match self {
            Example::Ex1 => "EX1",
            Example::Ex2 => "EX2",
        }
    }

    /// `(a0, a1, f)` descriptors.
    pub fn data(self) -> (DataDescriptor, DataDescriptor, DataDescriptor) {
        match self {
            Example::Ex1 => (
                DataDescriptor::Hat,
                DataDescriptor::Hat,
                DataDescriptor::Sine,
            ),
            Example::Ex2 => (
                DataDescriptor::Hat,
                DataDescriptor::IndicatorLeftHalf,
                DataDescriptor::Sine,
            ),
        }
    }

    pub fn length(self) -> f64 {
        std::f64::consts::PI
    }

    pub fn t_final(self) -> f64 {
        1.0
    }
}

/// How the mesh grading exponent is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RMode {
    /// `r = 1`.
    Uniform,
    /// The exponent that makes the scheme attain its optimal rate.
    Optimal,
    /// A user-supplied exponent `r >= 1`.
    Explicit(f64),
}

/// Spatial norm used for the error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    H1Full,
    H1Semi,
    L2,
}

/// One convergence experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub example: Example,
    pub alpha: f64,
    pub scheme: Scheme,
    pub formula: Formula,
    pub r_mode: RMode,
    pub n_list: Vec<usize>,
    pub n_ref: usize,
    pub m_elems: usize,
    pub error_norm: ErrorNorm,
}

impl ExperimentConfig {
    /// Standard sweep for the chosen formula: the L1 ladder
    /// `20..320` against `N_ref = 2560`, or the Alikhanov ladder `8..64`
    /// against `128`; `M_elems = 100`, optimal grading, full H1 norm.
    pub fn with_defaults(example: Example, alpha: f64, scheme: Scheme, formula: Formula) -> Self {
        let (n_list, n_ref) = match formula {
            Formula::L1 => (vec![20, 40, 80, 160, 320], 2560),
            Formula::Alikhanov => (vec![8, 16, 32, 64], 128),
        };
        ExperimentConfig {
            example,
            alpha,
            scheme,
            formula,
            r_mode: RMode::Optimal,
            n_list,
            n_ref,
            m_elems: 100,
            error_norm: ErrorNorm::H1Full,
        }
    }

    pub fn scheme_label(&self) -> &'static str {
        match self.scheme {
            Scheme::VForm => "V_FORM",
            Scheme::ZForm => "Z_FORM",
        }
    }

    pub fn norm_label(&self) -> &'static str {
        match self.error_norm {
            ErrorNorm::H1Full => "H1_FULL",
            ErrorNorm::H1Semi => "H1_SEMI",
            ErrorNorm::L2 => "L2",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(SforError::InvalidArgument(format!(
                "fractional order must lie in (1, 2), got {}",
                self.alpha
            )));
        }
        if self.n_list.is_empty() {
            return Err(SforError::InvalidArgument(
                "N_list must not be empty".into(),
            ));
        }
        if self.n_list.iter().any(|&n| n < 2) {
            return Err(SforError::InvalidArgument(
                "every N in N_list must be at least 2".into(),
            ));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SforError::InvalidArgument(
                "N_list must be strictly increasing".into(),
            ));
        }
        let max_n = *self.n_list.last().expect("nonempty");
        if self.n_ref <= max_n {
            return Err(SforError::InvalidArgument(format!(
                "N_ref = {} must exceed max(N_list) = {max_n}",
                self.n_ref
            )));
        }
        if self.m_elems < 2 {
            return Err(SforError::InvalidArgument(format!(
                "M_elems must be at least 2, got {}",
                self.m_elems
            )));
        }
        if let RMode::Explicit(r) = self.r_mode {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(SforError::InvalidArgument(format!(
                    "explicit grading must satisfy r >= 1, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Resolves the grading exponent. `OPTIMAL` picks, per formula and
/// scheme,
///
/// ```text
///   L1 / V:        (4 - alpha) / (2 - alpha)
///   L1 / Z:        max{ (4 - alpha) / alpha, 2 }
///   Alikhanov / V: 4 / (2 - alpha)
///   Alikhanov / Z: max{ 4 / alpha, 8 / (4 - alpha) }
/// ```
pub fn resolve_r(config: &ExperimentConfig) -> Result<f64> {
    config.validate()?;
    let a = config.alpha;
    Ok(match config.r_mode {
        RMode::Uniform => 1.0,
        RMode::Explicit(r) => r,
        RMode::Optimal => match (config.formula, config.scheme) {
            (Formula::L1, Scheme::VForm) => (4.0 - a) / (2.0 - a),
            (Formula::L1, Scheme::ZForm) => ((4.0 - a) / a).max(2.0),
            (Formula::Alikhanov, Scheme::VForm) => 4.0 / (2.0 - a),
            (Formula::Alikhanov, Scheme::ZForm) => (4.0 / a).max(8.0 / (4.0 - a)),
        },
    })
}

/// Rate predicted by the error analysis for the resolved grading:
/// `min{r(1-beta), cap}` for the V-form and
/// `min{r beta, r(1-beta/2), cap}` for the Z-form, with `cap = 2 - beta`
/// (L1) or `2` (Alikhanov).
pub fn theoretical_order(config: &ExperimentConfig) -> Result<f64> {
    let r = resolve_r(config)?;
    let beta = 0.5 * config.alpha;
    let cap = match config.formula {
        Formula::L1 => 2.0 - beta,
        Formula::Alikhanov => 2.0,
    };
    Ok(match config.scheme {
        Scheme::VForm => (r * (1.0 - beta)).min(cap),
        Scheme::ZForm => (r * beta).min(r * (1.0 - 0.5 * beta)).min(cap),
    })
}

fn level_norm(disc: &SpatialDisc, v: &[f64], norm: ErrorNorm) -> f64 {
    match norm {
        ErrorNorm::L2 => l2_norm(disc, v),
        ErrorNorm::H1Semi => h1_seminorm(disc, v),
        ErrorNorm::H1Full => h1_norm(disc, v),
    }
}

/// `max_{1 <= n <= N}` of the chosen norm of `U^n - U_ref` at the same
/// time. Requires `N | N_ref` and verifies every matched pair of time
/// points; misalignment is a [`SforError::TimeAlignment`], never silent
/// interpolation.
pub fn compute_error(
    traj: &Trajectory,
    ref_traj: &Trajectory,
    mesh: &GradedMesh,
    ref_mesh: &GradedMesh,
    disc: &SpatialDisc,
    norm: ErrorNorm,
) -> Result<f64> {
    let n = mesh.n_intervals();
    let n_ref = ref_mesh.n_intervals();
    if traj.u.len() != n + 1 || ref_traj.u.len() != n_ref + 1 {
        return Err(SforError::InvalidArgument(
            "trajectory lengths do not match their meshes".into(),
        ));
    }
    if n_ref % n != 0 {
        return Err(SforError::TimeAlignment(format!(
            "coarse N = {n} does not divide N_ref = {n_ref}"
        )));
    }
    let stride = n_ref / n;
    let dim = traj.u[0].len();
    if ref_traj.u[0].len() != dim {
        return Err(SforError::InvalidArgument(
            "runs use different spatial discretizations".into(),
        ));
    }
    let mut err = 0.0f64;
    let mut diff = vec![0.0; dim];
    for k in 1..=n {
        let t_c = mesh.point(k);
        let t_r = ref_mesh.point(k * stride);
        if (t_c - t_r).abs() > 4.0 * f64::EPSILON * t_c.abs().max(1.0) {
            return Err(SforError::TimeAlignment(format!(
                "time level {k}: {t_c} vs reference {t_r}"
            )));
        }
        let (a, b) = (&traj.u[k], &ref_traj.u[k * stride]);
        for i in 0..dim {
            diff[i] = a[i] - b[i];
        }
        err = err.max(level_norm(disc, &diff, norm));
    }
    Ok(err)
}

/// Observed orders from an error ladder:
/// `order_i = log(e_{i-1}/e_i) / log(N_i/N_{i-1})`.
pub fn observed_orders(ns: &[usize], errors: &[f64]) -> Vec<Option<f64>> {
    assert_eq!(ns.len(), errors.len());
    (0..ns.len())
        .map(|i| {
            if i == 0 {
                None
            } else {
                Some((errors[i - 1] / errors[i]).ln() / (ns[i] as f64 / ns[i - 1] as f64).ln())
            }
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    if (x - x.round()).abs() < 1e-12 {
        format!("{}", x.round() as i64)
    } else {
        let s = format!("{x:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Column label describing the grading choice.
pub fn r_label(r_mode: RMode, r: f64) -> String {
    match r_mode {
        RMode::Uniform => "r = 1".to_string(),
        RMode::Optimal => format!("r = {} (optimal)", fmt_float(r)),
        RMode::Explicit(_) => format!("r = {}", fmt_float(r)),
    }
}

fn problem_spec(config: &ExperimentConfig) -> ProblemSpec {
    let (a0, a1, f) = config.example.data();
    ProblemSpec {
        alpha: config.alpha,
        length: config.example.length(),
        t_final: config.example.t_final(),
        a0,
        a1,
        f,
        scheme: config.scheme,
        formula: config.formula,
    }
}

fn default_title(config: &ExperimentConfig) -> String {
    format!(
        "example {}, {}, {}-form, alpha = {}, {} error",
        match config.example {
            Example::Ex1 => "1",
            Example::Ex2 => "2",
        },
        config.formula.label(),
        match config.scheme {
            Scheme::VForm => "V",
            Scheme::ZForm => "Z",
        },
        fmt_float(config.alpha),
        config.norm_label()
    )
}

/// Runs one refinement sweep: the reference once, then every `N` in the
/// ladder (in parallel when the `parallel` feature is on), errors and
/// observed orders assembled in ascending `N`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<ConvergenceTable> {
    config.validate()?;
    let r = resolve_r(config)?;
    let spec = problem_spec(config);
    let disc = build_fem(spec.length, config.m_elems)?;
    let ref_mesh = build_graded_mesh(spec.t_final, config.n_ref, r)?;
    let ref_traj = sfor::run(&spec, &ref_mesh, &disc)?;

    let one_run = |&n: &usize| -> Result<f64> {
        let inner = || -> Result<f64> {
            let mesh = build_graded_mesh(spec.t_final, n, r)?;
            let traj = sfor::run(&spec, &mesh, &disc)?;
            compute_error(&traj, &ref_traj, &mesh, &ref_mesh, &disc, config.error_norm)
        };
        inner().map_err(|e| SforError::Numerical(format!("sweep aborted at N = {n}: {e}")))
    };

    #[cfg(feature = "parallel")]
    let errors: Vec<f64> = config
        .n_list
        .par_iter()
        .map(one_run)
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let errors: Vec<f64> = config.n_list.iter().map(one_run).collect::<Result<_>>()?;

    let orders = observed_orders(&config.n_list, &errors);
    let rows = config
        .n_list
        .iter()
        .zip(&errors)
        .zip(orders)
        .map(|((&n, &error), order)| TableRow { n, error, order })
        .collect();
    Ok(ConvergenceTable {
        meta: TableMeta {
            title: default_title(config),
            example: config.example.label().to_string(),
            alpha: config.alpha,
            scheme: config.scheme_label().to_string(),
            formula: config.formula.label().to_string(),
            r,
            norm: config.norm_label().to_string(),
            n_ref: config.n_ref,
            m_elems: config.m_elems,
            theoretical_order: theoretical_order(config)?,
        },
        rows,
    })
}

/// A named multi-column study: the configs differ in grading or in
/// fractional order.
#[derive(Debug, Clone)]
pub struct TablePreset {
    pub title: String,
    pub labels: Vec<String>,
    pub configs: Vec<ExperimentConfig>,
}

/// Built-in studies 1-7 covering both examples, both schemes, both
/// formulas, uniform/optimal/intermediate gradings and three fractional
/// orders.
pub fn table_preset(index: usize) -> Result<TablePreset> {
    let grading_study =
        |example: Example, alpha: f64, norm: ErrorNorm, third_r: f64| -> Result<TablePreset> {
            let base = ExperimentConfig {
                error_norm: norm,
                ..ExperimentConfig::with_defaults(example, alpha, Scheme::VForm, Formula::L1)
            };
            let modes = [RMode::Uniform, RMode::Optimal, RMode::Explicit(third_r)];
            let configs: Vec<ExperimentConfig> = modes
                .iter()
                .map(|&m| ExperimentConfig {
                    r_mode: m,
                    ..base.clone()
                })
                .collect();
            let labels = configs
                .iter()
                .map(|c| Ok(r_label(c.r_mode, resolve_r(c)?)))
                .collect::<Result<_>>()?;
            Ok(TablePreset {
                title: default_title(&base),
                labels,
                configs,
            })
        };
    let alpha_study = |example: Example, formula: Formula, norm: ErrorNorm| -> TablePreset {
        let alphas = [1.25, 1.5, 1.75];
        let configs: Vec<ExperimentConfig> = alphas
            .iter()
            .map(|&a| ExperimentConfig {
                error_norm: norm,
                ..ExperimentConfig::with_defaults(example, a, Scheme::ZForm, formula)
            })
            .collect();
        let labels = alphas
            .iter()
            .map(|a| format!("alpha = {}", fmt_float(*a)))
            .collect();
        let title = format!(
            "example {}, {}, Z-form, optimal grading, {} error",
            match example {
                Example::Ex1 => "1",
                Example::Ex2 => "2",
            },
            formula.label(),
            configs[0].norm_label()
        );
        TablePreset {
            title,
            labels,
            configs,
        }
    };

    // The intermediate gradings: (4 - alpha)/alpha = 2.2 at alpha = 1.25,
    // and r = 2 at alpha = 1.75.
    match index {
        1 => grading_study(Example::Ex1, 1.25, ErrorNorm::H1Semi, 2.2),
        2 => grading_study(Example::Ex1, 1.75, ErrorNorm::H1Semi, 2.0),
        3 => Ok(alpha_study(Example::Ex1, Formula::L1, ErrorNorm::H1Semi)),
        4 => Ok(alpha_study(
            Example::Ex1,
            Formula::Alikhanov,
            ErrorNorm::H1Semi,
        )),
        5 => grading_study(Example::Ex2, 1.25, ErrorNorm::L2, 2.2),
        6 => grading_study(Example::Ex2, 1.75, ErrorNorm::L2, 2.0),
        7 => Ok(alpha_study(Example::Ex2, Formula::L1, ErrorNorm::L2)),
        _ => Err(SforError::InvalidArgument(format!(
            "table index must be 1..=7, got {index}"
        ))),
    }
}

/// Runs every column of a preset and assembles the group.
pub fn run_table(index: usize) -> Result<TableGroup> {
    let preset = table_preset(index)?;

    #[cfg(feature = "parallel")]
    let tables: Vec<ConvergenceTable> = preset
        .configs
        .par_iter()
        .map(run_sweep)
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let tables: Vec<ConvergenceTable> = preset
        .configs
        .iter()
        .map(run_sweep)
        .collect::<Result<_>>()?;

    TableGroup::new(preset.title, preset.labels, tables)
}

//! Browser bindings: three interactive operations behind `wasm-bindgen`,
//! each returning a JSON string the static demo page renders directly.
//!
//! The payloads are deliberately small — the browser build runs
//! single-threaded, so problem sizes are capped well below what the
//! native solver handles.

use std::f64::consts::PI;

use serde_json::json;
use wasm_bindgen::prelude::*;

use sfor_wave::fracops::{
    alikhanov_certified, check_a1, complementary_identity_residual, complementary_kernels,
    kernel_row, Formula, KernelRow,
};
use sfor_wave::harness::{resolve_r, run_sweep, ErrorNorm, Example, ExperimentConfig, RMode};
use sfor_wave::mesh::build_graded_mesh;
use sfor_wave::sfor::{run, ProblemSpec, Scheme};
use sfor_wave::space1d::{build_fem, DataDescriptor};
use sfor_wave::Result;

/// Largest time-step and element counts the page may request.
const MAX_N: usize = 256;
const MAX_M: usize = 200;

fn parse_scheme(label: &str) -> Result<Scheme> {
    match label {
        "V" => Ok(Scheme::VForm),
        "Z" => Ok(Scheme::ZForm),
        other => Err(sfor_wave::SforError::InvalidArgument(format!(
            "scheme must be V or Z, got '{other}'"
        ))),
    }
}

fn parse_formula(label: &str) -> Result<Formula> {
    match label {
        "L1" => Ok(Formula::L1),
        "ALIKHANOV" => Ok(Formula::Alikhanov),
        other => Err(sfor_wave::SforError::InvalidArgument(format!(
            "formula must be L1 or ALIKHANOV, got '{other}'"
        ))),
    }
}

fn cap(name: &str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(sfor_wave::SforError::InvalidArgument(format!(
            "{name} must be at most {max} in the browser demo, got {value}"
        )));
    }
    Ok(())
}

fn solve_profile_impl(
    alpha: f64,
    scheme: &str,
    formula: &str,
    n: usize,
    m: usize,
    r: f64,
) -> Result<String> {
    cap("N", n, MAX_N)?;
    cap("M", m, MAX_M)?;
    let spec = ProblemSpec {
        alpha,
        length: PI,
        t_final: 1.0,
        a0: DataDescriptor::Hat,
        a1: DataDescriptor::Hat,
        f: DataDescriptor::Sine,
        scheme: parse_scheme(scheme)?,
        formula: parse_formula(formula)?,
    };
    let mesh = build_graded_mesh(1.0, n, r)?;
    let disc = build_fem(PI, m)?;
    let traj = run(&spec, &mesh, &disc)?;

    // A handful of snapshots is enough to animate the evolution.
    let snapshot_levels: Vec<usize> = [0, n / 4, n / 2, 3 * n / 4, n]
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut xs = vec![0.0];
    xs.extend_from_slice(&disc.nodes);
    xs.push(PI);
    let levels: Vec<_> = snapshot_levels
        .iter()
        .map(|&level| {
            let mut u = vec![0.0];
            u.extend_from_slice(&traj.u[level]);
            u.push(0.0);
            json!({ "t": traj.times[level], "u": u })
        })
        .collect();
    Ok(json!({ "xs": xs, "levels": levels }).to_string())
}

/// Solves the benchmark problem (hat initial value and velocity, sine
/// forcing) and returns snapshot profiles as JSON:
/// `{"xs": [...], "levels": [{"t": ..., "u": [...]}, ...]}`.
#[wasm_bindgen]
pub fn solve_profile(
    alpha: f64,
    scheme: &str,
    formula: &str,
    n: usize,
    m: usize,
    r: f64,
) -> std::result::Result<String, String> {
    solve_profile_impl(alpha, scheme, formula, n, m, r).map_err(|e| e.to_string())
}

fn convergence_demo_impl(alpha: f64, scheme: &str, formula: &str) -> Result<String> {
    let formula = parse_formula(formula)?;
    let mut config =
        ExperimentConfig::with_defaults(Example::Ex1, alpha, parse_scheme(scheme)?, formula);
    // A ladder small enough to finish within a browser frame budget.
    config.n_list = vec![4, 8, 16, 32];
    config.n_ref = 128;
    config.m_elems = 24;
    config.error_norm = ErrorNorm::H1Semi;
    config.r_mode = RMode::Optimal;
    let r = resolve_r(&config)?;
    let theoretical = sfor_wave::harness::theoretical_order(&config)?;
    let table = run_sweep(&config)?;
    let ns: Vec<usize> = table.rows.iter().map(|row| row.n).collect();
    let errors: Vec<f64> = table.rows.iter().map(|row| row.error).collect();
    let orders: Vec<Option<f64>> = table.rows.iter().map(|row| row.order).collect();
    Ok(json!({
        "ns": ns,
        "errors": errors,
        "orders": orders,
        "r": r,
        "theoretical_order": theoretical,
    })
    .to_string())
}

/// Runs a small refinement ladder on the benchmark problem and returns
/// errors and observed orders as JSON.
#[wasm_bindgen]
pub fn convergence_demo(
    alpha: f64,
    scheme: &str,
    formula: &str,
) -> std::result::Result<String, String> {
    convergence_demo_impl(alpha, scheme, formula).map_err(|e| e.to_string())
}

fn kernel_inspect_impl(beta: f64, n: usize, r: f64, formula: &str) -> Result<String> {
    cap("N", n, MAX_N)?;
    let formula = parse_formula(formula)?;
    let mesh = build_graded_mesh(1.0, n, r)?;
    let rows: Vec<KernelRow> = (1..=n)
        .map(|level| kernel_row(&mesh, beta, level, formula))
        .collect::<Result<_>>()?;
    let last = rows.last().expect("n >= 1 rows");
    let a1 = check_a1(last);
    let p = complementary_kernels(&rows)?;
    let residual = complementary_identity_residual(&rows, &p);
    Ok(json!({
        "coeffs": last.coeffs,
        "complementary": p,
        "positive": a1.positive,
        "monotone": a1.monotone,
        "identity_residual": residual,
        "certified": formula == Formula::L1 || alikhanov_certified(&mesh),
    })
    .to_string())
}

/// Builds the final-level kernel row and complementary kernels on the
/// graded mesh `(T = 1, N, r)` and reports the positivity/monotonicity
/// flags as JSON.
#[wasm_bindgen]
pub fn kernel_inspect(
    beta: f64,
    n: usize,
    r: f64,
    formula: &str,
) -> std::result::Result<String, String> {
    kernel_inspect_impl(beta, n, r, formula).map_err(|e| e.to_string())
}

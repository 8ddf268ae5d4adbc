//! Flat `key = value` experiment configuration files.
//!
//! One assignment per line, `#` starts a comment, keys are exactly the
//! [`ExperimentConfig`] field names, and enum values are upper snake
//! case:
//!
//! ```text
//! example = EX1
//! alpha = 1.25
//! scheme = V_FORM
//! formula = L1
//! r_mode = OPTIMAL          # or UNIFORM, or EXPLICIT(2.2)
//! N_list = 20,40,80,160,320
//! N_ref = 2560
//! M_elems = 100
//! error_norm = H1_SEMI
//! ```
//!
//! `example`, `alpha`, `scheme` and `formula` are required; the rest
//! default to the standard sweep for the chosen formula (`r_mode =
//! OPTIMAL`, `M_elems = 100`, `error_norm = H1_FULL`, N-ladder
//! `20..320` against 2560 for L1 or `8..64` against 128 for Alikhanov).

use std::collections::BTreeMap;

use super::{ErrorNorm, Example, ExperimentConfig, RMode};
use crate::error::{Result, SforError};
use crate::fracops::Formula;
use crate::sfor::Scheme;

fn config_err(msg: String) -> SforError {
    SforError::Config(msg)
}

fn parse_example(v: &str) -> Result<Example> {
    match v {
        "EX1" => Ok(Example::Ex1),
        "EX2" => Ok(Example::Ex2),
        _ => Err(config_err(format!("example must be EX1 or EX2, got '{v}'"))),
    }
}

fn parse_scheme(v: &str) -> Result<Scheme> {
    match v {
        "V_FORM" => Ok(Scheme::VForm),
        "Z_FORM" => Ok(Scheme::ZForm),
        _ => Err(config_err(format!(
            "scheme must be V_FORM or Z_FORM, got '{v}'"
        ))),
    }
}

fn parse_formula(v: &str) -> Result<Formula> {
    match v {
        "L1" => Ok(Formula::L1),
        "ALIKHANOV" => Ok(Formula::Alikhanov),
        _ => Err(config_err(format!(
            "formula must be L1 or ALIKHANOV, got '{v}'"
        ))),
    }
}

fn parse_r_mode(v: &str) -> Result<RMode> {
    match v {
        "UNIFORM" => Ok(RMode::Uniform),
        "OPTIMAL" => Ok(RMode::Optimal),
        _ => {
            if let Some(inner) = v
                .strip_prefix("EXPLICIT(")
                .and_then(|s| s.strip_suffix(')'))
            {
                let r: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| config_err(format!("cannot parse grading in '{v}'")))?;
                Ok(RMode::Explicit(r))
            } else {
                Err(config_err(format!(
                    "r_mode must be UNIFORM, OPTIMAL or EXPLICIT(r), got '{v}'"
                )))
            }
        }
    }
}

fn parse_error_norm(v: &str) -> Result<ErrorNorm> {
    match v {
        "H1_FULL" => Ok(ErrorNorm::H1Full),
        "H1_SEMI" => Ok(ErrorNorm::H1Semi),
        "L2" => Ok(ErrorNorm::L2),
        _ => Err(config_err(format!(
            "error_norm must be H1_FULL, H1_SEMI or L2, got '{v}'"
        ))),
    }
}

fn parse_n_list(v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| config_err(format!("cannot parse N_list entry '{s}'")))
        })
        .collect()
}

/// Parses a configuration file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(format!(
                "line {}: expected 'key = value', got '{raw}'",
                idx + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        if map.insert(key, value).is_some() {
            return Err(config_err(format!(
                "line {}: duplicate key '{key}'",
                idx + 1
            )));
        }
    }

    const KNOWN: [&str; 9] = [
        "example",
        "alpha",
        "scheme",
        "formula",
        "r_mode",
        "N_list",
        "N_ref",
        "M_elems",
        "error_norm",
    ];
    for key in map.keys() {
        if !KNOWN.contains(key) {
            return Err(config_err(format!("unknown key '{key}'")));
        }
    }
    let required = |key: &str| -> Result<&str> {
        map.get(key)
            .copied()
            .ok_or_else(|| config_err(format!("missing required key '{key}'")))
    };

    let example = parse_example(required("example")?)?;
    let alpha: f64 = required("alpha")?
        .parse()
        .map_err(|_| config_err(format!("cannot parse alpha '{}'", map["alpha"])))?;
    let scheme = parse_scheme(required("scheme")?)?;
    let formula = parse_formula(required("formula")?)?;

    let mut config = ExperimentConfig::with_defaults(example, alpha, scheme, formula);
    if let Some(v) = map.get("r_mode") {
        config.r_mode = parse_r_mode(v)?;
    }
    if let Some(v) = map.get("N_list") {
        config.n_list = parse_n_list(v)?;
    }
    if let Some(v) = map.get("N_ref") {
        config.n_ref = v
            .parse()
            .map_err(|_| config_err(format!("cannot parse N_ref '{v}'")))?;
    }
    if let Some(v) = map.get("M_elems") {
        config.m_elems = v
            .parse()
            .map_err(|_| config_err(format!("cannot parse M_elems '{v}'")))?;
    }
    if let Some(v) = map.get("error_norm") {
        config.error_norm = parse_error_norm(v)?;
    }
    config.validate()?;
    Ok(config)
}

/// Writes a configuration in the format accepted by [`parse_config`].
pub fn render_config(config: &ExperimentConfig) -> String {
    let r_mode = match config.r_mode {
        RMode::Uniform => "UNIFORM".to_string(),
        RMode::Optimal => "OPTIMAL".to_string(),
        RMode::Explicit(r) => format!("EXPLICIT({r})"),
    };
    let n_list: Vec<String> = config.n_list.iter().map(usize::to_string).collect();
    format!(
        "example = {}\nalpha = {}\nscheme = {}\nformula = {}\nr_mode = {}\n\
         N_list = {}\nN_ref = {}\nM_elems = {}\nerror_norm = {}\n",
        config.example.label(),
        config.alpha,
        config.scheme_label(),
        config.formula.label(),
        r_mode,
        n_list.join(","),
        config.n_ref,
        config.m_elems,
        config.norm_label(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
# convergence experiment
example = EX2
alpha = 1.75
scheme = Z_FORM
formula = L1
r_mode = EXPLICIT(2.2)   # grading exponent
N_list = 10, 20, 40
N_ref = 80
M_elems = 50
error_norm = L2
";

    #[test]
    fn full_config_parses() {
        let c = parse_config(FULL).unwrap();
        assert_eq!(c.example, Example::Ex2);
        assert_eq!(c.alpha, 1.75);
        assert_eq!(c.scheme, Scheme::ZForm);
        assert_eq!(c.formula, Formula::L1);
        assert!(matches!(c.r_mode, RMode::Explicit(r) if r == 2.2));
        assert_eq!(c.n_list, vec![10, 20, 40]);
        assert_eq!(c.n_ref, 80);
        assert_eq!(c.m_elems, 50);
        assert_eq!(c.error_norm, ErrorNorm::L2);
    }

    #[test]
    fn minimal_config_fills_formula_defaults() {
        let c =
            parse_config("example = EX1\nalpha = 1.25\nscheme = V_FORM\nformula = L1\n").unwrap();
        assert_eq!(c.n_list, vec![20, 40, 80, 160, 320]);
        assert_eq!(c.n_ref, 2560);
        assert_eq!(c.m_elems, 100);
        assert_eq!(c.error_norm, ErrorNorm::H1Full);
        assert!(matches!(c.r_mode, RMode::Optimal));

        let a = parse_config("example = EX1\nalpha = 1.25\nscheme = Z_FORM\nformula = ALIKHANOV\n")
            .unwrap();
        assert_eq!(a.n_list, vec![8, 16, 32, 64]);
        assert_eq!(a.n_ref, 128);
    }

    #[test]
    fn render_round_trips() {
        let c = parse_config(FULL).unwrap();
        let text = render_config(&c);
        let back = parse_config(&text).unwrap();
        assert_eq!(render_config(&back), text);
        assert_eq!(back.alpha, c.alpha);
        assert_eq!(back.n_list, c.n_list);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        // Missing required key.
        assert!(parse_config("example = EX1\nalpha = 1.25\nscheme = V_FORM\n").is_err());
        // Unknown key.
        assert!(parse_config(&format!("{FULL}velocity = 3\n")).is_err());
        // Duplicate key.
        assert!(parse_config(&format!("{FULL}alpha = 1.5\n")).is_err());
        // Bad enum value.
        assert!(parse_config(&FULL.replace("Z_FORM", "W_FORM")).is_err());
        // Bad r_mode syntax.
        assert!(parse_config(&FULL.replace("EXPLICIT(2.2)", "EXPLICIT[2.2]")).is_err());
        // Missing '='.
        assert!(parse_config("example EX1\n").is_err());
        // Out-of-range alpha caught by validation.
        assert!(parse_config(&FULL.replace("alpha = 1.75", "alpha = 2.5")).is_err());
    }
}

//! Two-parameter Mittag-Leffler function `E_{alpha,nu}(z)` for real
//! `z <= 0`,
//!
//! ```text
//!   E_{alpha,nu}(z) = sum_{k>=0} z^k / Gamma(alpha k + nu).
//! ```
//!
//! Two branches cover the axis. For moderate `|z|` the Taylor series is
//! summed in double-double arithmetic with per-`(alpha, nu)` cached tables
//! of consecutive gamma ratios `Gamma(alpha k + nu)/Gamma(alpha(k-1) + nu)`;
//! the ratio form is essential because the gamma reciprocals themselves
//! underflow long before the series terms become negligible. For large
//! `|z|` the algebraic asymptotic expansion
//!
//! ```text
//!   E_{alpha,nu}(z) ~ -sum_{k=1..K} z^{-k} / Gamma(nu - alpha k)
//! ```
//!
//! is truncated at its smallest term; for `alpha in [1, 2]` the pair of
//! exponentially small saddle contributions
//! `(2/alpha) w^{1-nu} e^{w cos(pi/alpha)} cos(w sin(pi/alpha) + (1-nu) pi/alpha)`
//! with `w = |z|^{1/alpha}` is added (halved at `alpha = 1`, where the two
//! saddles coincide on the cut). Without it the expansion stalls near
//! 1e-9 for `alpha` close to 2.
//!
//! The branch switch is on the magnitude `w = |z|^{1/alpha}` rather than
//! `|z|` itself: `w` is the natural frequency of the saddle terms, and a
//! single threshold in `w` balances series cancellation against
//! asymptotic truncation uniformly in `alpha`. Each branch returns an
//! error estimate; the dispatcher falls back to the other branch when the
//! preferred one cannot certify the requested tolerance (this rescues
//! e.g. `alpha = 1`, where the series cancellation is exponential but the
//! asymptotic branch happens to be exact).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::dd::{self, Dd};
use super::gamma::rgamma;
use crate::error::{Result, SforError};

/// Knobs for Mittag-Leffler evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLEvalPolicy {
    /// Taylor-series term budget (capped at the cached table size, 512).
    pub series_terms_max: usize,
    /// Number of algebraic terms `K` in the asymptotic expansion.
    pub asymptotic_terms: usize,
    /// Branch threshold on `w = |z|^{1/alpha}`.
    pub crossover_magnitude: f64,
    /// Relative tolerance the evaluation must certify.
    pub target_rel_tol: f64,
}

impl Default for MLEvalPolicy {
    fn default() -> Self {
        MLEvalPolicy {
            series_terms_max: 400,
            asymptotic_terms: 40,
            crossover_magnitude: 34.0,
            target_rel_tol: 1e-12,
        }
    }
}

impl MLEvalPolicy {
    /// Checks the documented parameter ranges.
    pub fn validate(&self) -> Result<()> {
        if !(8..=TABLE_TERMS).contains(&self.series_terms_max) {
            return Err(SforError::InvalidArgument(format!(
                "series_terms_max must lie in 8..={TABLE_TERMS}, got {}",
                self.series_terms_max
            )));
        }
        if !(2..=80).contains(&self.asymptotic_terms) {
            // Beyond ~80 terms the reflection gamma overflows f64 anyway.
            return Err(SforError::InvalidArgument(format!(
                "asymptotic_terms must lie in 2..=80, got {}",
                self.asymptotic_terms
            )));
        }
        if self.crossover_magnitude <= 1.0 || !self.crossover_magnitude.is_finite() {
            return Err(SforError::InvalidArgument(format!(
                "crossover_magnitude must exceed 1, got {}",
                self.crossover_magnitude
            )));
        }
        if !(self.target_rel_tol > 0.0 && self.target_rel_tol <= 1e-6) {
            return Err(SforError::InvalidArgument(format!(
                "target_rel_tol must lie in (0, 1e-6], got {}",
                self.target_rel_tol
            )));
        }
        Ok(())
    }
}

const TABLE_TERMS: usize = 512;

/// Cached per-(alpha, nu) data for the Taylor branch.
struct SeriesTable {
    /// First index with `alpha k + nu > 0`; earlier terms use plain f64.
    k_start: usize,
    /// `1/Gamma(alpha k + nu)` for `k < k_start` (zero at gamma poles).
    lead: Vec<f64>,
    /// `1/Gamma(alpha k_start + nu)` in double-double.
    first: Dd,
    /// `ratios[i] = Gamma(arg_{k+1}) / Gamma(arg_k)` for `k = k_start + i`.
    ratios: Vec<Dd>,
}

fn build_table(alpha: f64, nu: f64) -> SeriesTable {
    let mut k_start = 0usize;
    while dd::fma_sum(alpha, k_start as f64, nu).hi <= 0.0 {
        k_start += 1;
    }
    let lead = (0..k_start)
        .map(|k| rgamma(alpha * k as f64 + nu))
        .collect();
    let first = dd::rgamma(dd::fma_sum(alpha, k_start as f64, nu));
    let ratios = (k_start..k_start + TABLE_TERMS)
        .map(|k| dd::exp(dd::lgamma_diff(dd::fma_sum(alpha, k as f64, nu), alpha)))
        .collect();
    SeriesTable {
        k_start,
        lead,
        first,
        ratios,
    }
}

type TableCache = Mutex<HashMap<(u64, u64), Arc<SeriesTable>>>;

fn series_table(alpha: f64, nu: f64) -> Arc<SeriesTable> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), nu.to_bits());
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let t = Arc::new(build_table(alpha, nu));
    cache.lock().unwrap().entry(key).or_insert(t).clone()
}

fn validate_args(alpha: f64, nu: f64, z: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(SforError::InvalidArgument(format!(
            "Mittag-Leffler order must lie in (0, 2], got {alpha}"
        )));
    }
    if !nu.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "Mittag-Leffler parameter nu must be finite, got {nu}"
        )));
    }
    if z > 0.0 || !z.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "Mittag-Leffler argument must satisfy z <= 0, got {z}"
        )));
    }
    Ok(())
}

/// Taylor branch. Returns `(value, relative error estimate)`; the
/// estimate combines the double-double noise floor amplified by the
/// series cancellation with the size of the last retained term.
pub fn ml_series(alpha: f64, nu: f64, z: f64, max_terms: usize) -> Result<(f64, f64)> {
    validate_args(alpha, nu, z)?;
    let max_terms = max_terms.clamp(4, TABLE_TERMS);
    let table = series_table(alpha, nu);

    let mut sum = Dd::ZERO;
    for (k, &rg) in table.lead.iter().enumerate() {
        sum = sum.add(Dd::from_f64(rg * z.powi(k as i32)));
    }
    let mut zp = Dd::ONE;
    for _ in 0..table.k_start {
        zp = zp.mul_f64(z);
    }
    let mut term = table.first.mul(zp);
    sum = sum.add(term);
    let mut peak = term.hi.abs();
    let mut prev = peak;
    let mut tail = prev;
    let mut converged = false;
    for k in (table.k_start + 1)..max_terms {
        term = term.mul_f64(z).div(table.ratios[k - table.k_start - 1]);
        sum = sum.add(term);
        let mag = term.hi.abs();
        peak = peak.max(mag);
        // Term-ratio stopping: past the peak and negligible against it.
        if mag < prev && mag < 1e-33 * peak {
            tail = mag;
            converged = true;
            break;
        }
        prev = mag;
        tail = mag;
    }
    let value = sum.to_f64();
    let scale = value.abs().max(f64::MIN_POSITIVE);
    let noise = 1e-30 * peak;
    let est = if converged {
        noise / scale
    } else {
        (noise + tail) / scale
    };
    Ok((value, est))
}

/// Asymptotic branch for `z < 0`. Returns `(value, relative error
/// estimate)`; the estimate is the optimally truncated remainder plus
/// rounding noise.
pub fn ml_asymptotic(alpha: f64, nu: f64, z: f64, k_terms: usize) -> Result<(f64, f64)> {
    validate_args(alpha, nu, z)?;
    if z == 0.0 {
        return Err(SforError::InvalidArgument(
            "asymptotic expansion requires z < 0".into(),
        ));
    }
    let zinv = 1.0 / z;
    let mut sum = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut pw = 1.0f64;
    let mut last_mag = f64::INFINITY;
    let mut trunc = 0.0f64;
    for k in 1..=k_terms {
        pw *= zinv;
        let u = pw * rgamma(nu - alpha * k as f64);
        if u == 0.0 {
            // Gamma pole: the term is exactly absent, carry on.
            continue;
        }
        if u.abs() >= last_mag {
            // Divergent tail reached; stop at the smallest term and
            // charge the first omitted one to the error.
            trunc = u.abs();
            break;
        }
        sum -= u;
        abs_sum += u.abs();
        last_mag = u.abs();
        trunc = u.abs();
    }
    // Saddle-point pair, exponentially small on the negative axis for
    // alpha in [1, 2]; absent for alpha < 1.
    let mut pair = 0.0f64;
    if alpha >= 1.0 {
        let w = (-z).powf(1.0 / alpha);
        let phi = std::f64::consts::PI / alpha;
        let growth = w * phi.cos();
        if growth > -745.0 {
            let amp = (2.0 / alpha) * w.powf(1.0 - nu) * growth.exp();
            let phase = w * phi.sin() + (1.0 - nu) * phi;
            pair = amp * phase.cos();
            if alpha == 1.0 {
                pair *= 0.5;
            }
        }
    }
    let value = sum + pair;
    let scale = value.abs().max(f64::MIN_POSITIVE);
    let est = (trunc + 2e-16 * abs_sum + 1e-15 * pair.abs()) / scale;
    Ok((value, est))
}

/// Evaluates `E_{alpha,nu}(z)` for `z <= 0` under the given policy.
///
/// The branch suggested by `crossover_magnitude` is tried first; if its
/// error estimate misses `target_rel_tol` the other branch is consulted,
/// and only when both fail is an accuracy error (carrying the better
/// estimate) returned.
pub fn mittag_leffler(alpha: f64, nu: f64, z: f64, policy: &MLEvalPolicy) -> Result<f64> {
    validate_args(alpha, nu, z)?;
    policy.validate()?;
    if z == 0.0 {
        return Ok(rgamma(nu));
    }
    let w = (-z).powf(1.0 / alpha);
    let series_first = w < policy.crossover_magnitude;
    let primary = if series_first {
        ml_series(alpha, nu, z, policy.series_terms_max)?
    } else {
        ml_asymptotic(alpha, nu, z, policy.asymptotic_terms)?
    };
    if primary.1 <= policy.target_rel_tol {
        return Ok(primary.0);
    }
    let secondary = if series_first {
        ml_asymptotic(alpha, nu, z, policy.asymptotic_terms)?
    } else {
        ml_series(alpha, nu, z, policy.series_terms_max)?
    };
    if secondary.1 <= policy.target_rel_tol {
        return Ok(secondary.0);
    }
    Err(SforError::Accuracy {
        achieved: primary.1.min(secondary.1),
        requested: policy.target_rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(alpha: f64, nu: f64, z: f64) -> f64 {
        mittag_leffler(alpha, nu, z, &MLEvalPolicy::default()).unwrap()
    }

    fn assert_rel(got: f64, want: f64, tol: f64, ctx: &str) {
        let denom = want.abs().max(f64::MIN_POSITIVE);
        let rel = (got - want).abs() / denom;
        assert!(
            rel <= tol,
            "{ctx}: got {got:e}, want {want:e}, rel {rel:.3e}"
        );
    }

    // (alpha, nu, z, value): reference grid computed with 50-digit
    // arithmetic, covering every (alpha, nu) pair the spectral oracle
    // uses at magnitudes on both sides of the branch crossover.
    const GRID: [(f64, f64, f64, f64); 105] = [
        (1.25, 1.0, -0.5, 0.6268786972674762),
        (1.25, 1.0, -1.0, 0.3655344400252503),
        (1.25, 1.0, -5.0, -0.10080645224636171),
        (1.25, 1.0, -25.0, -0.00888909734621139),
        (1.25, 1.0, -100.0, -0.0020834272808351885),
        (1.25, 1.0, -500.0, -0.00040972500110676946),
        (1.25, 1.0, -3000.0, -6.805113092783655e-05),
        (1.25, 2.0, -0.5, 0.8238539492731942),
        (1.25, 2.0, -1.0, 0.6822851456643299),
        (1.25, 2.0, -5.0, 0.19663992993524368),
        (1.25, 2.0, -25.0, 0.03311664813629088),
        (1.25, 2.0, -100.0, 0.008189059987345254),
        (1.25, 2.0, -500.0, 0.0016332291531685158),
        (1.25, 2.0, -3000.0, 0.00027204767030618006),
        (1.25, 1.625, -0.5, 0.8684527573335493),
        (1.25, 1.625, -1.0, 0.6773237526984388),
        (1.25, 1.625, -5.0, 0.11569912778154559),
        (1.25, 1.625, -25.0, 0.017041280039537213),
        (1.25, 1.625, -100.0, 0.004229941977655229),
        (1.25, 1.625, -500.0, 0.0008441888972977039),
        (1.25, 1.625, -3000.0, 0.00014063398998300433),
        (1.25, 1.375, -0.5, 0.8263749214794749),
        (1.25, 1.375, -1.0, 0.602655625765334),
        (1.25, 1.375, -5.0, 0.03431001383056679),
        (1.25, 1.375, -25.0, 0.005050728747182377),
        (1.25, 1.375, -100.0, 0.0013135254857768355),
        (1.25, 1.375, -500.0, 0.00026494217647408003),
        (1.25, 1.375, -3000.0, 4.422984408729831e-05),
        (1.25, 2.625, -0.5, 0.5971876868488585),
        (1.25, 2.625, -1.0, 0.5223131391385701),
        (1.25, 2.625, -5.0, 0.21813175021466746),
        (1.25, 2.625, -25.0, 0.044796721446268874),
        (1.25, 2.625, -100.0, 0.011236552394181273),
        (1.25, 2.625, -500.0, 0.0022494076454548603),
        (1.25, 2.625, -3000.0, 0.00037497484501993893),
        (1.5, 1.0, -0.5, 0.6632367948724279),
        (1.5, 1.0, -1.0, 0.39662936531808807),
        (1.5, 1.0, -5.0, -0.3000820504131309),
        (1.5, 1.0, -25.0, -0.0030225852438277496),
        (1.5, 1.0, -100.0, -0.00278984677333724),
        (1.5, 1.0, -500.0, -0.0005641599826205787),
        (1.5, 1.0, -3000.0, -9.403146013099774e-05),
        (1.5, 2.0, -0.5, 0.8595440533980158),
        (1.5, 2.0, -1.0, 0.7374822479018948),
        (1.5, 2.0, -5.0, 0.20456444300647947),
        (1.5, 2.0, -25.0, 0.023727219294799533),
        (1.5, 2.0, -100.0, 0.005639995540445888),
        (1.5, 2.0, -500.0, 0.0011283707071790372),
        (1.5, 2.0, -3000.0, 0.00018806315533646367),
        (1.5, 1.75, -0.5, 0.9063462460075067),
        (1.5, 1.75, -1.0, 0.7509887188468702),
        (1.5, 1.75, -5.0, 0.12375364884869469),
        (1.5, 1.75, -25.0, 0.01392535781781096),
        (1.5, 1.75, -100.0, 0.0027312142652079017),
        (1.5, 1.75, -500.0, 0.0005506034302510877),
        (1.5, 1.75, -3000.0, 9.191018247119922e-05),
        (1.5, 1.25, -0.5, 0.8210277632348698),
        (1.5, 1.25, -1.0, 0.5903418809442166),
        (1.5, 1.25, -5.0, -0.14431026771776775),
        (1.5, 1.25, -25.0, 0.00036496084263743997),
        (1.5, 1.25, -100.0, -0.0020645104983290784),
        (1.5, 1.25, -500.0, -0.0004094573083120181),
        (1.5, 1.25, -3000.0, -6.80442320911974e-05),
        (1.5, 2.75, -0.5, 0.564469776171935),
        (1.5, 2.75, -1.0, 0.5129207703766206),
        (1.5, 2.75, -5.0, 0.249514583807721),
        (1.5, 2.75, -25.0, 0.044115907619127995),
        (1.5, 2.75, -100.0, 0.011053271618191663),
        (1.5, 2.75, -500.0, 0.0022073442172582986),
        (1.5, 2.75, -3000.0, 0.00036777689851764283),
        (1.75, 1.0, -0.5, 0.7099532177205843),
        (1.75, 1.0, -1.0, 0.45900437557152723),
        (1.75, 1.0, -5.0, -0.5254797834731216),
        (1.75, 1.0, -25.0, 0.2716853059670258),
        (1.75, 1.0, -100.0, 0.026931443816337667),
        (1.75, 1.0, -500.0, -0.0008198851746909803),
        (1.75, 1.0, -3000.0, -6.883622012658623e-05),
        (1.75, 2.0, -0.5, 0.8916238129708856),
        (1.75, 2.0, -1.0, 0.7921721503389748),
        (1.75, 2.0, -5.0, 0.2530372264979338),
        (1.75, 2.0, -25.0, -0.005854285861473059),
        (1.75, 2.0, -100.0, 0.0052796608838272235),
        (1.75, 2.0, -500.0, 0.0005600295189563178),
        (1.75, 2.0, -3000.0, 9.189160817994491e-05),
        (1.75, 1.875, -0.5, 0.923786930990483),
        (1.75, 1.875, -1.0, 0.8096162133011545),
        (1.75, 1.875, -5.0, 0.2058166609582834),
        (1.75, 1.875, -25.0, -0.0035727129138628947),
        (1.75, 1.875, -100.0, 0.005598259928655586),
        (1.75, 1.875, -500.0, 0.0002756957526845901),
        (1.75, 1.875, -3000.0, 4.419671860720944e-05),
        (1.75, 1.125, -0.5, 0.799673627261045),
        (1.75, 1.125, -1.0, 0.5704277183851466),
        (1.75, 1.125, -5.0, -0.3884997782655665),
        (1.75, 1.125, -25.0, 0.19909163364727162),
        (1.75, 1.125, -100.0, 0.02462763777587498),
        (1.75, 1.125, -500.0, -0.0007425279297966637),
        (1.75, 1.125, -3000.0, -8.779319573744896e-05),
        (1.75, 2.875, -0.5, 0.5243750746440319),
        (1.75, 2.875, -1.0, 0.4914334461979143),
        (1.75, 2.875, -5.0, 0.2900721885697255),
        (1.75, 2.875, -25.0, 0.03451078123743157),
        (1.75, 2.875, -100.0, 0.01037233526807186),
        (1.75, 2.875, -500.0, 0.0021252073850257154),
        (1.75, 2.875, -3000.0, 0.0003539829859262661),
    ];

    #[test]
    fn reference_grid_to_five_em_twelve() {
        for &(alpha, nu, z, want) in &GRID {
            let got = ml(alpha, nu, z);
            assert_rel(got, want, 5e-12, &format!("E({alpha},{nu},{z})"));
        }
    }

    #[test]
    fn extra_reference_points() {
        // Small alpha (pure algebraic asymptotics), nu = 0 and nu < 1,
        // and a large-|z| point near alpha = 2.
        assert_rel(
            ml(0.75, 1.0, -50.0),
            0.0056311878629451305,
            5e-12,
            "E(0.75,1,-50)",
        );
        assert_rel(
            ml(1.5, 0.0, -2.0),
            -0.8268193181098163,
            5e-12,
            "E(1.5,0,-2)",
        );
        assert_rel(
            ml(1.9, 1.9, -8000.0),
            -1.2413641632132975e-07,
            5e-11,
            "E(1.9,1.9,-8000)",
        );
        assert_rel(
            ml(1.1, 0.1, -400.0),
            1.3740967720437554e-06,
            5e-12,
            "E(1.1,0.1,-400)",
        );
    }

    #[test]
    fn value_at_zero_is_reciprocal_gamma() {
        assert_eq!(ml(1.5, 1.0, 0.0), 1.0);
        assert_rel(ml(1.5, 2.5, 0.0), rgamma(2.5), 1e-15, "E(1.5,2.5,0)");
        // nu = 0: the series starts at k = 1, so E(0) = 0.
        assert_eq!(ml(1.5, 0.0, 0.0), 0.0);
    }

    #[test]
    fn exponential_special_case() {
        // E_{1,1}(-x) = exp(-x); past the crossover the saddle term is
        // exact, below it the series must cope with the cancellation.
        for &x in &[0.25, 1.0, 5.0, 15.0, 40.0, 120.0] {
            assert_rel(ml(1.0, 1.0, -x), (-x).exp(), 1e-11, &format!("exp at {x}"));
        }
    }

    #[test]
    fn cosine_special_case() {
        for &x in &[0.5, 2.0, 10.0, 31.0, 200.0] {
            assert_rel(ml(2.0, 1.0, -x * x), x.cos(), 1e-11, &format!("cos at {x}"));
        }
    }

    #[test]
    fn recurrence_identity() {
        // E_{alpha,nu}(z) = 1/Gamma(nu) + z E_{alpha,nu+alpha}(z).
        for &z in &[-0.1, -2.0, -30.0, -400.0] {
            let lhs = ml(1.5, 1.0, z);
            let rhs = 1.0 + z * ml(1.5, 2.5, z);
            assert_rel(lhs, rhs, 1e-10, &format!("recurrence at {z}"));
        }
    }

    #[test]
    fn nu_zero_factorization() {
        // E_{alpha,0}(z) = z E_{alpha,alpha}(z), both series from k = 1.
        for &z in &[-0.3, -2.0, -20.0] {
            assert_rel(
                ml(1.25, 0.0, z),
                z * ml(1.25, 1.25, z),
                1e-11,
                &format!("nu=0 at {z}"),
            );
        }
    }

    #[test]
    fn branch_agreement_at_crossover() {
        let policy = MLEvalPolicy::default();
        for &alpha in &[1.25, 1.5, 1.75] {
            let beta = alpha / 2.0;
            for nu in [1.0, 2.0, 1.0 + beta, 2.0 - beta, 2.0 + beta] {
                let z = -policy.crossover_magnitude.powf(alpha);
                let (s, _) = ml_series(alpha, nu, z, policy.series_terms_max).unwrap();
                let (a, _) = ml_asymptotic(alpha, nu, z, policy.asymptotic_terms).unwrap();
                assert_rel(s, a, 1e-10, &format!("branches at ({alpha},{nu})"));
            }
        }
    }

    #[test]
    fn estimates_are_honest_for_deep_cancellation() {
        // At alpha = 1, z = -30 the series loses ~26 digits to
        // cancellation; the estimate must flag it so the dispatcher
        // falls back to the (exact) asymptotic branch.
        let (_, est) = ml_series(1.0, 1.0, -30.0, 400).unwrap();
        assert!(est > 1e-12, "est = {est:e}");
        let v = ml(1.0, 1.0, -30.0);
        assert_rel(v, (-30.0f64).exp(), 1e-11, "fallback result");
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = MLEvalPolicy::default();
        assert!(mittag_leffler(0.0, 1.0, -1.0, &p).is_err());
        assert!(mittag_leffler(2.5, 1.0, -1.0, &p).is_err());
        assert!(mittag_leffler(1.5, f64::NAN, -1.0, &p).is_err());
        assert!(mittag_leffler(1.5, 1.0, 0.5, &p).is_err());
        assert!(mittag_leffler(1.5, 1.0, f64::NEG_INFINITY, &p).is_err());
    }

    #[test]
    fn policy_validation() {
        let ok = MLEvalPolicy::default();
        assert!(ok.validate().is_ok());
        assert!(MLEvalPolicy {
            series_terms_max: 4,
            ..ok
        }
        .validate()
        .is_err());
        assert!(MLEvalPolicy {
            series_terms_max: 1000,
            ..ok
        }
        .validate()
        .is_err());
        assert!(MLEvalPolicy {
            asymptotic_terms: 200,
            ..ok
        }
        .validate()
        .is_err());
        assert!(MLEvalPolicy {
            crossover_magnitude: 0.5,
            ..ok
        }
        .validate()
        .is_err());
        assert!(MLEvalPolicy {
            target_rel_tol: 1e-3,
            ..ok
        }
        .validate()
        .is_err());
        assert!(MLEvalPolicy {
            target_rel_tol: 0.0,
            ..ok
        }
        .validate()
        .is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_achieved_estimate() {
        // alpha = 0.4 at moderate |z|: the series cancels and the
        // algebraic expansion decays too slowly; no branch certifies
        // 1e-12.
        let p = MLEvalPolicy {
            asymptotic_terms: 6,
            ..MLEvalPolicy::default()
        };
        match mittag_leffler(0.4, 1.0, -40.0, &p) {
            Err(SforError::Accuracy {
                achieved,
                requested,
            }) => {
                assert!(achieved > requested);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn monotone_decay_on_negative_axis() {
        // For alpha in (0, 1], E_{alpha,1}(-x) is completely monotone;
        // sample a crude version of that as a sanity check.
        let mut prev = 1.0;
        for i in 1..=40 {
            let x = 0.5 * i as f64;
            let v = ml(0.9, 1.0, -x);
            assert!(v > 0.0 && v < prev, "x = {x}");
            prev = v;
        }
    }
}

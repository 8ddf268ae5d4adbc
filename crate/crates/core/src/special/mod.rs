//! Special functions: gamma, fractional monomials, and Mittag-Leffler.
//!
//! The Mittag-Leffler function `E_{alpha,nu}(z)` on the negative real axis
//! is the workhorse of the spectral oracle; the weight
//! `omega_beta(t) = t^{beta-1} / Gamma(beta)` appears both in the
//! right-hand sides of the reduced formulations and in the kernel
//! diagnostics.

mod dd;
mod gamma;
mod ml;

pub use gamma::{gamma_fn, rgamma};
pub use ml::{mittag_leffler, ml_asymptotic, ml_series, MLEvalPolicy};

use crate::error::{Result, SforError};

/// Fractional monomial weight `omega_beta(t) = t^{beta-1} / Gamma(beta)`.
///
/// Requires `t > 0`. Total in `beta` through the reciprocal gamma: at the
/// poles `beta = 0, -1, -2, ...` the weight vanishes identically.
pub fn omega(beta: f64, t: f64) -> Result<f64> {
    if t <= 0.0 || !t.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "omega weight requires t > 0, got {t}"
        )));
    }
    if !beta.is_finite() {
        return Err(SforError::InvalidArgument(format!(
            "omega weight requires finite beta, got {beta}"
        )));
    }
    Ok(t.powf(beta - 1.0) * rgamma(beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_special_cases() {
        // omega_1 = 1, omega_2(t) = t, omega_beta(1) = 1/Gamma(beta).
        assert_eq!(omega(1.0, 0.7).unwrap(), 1.0);
        assert!((omega(2.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        let b = 0.75;
        let expected = 1.0 / gamma_fn(b).unwrap();
        assert!((omega(b, 1.0).unwrap() - expected).abs() < 1e-15);
        // Vanishes at gamma poles.
        assert_eq!(omega(0.0, 0.5).unwrap(), 0.0);
        assert_eq!(omega(-3.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn omega_rejects_nonpositive_time() {
        assert!(omega(0.5, 0.0).is_err());
        assert!(omega(0.5, -1.0).is_err());
        assert!(omega(0.5, f64::NAN).is_err());
    }

    #[test]
    fn omega_singular_growth_near_zero() {
        // For beta in (0,1) the weight blows up like t^{beta-1}.
        let b = 0.5;
        let w1 = omega(b, 1e-8).unwrap();
        let w2 = omega(b, 1e-6).unwrap();
        assert!(w1 > w2);
        assert!((w1 / w2 - 10.0).abs() < 1e-10);
    }
}

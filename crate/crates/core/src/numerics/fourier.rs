//! Closed-form half-line Fourier transforms of exponential sums.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One term `c·e^{λτ}` of a correlator written in an eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coefficient: Complex64,
    pub exponent: Complex64,
}

impl ExpTerm {
    pub fn new(coefficient: Complex64, exponent: Complex64) -> Self {
        Self { coefficient, exponent }
    }
}

/// `∫₀^∞ Σₖ cₖ e^{λₖτ} e^{iΔωτ} dτ = Σₖ −cₖ/(λₖ + iΔω)`.
///
/// Exponents with positive real part describe growing correlators and are
/// rejected, as is any term whose denominator vanishes.
pub fn half_line_fourier(terms: &[ExpTerm], delta_omega: f64) -> Result<Complex64> {
    let shift = Complex64::new(0.0, delta_omega);
    let mut total = Complex64::new(0.0, 0.0);
    for term in terms {
        if term.exponent.re > 0.0 {
            return Err(Error::Domain(format!(
                "exponent {} has positive real part (non-decaying correlator)",
                term.exponent
            )));
        }
        let denominator = term.exponent + shift;
        if denominator.norm() == 0.0 {
            return Err(Error::Domain(format!(
                "exponent {} is resonant with Δω = {delta_omega}",
                term.exponent
            )));
        }
        total -= term.coefficient / denominator;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_exponential_at_zero() {
        let v = half_line_fourier(&[ExpTerm::new(c(1.0, 0.0), c(-1.0, 0.0))], 0.0).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lorentzian_half_width() {
        let v = half_line_fourier(&[ExpTerm::new(c(1.0, 0.0), c(-1.0, 0.0))], 1.0).unwrap();
        assert!((v - c(0.5, 0.5)).norm() < 1e-15, "{v}");
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn growing_exponent_rejected() {
        assert!(half_line_fourier(&[ExpTerm::new(c(1.0, 0.0), c(0.1, 0.0))], 0.0).is_err());
        assert!(half_line_fourier(&[ExpTerm::new(c(1.0, 0.0), c(0.0, -2.0))], 2.0).is_err());
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(half_line_fourier(&[], 3.0).unwrap(), c(0.0, 0.0));
    }
}

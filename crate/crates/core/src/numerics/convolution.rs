//! Gaussian instrument-response convolution on uniform grids.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Kernel support in units of the FWHM; `R(5δτ)/R(0) = 2^{-100}`.
const KERNEL_HALF_WIDTH_FWHM: f64 = 5.0;

/// Continuous response `R(x) = (2/δτ)√(ln2/π)·exp(−4 ln2 x²/δτ²)`.
pub fn gaussian_response(x: f64, fwhm: f64) -> f64 {
    (2.0 / fwhm) * (LN_2 / PI).sqrt() * (-4.0 * LN_2 * x * x / (fwhm * fwhm)).exp()
}

/// Discrete response on a grid of the given spacing, covering ±5 FWHM and
/// normalized so its samples sum to `1/spacing`. Index `half` is `x = 0`.
pub fn discrete_response(spacing: f64, fwhm: f64) -> Vec<f64> {
    let half = (KERNEL_HALF_WIDTH_FWHM * fwhm / spacing).ceil() as usize;
    let raw: Vec<f64> = (0..=2 * half)
        .map(|k| gaussian_response((k as f64 - half as f64) * spacing, fwhm))
        .collect();
    let sum: f64 = raw.iter().sum();
    let norm = 1.0 / (spacing * sum);
    raw.into_iter().map(|r| r * norm).collect()
}

/// `(series ∗ R)(τ)` sampled on the input grid.
///
/// Samples beyond either end of the window are taken equal to the nearest
/// edge sample. A FWHM at or below 1/100 of the spacing is the delta-function
/// limit and returns the input unchanged; otherwise the spacing must be at
/// most FWHM/40.
pub fn convolve_gaussian(series: &[f64], spacing: f64, fwhm: f64) -> Result<Vec<f64>> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Domain(format!("grid spacing {spacing} must be positive")));
    }
    if !(fwhm > 0.0 && fwhm.is_finite()) {
        return Err(Error::Domain(format!("detector FWHM {fwhm} must be positive")));
    }
    if fwhm <= spacing / 100.0 || series.is_empty() {
        return Ok(series.to_vec());
    }
    if spacing > fwhm / 40.0 {
        return Err(Error::Resolution { spacing, fwhm });
    }

    let kernel = discrete_response(spacing, fwhm);
    let half = (kernel.len() / 2) as isize;
    let n = series.len() as isize;
    let at = |i: isize| series[i.clamp(0, n - 1) as usize];
    Ok((0..n)
        .map(|i| {
            let acc: f64 = kernel
                .iter()
                .enumerate()
                .map(|(k, r)| r * at(i + half - k as isize))
                .sum();
            acc * spacing
        })
        .collect())
}

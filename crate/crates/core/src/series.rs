use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Generic regression-theorem correlator.
    Correlator,
    /// `⟨σ†(t)σ(t+τ)⟩` in the polaron frame.
    G0,
    /// Phonon-dressed first-order coherence.
    G1Total,
    /// HOM `g²(τ)` with a perfect detector.
    G2Raw,
    /// HOM `g²(τ)` after detector convolution.
    G2Convolved,
}

/// Complex samples of a delay-domain correlator on an ascending grid
/// starting at `τ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub tau: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: SeriesKind,
}

impl CorrelationSeries {
    pub fn new(tau: Vec<f64>, values: Vec<Complex64>, kind: SeriesKind) -> Result<Self> {
        if tau.len() != values.len() {
            return Err(Error::Config(format!(
                "series length mismatch: {} delays, {} values",
                tau.len(),
                values.len()
            )));
        }
        crate::grid::validate_delay_grid(&tau)?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("correlation series contains non-finite values".into()));
        }
        Ok(Self { tau, values, kind })
    }

    pub(crate) fn from_real(tau: Vec<f64>, values: Vec<f64>, kind: SeriesKind) -> Result<Self> {
        Self::new(tau, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), kind)
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn tau_max(&self) -> f64 {
        self.tau.last().copied().unwrap_or(0.0)
    }

    pub fn last(&self) -> Complex64 {
        self.values.last().copied().unwrap_or_default()
    }

    /// Linear interpolation of the real part; `None` outside the grid.
    pub fn real_at(&self, tau: f64) -> Option<f64> {
        crate::grid::interpolate_linear(&self.tau, &self.real(), tau)
    }
}

//! First-order coherence of the emitted field: `g⁽¹⁾(τ) = G(−τ)g₀(τ)`,
//! coherent fraction and the zero-phonon-line / sideband spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{ops, trace_row, vectorize, DensityOperator, Liouvillian, Propagator};
use crate::error::{Error, Result};
use crate::model::{Emitter, GridConfig, Treatment};
use crate::numerics::{half_line_fourier, trapezoid, CMatrix4, ExpTerm};
use crate::phonon::PhononCorrelations;
pub use crate::series::{CorrelationSeries, SeriesKind};

/// Populations below this are treated as an undriven emitter.
const MIN_POPULATION: f64 = 1e-14;

/// Minimum half-width of a non-Markovian spectrum window, in units of `ν_c`.
const SIDEBAND_WINDOW_CUTOFFS: f64 = 5.0;

/// `g₀(τ) = ⟨σ†(t)σ(t+τ)⟩ = tr(σ e^{Lτ}[ρ_ss σ†])`.
pub fn g0_series(prop: &Propagator, rho_ss: &DensityOperator, tau: &[f64]) -> Result<CorrelationSeries> {
    crate::grid::validate_delay_grid(tau)?;
    let values = prop.correlator(rho_ss, &ops::identity(), &ops::sigma_dag(), &ops::sigma(), tau);
    CorrelationSeries::new(tau.to_vec(), values, SeriesKind::G0)
}

/// `g⁽¹⁾(τ) = G*(τ)·g₀(τ)`, or `B²·g₀(τ)` in the Markovian treatment.
pub fn g1_total(g0: &CorrelationSeries, pc: &PhononCorrelations, treatment: Treatment) -> Result<CorrelationSeries> {
    if pc.tau.len() < 2 || pc.tau[0] != 0.0 {
        return Err(Error::Config(
            "phonon correlations must cover τ = 0 with at least two samples".into(),
        ));
    }
    let b2 = pc.b * pc.b;
    let values = g0
        .tau
        .iter()
        .zip(&g0.values)
        .map(|(&t, &v)| match treatment {
            Treatment::Markovian => v * b2,
            Treatment::NonMarkovian => pc.factors_at(t).g.conj() * v,
        })
        .collect();
    CorrelationSeries::new(g0.tau.clone(), values, SeriesKind::G1Total)
}

/// Ratio of the long-delay plateau of `g⁽¹⁾` to its zero-delay value.
pub fn coherent_fraction(rho_ss: &DensityOperator, pc: &PhononCorrelations, treatment: Treatment) -> Result<f64> {
    let population = rho_ss.population();
    if !(population > MIN_POPULATION) {
        return Err(Error::UndefinedFraction { population });
    }
    let coherence = rho_ss.expect(&ops::sigma()).norm_sqr();
    let dressing = match treatment {
        Treatment::NonMarkovian => pc.b * pc.b,
        Treatment::Markovian => 1.0,
    };
    Ok(dressing * coherence / population)
}

/// How the sideband transform treats `g₀(τ)` over the phonon memory time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SidebandMethod {
    /// `g₀(τ) ≈ g₀(0)` inside the phonon memory time.
    #[default]
    Simplified,
    /// Full product `(G*(τ) − B²)·g₀(τ)`.
    ExactProduct,
}

/// Incoherent emission spectrum against `Δω = ω − ω_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub delta_omega: Vec<f64>,
    pub total: Vec<f64>,
    pub zpl: Vec<f64>,
    pub sideband: Vec<f64>,
    /// Weight `B²|⟨σ⟩|²` of the coherent delta peak at `Δω = 0`.
    pub coherent_weight: f64,
    /// `g₀(0) = ⟨σ†σ⟩_ss`.
    pub g0_zero: f64,
}

impl Spectrum {
    /// `∫S_PH dΔω` by the trapezoid rule over the frequency grid.
    pub fn sideband_integral(&self) -> f64 {
        trapezoid(&self.delta_omega, &self.sideband)
    }

    /// Fraction of all emitted power carried by the sideband. The total is
    /// `π·g⁽¹⁾(0) = π·g₀(0)`, which includes the coherent peak.
    pub fn sideband_power_fraction(&self) -> f64 {
        self.sideband_integral() / (PI * self.g0_zero)
    }

    /// Copy scaled so the total spectrum peaks at 1.
    pub fn normalized(&self) -> Spectrum {
        let peak = self.total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return self.clone();
        }
        let scale = |v: &[f64]| v.iter().map(|x| x / peak).collect();
        Spectrum {
            delta_omega: self.delta_omega.clone(),
            total: scale(&self.total),
            zpl: scale(&self.zpl),
            sideband: scale(&self.sideband),
            coherent_weight: self.coherent_weight / peak,
            g0_zero: self.g0_zero / peak,
        }
    }
}

/// Zero-phonon line `Re ∫₀^∞ (g₀(τ) − |⟨σ⟩|²) e^{iΔωτ} dτ` (without the `B²`).
fn zpl_transform(prop: &Propagator, rho_ss: &DensityOperator, delta_omega: &[f64]) -> Result<Vec<f64>> {
    let x0 = rho_ss.matrix() * ops::sigma_dag();
    if let Some((mut terms, kernel)) = prop.exp_terms(&ops::sigma(), &x0) {
        terms.remove(kernel);
        return delta_omega
            .iter()
            .map(|&w| half_line_fourier(&terms, w).map(|v| v.re))
            .collect();
    }
    let Propagator::Dense(l) = prop else {
        unreachable!("spectral propagators return terms")
    };
    resolvent_transform(l, rho_ss, &x0, delta_omega)
}

/// `Re[w · (−(L + iΔω − P)⁻¹ x)]` with `P = vec(ρ_ss)·tr(·)` removing the
/// stationary component.
fn resolvent_transform(
    l: &CMatrix4,
    rho_ss: &DensityOperator,
    x0: &crate::dynamics::CMatrix2,
    delta_omega: &[f64],
) -> Result<Vec<f64>> {
    let rho = vectorize(rho_ss.matrix());
    let tr = trace_row(&ops::identity());
    let x = vectorize(x0) - rho * x0.trace();
    let projector = rho * tr.transpose();
    let w = trace_row(&ops::sigma());
    delta_omega
        .iter()
        .map(|&dw| {
            let a = l - projector + CMatrix4::identity() * Complex64::new(0.0, dw);
            let y = a
                .lu()
                .solve(&x)
                .ok_or_else(|| Error::Domain(format!("resolvent singular at Δω = {dw}")))?;
            Ok(-(w.transpose() * y)[(0, 0)].re)
        })
        .collect()
}

/// `Re ∫₀^{τ_ph} f(τ) e^{iΔωτ} dτ` by the trapezoid rule on the phonon grid.
fn phonon_window_transform(tau: &[f64], f: &[Complex64], delta_omega: &[f64]) -> Vec<f64> {
    let h = tau[1] - tau[0];
    let last = tau.len() - 1;
    delta_omega
        .par_iter()
        .map(|&dw| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, (&t, v)) in tau.iter().zip(f).enumerate() {
                let weight = if k == 0 || k == last { 0.5 * h } else { h };
                let (s, c) = (dw * t).sin_cos();
                acc += v * Complex64::new(c, s) * weight;
            }
            acc.re
        })
        .collect()
}

pub(crate) fn spectrum_from_propagator(
    prop: &Propagator,
    rho_ss: &DensityOperator,
    pc: &PhononCorrelations,
    treatment: Treatment,
    delta_omega: &[f64],
    method: SidebandMethod,
) -> Result<Spectrum> {
    if delta_omega.is_empty() {
        return Err(Error::Config("frequency grid is empty".into()));
    }
    let b2 = pc.b * pc.b;
    let g0_zero = rho_ss.population();
    let coherent_weight = b2 * rho_ss.expect(&ops::sigma()).norm_sqr();
    let zpl: Vec<f64> = zpl_transform(prop, rho_ss, delta_omega)?
        .into_iter()
        .map(|v| v * b2)
        .collect();

    let sideband = match treatment {
        Treatment::Markovian => vec![0.0; delta_omega.len()],
        Treatment::NonMarkovian => {
            if pc.tau.len() < 2 {
                return Err(Error::Config("phonon correlations need at least two samples".into()));
            }
            if pc.b < 1.0 {
                let window = SIDEBAND_WINDOW_CUTOFFS * pc.nu_c;
                let lo = delta_omega.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = delta_omega.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if lo > -window || hi < window {
                    return Err(Error::Config(format!(
                        "frequency grid [{lo}, {hi}] ps⁻¹ must span ±{window} ps⁻¹ to contain the sideband"
                    )));
                }
            }
            let f: Vec<Complex64> = match method {
                SidebandMethod::Simplified => pc.g.iter().map(|g| (g.conj() - b2) * g0_zero).collect(),
                SidebandMethod::ExactProduct => {
                    let g0 = g0_series(prop, rho_ss, &pc.tau)?;
                    pc.g.iter().zip(&g0.values).map(|(g, v)| (g.conj() - b2) * v).collect()
                }
            };
            phonon_window_transform(&pc.tau, &f, delta_omega)
        }
    };
    let total = zpl.iter().zip(&sideband).map(|(a, b)| a + b).collect();
    Ok(Spectrum {
        delta_omega: delta_omega.to_vec(),
        total,
        zpl,
        sideband,
        coherent_weight,
        g0_zero,
    })
}

/// Incoherent spectrum `S_inc = S_ZPL + S_PH` with the coherent peak
/// reported separately as a weight.
pub fn incoherent_spectrum(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    pc: &PhononCorrelations,
    treatment: Treatment,
    delta_omega: &[f64],
    method: SidebandMethod,
) -> Result<Spectrum> {
    let prop = Propagator::new(l)?;
    spectrum_from_propagator(&prop, rho_ss, pc, treatment, delta_omega, method)
}

/// Spectrum of an emitter on the configured frequency grid.
pub fn spectrum_for_emitter(
    emitter: &Emitter<'_>,
    grids: &GridConfig,
    treatment: Treatment,
    method: SidebandMethod,
) -> Result<Spectrum> {
    let delta_omega = grids.frequency_grid()?;
    spectrum_from_propagator(
        &emitter.propagator,
        &emitter.rho_ss,
        emitter.bath.correlations(),
        treatment,
        &delta_omega,
        method,
    )
}

/// `g₀` as an exponential sum without its stationary term, when available.
pub fn g0_decaying_terms(prop: &Propagator, rho_ss: &DensityOperator) -> Option<Vec<ExpTerm>> {
    let x0 = rho_ss.matrix() * ops::sigma_dag();
    prop.exp_terms(&ops::sigma(), &x0).map(|(mut terms, kernel)| {
        terms.remove(kernel);
        terms
    })
}

pub use crate::phonon::sideband_power_fraction;

//! Hong–Ou–Mandel two-photon interference of the emitted field: the
//! unbalanced Mach–Zehnder coincidence function, detector convolution and
//! dip-depth sweeps.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{ops, DensityOperator, DriveConfig, Liouvillian, Propagator};
use crate::error::{Error, Result};
use crate::grid::validate_delay_grid;
use crate::model::{Emitter, GridConfig, Treatment};
use crate::numerics::convolve_gaussian;
use crate::phonon::{PhononBath, PhononCorrelations, PhononEnvironment};
use crate::series::{CorrelationSeries, SeriesKind};

/// Normalizations below this make `g²` undefined.
const MIN_NORMALIZATION: f64 = 1e-14;

/// Resampling points per detector FWHM.
const SAMPLES_PER_FWHM: f64 = 50.0;

/// Upper bound on resampled points per half axis.
const MAX_RESAMPLED: usize = 2_000_000;

/// Gaussian timing response of the coincidence detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    /// Full width at half maximum, ps.
    pub fwhm: f64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self { fwhm: 400.0 }
    }
}

impl DetectorModel {
    pub fn new(fwhm: f64) -> Result<Self> {
        if !(fwhm > 0.0 && fwhm.is_finite()) {
            return Err(Error::Config(format!("detector FWHM must be > 0, got {fwhm}")));
        }
        Ok(Self { fwhm })
    }
}

/// Rescaled `g²(τ)` together with its value at the grid end before rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Series {
    pub series: CorrelationSeries,
    /// `g²(τ_max)` before the final rescale; the rescale factor is its inverse.
    pub asymptote: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomResult {
    pub raw: CorrelationSeries,
    pub convolved: CorrelationSeries,
    /// `1 − g²_convolved(0)`.
    pub dip_depth: f64,
    pub asymptote: f64,
}

/// Regression-theorem moments entering the coincidence function.
struct HomMoments {
    /// `⟨σ†(t)σ†(t+τ)σ(t+τ)σ(t)⟩`.
    t1: Vec<Complex64>,
    /// `⟨σ†(t)σ†(t+τ)σ(t+τ)⟩`.
    t2: Vec<Complex64>,
    /// `⟨σ†(t)σ†(t+τ)σ(t)⟩`.
    t3: Vec<Complex64>,
    /// `⟨σ†(t+τ)σ(t)⟩`.
    t4: Vec<Complex64>,
    /// `⟨σ(t+τ)σ(t)⟩`.
    t5: Vec<Complex64>,
}

fn hom_moments(prop: &Propagator, rho: &DensityOperator, tau: &[f64]) -> HomMoments {
    let (s, sd, id, n) = (ops::sigma(), ops::sigma_dag(), ops::identity(), ops::excited());
    HomMoments {
        t1: prop.correlator(rho, &s, &sd, &n, tau),
        t2: prop.correlator(rho, &id, &sd, &n, tau),
        t3: prop.correlator(rho, &s, &sd, &sd, tau),
        t4: prop.correlator(rho, &s, &id, &sd, tau),
        t5: prop.correlator(rho, &s, &id, &s, tau),
    }
}

pub(crate) fn g2_from_propagator(
    prop: &Propagator,
    rho: &DensityOperator,
    pc: &PhononCorrelations,
    tau: &[f64],
    treatment: Treatment,
) -> Result<G2Series> {
    validate_delay_grid(tau)?;
    let population = rho.population();
    let coherence = rho.expect(&ops::sigma());
    // Markovian: every displacement operator is replaced by its mean B, which
    // cancels between the coincidence function and its normalization.
    let dressing = match treatment {
        Treatment::NonMarkovian => pc.b * pc.b,
        Treatment::Markovian => 1.0,
    };
    let normalization = population * population - dressing * dressing * coherence.norm_sqr().powi(2);
    if !(normalization.abs() >= MIN_NORMALIZATION) {
        return Err(Error::UndefinedCorrelation {
            denominator: normalization,
        });
    }

    let m = hom_moments(prop, rho, tau);
    let one = Complex64::new(1.0, 0.0);
    let raw: Vec<f64> = tau
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let (g, c, gcal) = match treatment {
                Treatment::NonMarkovian => {
                    let f = pc.factors_at(t);
                    (f.g, f.c, f.gcal)
                }
                Treatment::Markovian => (one, one, one),
            };
            let cross = (coherence * dressing * (m.t2[i] - gcal * m.t3[i])).re;
            let numerator =
                m.t1[i].re + 2.0 * cross - g.norm_sqr() * m.t4[i].norm_sqr() - c.norm_sqr() * m.t5[i].norm_sqr()
                    + population * population;
            0.5 * numerator / normalization
        })
        .collect();

    let asymptote = *raw.last().expect("validated grid is non-empty");
    if !(asymptote.is_finite() && asymptote.abs() > 0.0) {
        return Err(Error::UndefinedCorrelation { denominator: asymptote });
    }
    let scaled = raw.into_iter().map(|v| v / asymptote).collect();
    Ok(G2Series {
        series: CorrelationSeries::from_real(tau.to_vec(), scaled, SeriesKind::G2Raw)?,
        asymptote,
    })
}

/// Normalized HOM coincidence function `g²(τ)` for a perfect detector,
/// rescaled so that `g²(τ_max) = 1`.
pub fn g2_hom(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    pc: &PhononCorrelations,
    tau: &[f64],
    treatment: Treatment,
) -> Result<G2Series> {
    let prop = Propagator::new(l)?;
    g2_from_propagator(&prop, rho_ss, pc, tau, treatment)
}

/// Running integral of the piecewise-linear interpolant of an even function,
/// `F(x) = ∫₀ˣ g`, odd in `x` and continued linearly past the last sample.
struct EvenPrimitive<'a> {
    tau: &'a [f64],
    values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<'a> EvenPrimitive<'a> {
    fn new(tau: &'a [f64], values: Vec<f64>) -> Self {
        let mut cumulative = Vec::with_capacity(tau.len());
        cumulative.push(0.0);
        for i in 1..tau.len() {
            let area = 0.5 * (values[i] + values[i - 1]) * (tau[i] - tau[i - 1]);
            cumulative.push(cumulative[i - 1] + area);
        }
        Self {
            tau,
            values,
            cumulative,
        }
    }

    fn at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return -self.at(-x);
        }
        let last = self.tau.len() - 1;
        if x >= self.tau[last] {
            return self.cumulative[last] + self.values[last] * (x - self.tau[last]);
        }
        let i = self.tau.partition_point(|&t| t <= x) - 1;
        let (t0, t1) = (self.tau[i], self.tau[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let d = x - t0;
        let slope = (v1 - v0) / (t1 - t0);
        self.cumulative[i] + v0 * d + 0.5 * slope * d * d
    }
}

/// Two-sided detector convolution of an even `g²(τ)`, sampled on the
/// non-negative half of a uniform grid of spacing `fwhm/50`.
pub fn detector_convolved_g2(raw: &CorrelationSeries, det: &DetectorModel) -> Result<CorrelationSeries> {
    let min_spacing = raw.tau.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if raw.len() < 2 || det.fwhm <= min_spacing / 100.0 {
        let mut out = raw.clone();
        out.kind = SeriesKind::G2Convolved;
        return Ok(out);
    }
    let span = raw.tau_max();
    if span < 5.0 * det.fwhm {
        return Err(Error::Config(format!(
            "g² window {span} ps is shorter than five detector widths ({} ps)",
            5.0 * det.fwhm
        )));
    }
    let h = det.fwhm / SAMPLES_PER_FWHM;
    let half = (span / h).floor() as usize;
    if half > MAX_RESAMPLED {
        return Err(Error::Resolution {
            spacing: h,
            fwhm: det.fwhm,
        });
    }

    // Cell averages over [u − h/2, u + h/2] keep the integral of the series.
    let primitive = EvenPrimitive::new(&raw.tau, raw.real());
    let cell = |u: f64| (primitive.at(u + 0.5 * h) - primitive.at(u - 0.5 * h)) / h;
    let positive: Vec<f64> = (0..=half).map(|j| cell(j as f64 * h)).collect();
    let mut two_sided: Vec<f64> = positive[1..].iter().rev().copied().collect();
    two_sided.extend_from_slice(&positive);

    let convolved = convolve_gaussian(&two_sided, h, det.fwhm)?;
    let tau: Vec<f64> = (0..=half).map(|j| j as f64 * h).collect();
    CorrelationSeries::from_real(tau, convolved[half..].to_vec(), SeriesKind::G2Convolved)
}

/// Full HOM pipeline for one emitter.
pub fn hom_for_emitter(
    emitter: &Emitter<'_>,
    det: &DetectorModel,
    grids: &GridConfig,
    treatment: Treatment,
) -> Result<HomResult> {
    let tau = grids.hom_grid(emitter.drive.gamma, det.fwhm)?;
    let g2 = g2_from_propagator(
        &emitter.propagator,
        &emitter.rho_ss,
        emitter.bath.correlations(),
        &tau,
        treatment,
    )?;
    let convolved = detector_convolved_g2(&g2.series, det)?;
    let dip_depth = 1.0 - convolved.values[0].re;
    Ok(HomResult {
        raw: g2.series,
        convolved,
        dip_depth,
        asymptote: g2.asymptote,
    })
}

/// One entry of a dip-depth sweep; failures are kept per point.
#[derive(Debug)]
pub struct SweepPoint {
    pub s: f64,
    pub dip_depth: Result<f64>,
}

/// Dip depth `1 − g²_convolved(0)` against saturation `s = √2·Ω/γ`, reusing
/// one sampled bath.
pub fn dip_depth_sweep_with_bath(
    bath: &PhononBath,
    drive_template: &DriveConfig,
    det: &DetectorModel,
    s_values: &[f64],
    treatment: Treatment,
    grids: &GridConfig,
) -> Result<Vec<SweepPoint>> {
    if s_values.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::Config("saturation values must be positive".into()));
    }
    if s_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("saturation values must be strictly ascending".into()));
    }
    Ok(s_values
        .par_iter()
        .map(|&s| {
            let drive = DriveConfig {
                omega: s * drive_template.gamma / std::f64::consts::SQRT_2,
                ..*drive_template
            };
            let dip_depth = Emitter::new(bath, drive)
                .and_then(|e| hom_for_emitter(&e, det, grids, treatment))
                .map(|r| r.dip_depth);
            SweepPoint { s, dip_depth }
        })
        .collect())
}

/// As [`dip_depth_sweep_with_bath`], sampling the bath first.
pub fn dip_depth_sweep(
    env: &PhononEnvironment,
    drive_template: &DriveConfig,
    det: &DetectorModel,
    s_values: &[f64],
    treatment: Treatment,
    grids: &GridConfig,
) -> Result<Vec<SweepPoint>> {
    let bath = PhononBath::new(*env, grids.phonon)?;
    dip_depth_sweep_with_bath(&bath, drive_template, det, s_values, treatment, grids)
}

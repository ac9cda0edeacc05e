//! Phonon bath: spectral density, displacement factor, correlation functions
//! and the polaron master-equation rates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::uniform_grid;
use crate::numerics::{
    composite_kronrod, integrate_semi_infinite, integrate_semi_infinite_oscillatory, simpson_uniform, QuadratureSpec,
};

/// Boltzmann constant over ħ in ps⁻¹ K⁻¹.
pub const K_OVER_HBAR: f64 = 0.1309;

/// Below this multiple of `ν_c` the thermal integrand uses its `ν → 0` limit.
const SMALL_NU_FRACTION: f64 = 1e-4;

/// Upper delay of the rate integrals, ps.
pub const RATE_TAU_MAX: f64 = 50.0;

pub const DEFAULT_PHONON_TAU_STEP: f64 = 0.005;
pub const DEFAULT_PHONON_TAU_MAX: f64 = 20.0;

/// Largest admissible phonon-grid spacing, ps.
const MAX_PHONON_STEP: f64 = 0.01;

/// Super-ohmic bath `J(ν) = αν³e^{−ν²/ν_c²}` at temperature `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononEnvironment {
    /// Coupling strength, ps².
    pub alpha: f64,
    /// Cutoff frequency, ps⁻¹.
    pub nu_c: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl Default for PhononEnvironment {
    fn default() -> Self {
        Self {
            alpha: 0.03,
            nu_c: 2.2,
            temperature: 4.0,
        }
    }
}

impl PhononEnvironment {
    pub fn new(alpha: f64, nu_c: f64, temperature: f64) -> Result<Self> {
        let env = Self {
            alpha,
            nu_c,
            temperature,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be ≥ 0, got {}", self.alpha)));
        }
        if !(self.nu_c > 0.0 && self.nu_c.is_finite()) {
            return Err(Error::Config(format!("nu_c must be > 0, got {}", self.nu_c)));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::Config(format!(
                "temperature must be ≥ 0, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    /// `β = ħ/(k_B T)` in ps; `None` at zero temperature.
    pub fn beta(&self) -> Option<f64> {
        (self.temperature > 0.0).then(|| 1.0 / (K_OVER_HBAR * self.temperature))
    }

    /// `J(ν)/ν² · coth(βν/2)` with the removable singularity at `ν = 0`
    /// replaced by its limit `2α/β`.
    fn thermal_weight(&self, nu: f64) -> f64 {
        let envelope = (-(nu / self.nu_c).powi(2)).exp();
        match self.beta() {
            None => self.alpha * nu * envelope,
            Some(beta) if nu < SMALL_NU_FRACTION * self.nu_c => 2.0 * self.alpha / beta * envelope,
            Some(beta) => self.alpha * nu * envelope / (0.5 * beta * nu).tanh(),
        }
    }

    /// `J(ν)/ν²`, the weight of the sine part of `φ`.
    fn bare_weight(&self, nu: f64) -> f64 {
        self.alpha * nu * (-(nu / self.nu_c).powi(2)).exp()
    }
}

/// `J(ν) = αν³e^{−ν²/ν_c²}` in ps⁻¹.
pub fn spectral_density(nu: f64, env: &PhononEnvironment) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::Domain(format!("spectral density needs ν ≥ 0, got {nu}")));
    }
    Ok(env.alpha * nu.powi(3) * (-(nu / env.nu_c).powi(2)).exp())
}

/// `φ(τ) = ∫₀^∞ J(ν)/ν² (coth(βν/2) cos ντ − i sin ντ) dν` for any real `τ`.
pub fn phase_function(env: &PhononEnvironment, tau: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    env.validate()?;
    if env.alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    integrate_semi_infinite_oscillatory(
        |nu| {
            let (s, c) = (nu * tau).sin_cos();
            Complex64::new(env.thermal_weight(nu) * c, -env.bare_weight(nu) * s)
        },
        env.nu_c,
        tau,
        spec,
    )
}

/// Franck–Condon factor `B = exp(−½∫J(ν)/ν² coth(βν/2) dν)`.
pub fn displacement_factor(env: &PhononEnvironment) -> Result<f64> {
    env.validate()?;
    if env.alpha == 0.0 {
        return Ok(1.0);
    }
    let exponent = integrate_semi_infinite(
        |nu| Complex64::new(env.thermal_weight(nu), 0.0),
        env.nu_c,
        &QuadratureSpec::default(),
    )?;
    Ok((-0.5 * exponent.re).exp())
}

/// `B`, `Ω_r = ΩB` and the phonon rates with the `(Ω/2)²` prefactor applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaronQuantities {
    pub b: f64,
    pub omega_r: f64,
    pub gamma_x: Complex64,
    pub chi_y: Complex64,
    pub chi_z: Complex64,
}

impl PolaronQuantities {
    /// Decoupled bath: `B = 1` and no phonon rates.
    pub fn bare(omega: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            b: 1.0,
            omega_r: omega,
            gamma_x: zero,
            chi_y: zero,
            chi_z: zero,
        }
    }
}

/// Short-time phonon correlation functions on a uniform delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononCorrelations {
    pub tau: Vec<f64>,
    pub phi: Vec<Complex64>,
    /// `G(τ) = B²e^{φ(τ)}`.
    pub g: Vec<Complex64>,
    /// `C(τ) = B²e^{−φ(τ)}`.
    pub c: Vec<Complex64>,
    /// `𝒢(τ) = e^{φ(τ) − φ*(τ)}`.
    pub gcal: Vec<Complex64>,
    pub b: f64,
    /// Cutoff frequency of the bath, ps⁻¹.
    pub nu_c: f64,
}

/// Values of the phonon factors at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononFactors {
    pub g: Complex64,
    pub c: Complex64,
    pub gcal: Complex64,
}

impl PhononCorrelations {
    fn from_phi(tau: Vec<f64>, phi: Vec<Complex64>, b: f64, nu_c: f64) -> Self {
        let b2 = b * b;
        let g = phi.iter().map(|p| p.exp() * b2).collect();
        let c = phi.iter().map(|p| (-p).exp() * b2).collect();
        let gcal = phi.iter().map(|p| Complex64::new(0.0, 2.0 * p.im).exp()).collect();
        Self {
            tau,
            phi,
            g,
            c,
            gcal,
            b,
            nu_c,
        }
    }

    pub fn tau_max(&self) -> f64 {
        self.tau.last().copied().unwrap_or(0.0)
    }

    pub fn step(&self) -> f64 {
        self.tau.get(1).copied().unwrap_or(0.0)
    }

    /// Factors at delay `τ ≥ 0`, linearly interpolated in real and imaginary
    /// parts and held at their plateau `(B², B², 1)` beyond the grid.
    pub fn factors_at(&self, tau: f64) -> PhononFactors {
        let b2 = Complex64::new(self.b * self.b, 0.0);
        if tau > self.tau_max() {
            return PhononFactors {
                g: b2,
                c: b2,
                gcal: Complex64::new(1.0, 0.0),
            };
        }
        let interp = |v: &[Complex64]| {
            let step = self.step();
            let pos = tau / step;
            let i = (pos.floor() as usize).min(self.tau.len() - 1);
            if i + 1 >= self.tau.len() {
                return v[i];
            }
            let w = pos - i as f64;
            v[i] * (1.0 - w) + v[i + 1] * w
        };
        PhononFactors {
            g: interp(&self.g),
            c: interp(&self.c),
            gcal: interp(&self.gcal),
        }
    }
}

/// Uniform phonon delay grid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononGrid {
    pub step: f64,
    pub tau_max: f64,
}

impl Default for PhononGrid {
    fn default() -> Self {
        Self {
            step: DEFAULT_PHONON_TAU_STEP,
            tau_max: DEFAULT_PHONON_TAU_MAX,
        }
    }
}

impl PhononGrid {
    pub fn validate(&self, env: &PhononEnvironment) -> Result<()> {
        if !(self.step > 0.0 && self.step <= MAX_PHONON_STEP) {
            return Err(Error::Config(format!(
                "phonon grid spacing {} ps must lie in (0, {MAX_PHONON_STEP}]",
                self.step
            )));
        }
        let min_span = 20.0 / env.nu_c;
        if !(self.tau_max >= min_span) {
            return Err(Error::Config(format!(
                "phonon grid span {} ps is shorter than 20/ν_c = {min_span} ps",
                self.tau_max
            )));
        }
        Ok(())
    }
}

/// Delays per block sharing one exact phase; within a block the phase
/// advances by rotation.
const PHASE_BLOCK: usize = 256;

/// `φ(k·step)` for `k = 0..n`. One Kronrod panel per half period of the
/// fastest kernel, so the bath weights are evaluated once for all delays.
fn sample_phi(env: &PhononEnvironment, step: f64, n: usize) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if env.alpha == 0.0 || n == 0 {
        return Ok(out);
    }
    let upper = QuadratureSpec::default().truncation_multiplier * env.nu_c;
    let tau_max = step * (n - 1) as f64;
    let panels = ((tau_max * upper / std::f64::consts::PI).ceil() as usize).max(16);
    let (nodes, weights) = composite_kronrod(0.0, upper, panels)?;
    // φ(τ) = Σ wᵢ [thermalᵢ cos(νᵢτ) − i bareᵢ sin(νᵢτ)]
    let terms: Vec<(f64, f64, f64)> = nodes
        .iter()
        .zip(&weights)
        .map(|(&nu, w)| (nu, w * env.thermal_weight(nu), w * env.bare_weight(nu)))
        .collect();
    out.par_chunks_mut(PHASE_BLOCK).enumerate().for_each(|(block, chunk)| {
        let first = block * PHASE_BLOCK;
        for &(nu, th, b) in &terms {
            let mut z = Complex64::from_polar(1.0, nu * step * first as f64);
            let rot = Complex64::from_polar(1.0, nu * step);
            for v in chunk.iter_mut() {
                v.re += th * z.re;
                v.im -= b * z.im;
                z *= rot;
            }
        }
    });
    Ok(out)
}

/// Samples `φ`, `G`, `C` and `𝒢` on a uniform grid `[0, τ_max]`.
pub fn phonon_correlations(env: &PhononEnvironment, grid: &PhononGrid) -> Result<PhononCorrelations> {
    Ok(PhononBath::new(*env, *grid)?.correlations().clone())
}

/// Phonon rates for a bare Rabi frequency `Ω`, using the default grid.
pub fn polaron_rates(env: &PhononEnvironment, omega: f64) -> Result<PolaronQuantities> {
    PhononBath::new(*env, PhononGrid::default())?.rates(omega)
}

/// A bath with its phonon correlations sampled once, reused for any number of
/// drive strengths.
#[derive(Debug, Clone)]
pub struct PhononBath {
    env: PhononEnvironment,
    grid: PhononGrid,
    b: f64,
    correlations: PhononCorrelations,
    /// `Λ_xx(τ)` and `Λ_yy(τ)` on `[0, 50]` ps at the phonon spacing.
    lambda_xx: Vec<Complex64>,
    lambda_yy: Vec<Complex64>,
    rate_tau: Vec<f64>,
}

impl PhononBath {
    pub fn new(env: PhononEnvironment, grid: PhononGrid) -> Result<Self> {
        env.validate()?;
        grid.validate(&env)?;
        let b = displacement_factor(&env)?;
        let span = grid.tau_max.max(RATE_TAU_MAX);
        let all_tau = uniform_grid(grid.step, span)?;
        let phi = sample_phi(&env, grid.step, all_tau.len())?;

        let b2 = b * b;
        let rate_len = all_tau.iter().take_while(|&&t| t <= RATE_TAU_MAX + 1e-9).count();
        let lambda_xx: Vec<Complex64> = phi[..rate_len]
            .iter()
            .map(|p| (p.exp() + (-p).exp() - 2.0) * (0.5 * b2))
            .collect();
        let lambda_yy: Vec<Complex64> = phi[..rate_len]
            .iter()
            .map(|p| (p.exp() - (-p).exp()) * (0.5 * b2))
            .collect();

        let corr_len = all_tau.iter().take_while(|&&t| t <= grid.tau_max + 1e-9).count();
        let correlations =
            PhononCorrelations::from_phi(all_tau[..corr_len].to_vec(), phi[..corr_len].to_vec(), b, env.nu_c);
        Ok(Self {
            env,
            grid,
            b,
            correlations,
            lambda_xx,
            lambda_yy,
            rate_tau: all_tau[..rate_len].to_vec(),
        })
    }

    pub fn env(&self) -> &PhononEnvironment {
        &self.env
    }

    pub fn grid(&self) -> &PhononGrid {
        &self.grid
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn correlations(&self) -> &PhononCorrelations {
        &self.correlations
    }

    /// `Γ_x`, `χ_y`, `χ_z` by Simpson quadrature of `Λ(τ)` over `[0, 50]` ps.
    pub fn rates(&self, omega: f64) -> Result<PolaronQuantities> {
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("Rabi frequency must be ≥ 0, got {omega}")));
        }
        let omega_r = omega * self.b;
        let prefactor = (0.5 * omega).powi(2);
        let step = self.grid.step;
        let gamma_x = simpson_uniform(step, &self.lambda_xx) * prefactor;
        let weighted = |f: fn(f64) -> f64| -> Vec<Complex64> {
            self.rate_tau
                .iter()
                .zip(&self.lambda_yy)
                .map(|(&t, l)| l * f(omega_r * t))
                .collect()
        };
        let chi_y = simpson_uniform(step, &weighted(f64::cos)) * prefactor;
        let chi_z = simpson_uniform(step, &weighted(f64::sin)) * prefactor;
        Ok(PolaronQuantities {
            b: self.b,
            omega_r,
            gamma_x,
            chi_y,
            chi_z,
        })
    }
}

/// Fraction of emission through the phonon sideband, `1 − B²`.
pub fn sideband_power_fraction(env: &PhononEnvironment) -> Result<f64> {
    let b = displacement_factor(env)?;
    Ok(1.0 - b * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_env(t: f64) -> PhononEnvironment {
        PhononEnvironment::new(0.03, 2.2, t).unwrap()
    }

    #[test]
    fn spectral_density_values() {
        let env = default_env(4.0);
        assert_eq!(spectral_density(0.0, &env).unwrap(), 0.0);
        let at_cutoff = spectral_density(2.2, &env).unwrap();
        assert!((at_cutoff - 0.03 * 2.2f64.powi(3) * (-1.0f64).exp()).abs() < 1e-15);
        assert!((at_cutoff - 0.117_515_408_687_805_6).abs() < 1e-15);
        assert!((at_cutoff - 0.117_538).abs() < 3e-5);
        assert!(spectral_density(-1.0, &env).is_err());
    }

    #[test]
    fn spectral_density_peak() {
        let env = default_env(4.0);
        let peak = 1.5f64.sqrt() * env.nu_c;
        let j = |x| spectral_density(x, &env).unwrap();
        for d in [1e-3, 1e-2, 0.1] {
            assert!(j(peak) > j(peak + d));
            assert!(j(peak) > j(peak - d));
        }
    }

    #[test]
    fn displacement_factor_reference_points() {
        let b2 = |t| displacement_factor(&default_env(t)).unwrap().powi(2);
        assert!((b2(0.0) - 0.93).abs() <= 0.005, "{}", b2(0.0));
        assert!((b2(4.0) - 0.909).abs() <= 0.005, "{}", b2(4.0));
        let uncoupled = PhononEnvironment::new(0.0, 2.2, 4.0).unwrap();
        assert_eq!(displacement_factor(&uncoupled).unwrap(), 1.0);
    }

    #[test]
    fn zero_temperature_phi_is_gaussian_moment() {
        let env = default_env(0.0);
        let phi0 = phase_function(&env, 0.0, &QuadratureSpec::default()).unwrap();
        let exact = 0.03 * 2.2 * 2.2 / 2.0;
        assert!((phi0.re - exact).abs() < 1e-12 * exact);
        assert_eq!(phi0.im, 0.0);
        assert!((exact - 0.0726).abs() < 1e-12);
    }

    #[test]
    fn phi_at_negative_delay_is_conjugate() {
        let env = default_env(4.0);
        let spec = QuadratureSpec::default();
        for tau in [0.1, 0.7, 2.5, 9.0] {
            let fwd = phase_function(&env, tau, &spec).unwrap();
            let back = phase_function(&env, -tau, &spec).unwrap();
            assert!((back - fwd.conj()).norm() < 1e-13);
            let b2 = displacement_factor(&env).unwrap().powi(2);
            assert!((back.exp() * b2 - (fwd.exp() * b2).conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let env = default_env(4.0);
        let coarse = PhononGrid {
            step: 0.02,
            tau_max: 20.0,
        };
        let short = PhononGrid {
            step: 0.005,
            tau_max: 5.0,
        };
        assert!(matches!(phonon_correlations(&env, &coarse), Err(Error::Config(_))));
        assert!(matches!(phonon_correlations(&env, &short), Err(Error::Config(_))));
    }

    #[test]
    fn uncoupled_bath_is_trivial() {
        let env = PhononEnvironment::new(0.0, 2.2, 4.0).unwrap();
        let pc = phonon_correlations(&env, &PhononGrid::default()).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(pc.phi.iter().all(|p| *p == Complex64::new(0.0, 0.0)));
        assert!(pc.g.iter().chain(&pc.c).chain(&pc.gcal).all(|v| *v == one));
        let pq = polaron_rates(&env, 0.01).unwrap();
        assert_eq!(pq, PolaronQuantities::bare(0.01));
    }

    #[test]
    fn zero_drive_has_no_rates() {
        let pq = polaron_rates(&default_env(4.0), 0.0).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!((pq.gamma_x, pq.chi_y, pq.chi_z), (zero, zero, zero));
        assert_eq!(pq.omega_r, 0.0);
    }

    #[test]
    fn correlation_identities() {
        let env = default_env(4.0);
        let pc = phonon_correlations(&env, &PhononGrid::default()).unwrap();
        let b2 = pc.b * pc.b;
        assert!((pc.g[0] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!(pc.phi[0].im.abs() < 1e-15);
        assert!((pc.phi[0].re.exp() * b2 - 1.0).abs() < 1e-6);
        for i in 0..pc.tau.len() {
            assert!(pc.g[i].norm() <= 1.0 + 1e-12);
            assert!((pc.g[i] * pc.c[i] - b2 * b2).norm() < 1e-12);
            assert!((pc.gcal[i].norm() - 1.0).abs() < 1e-10);
        }
        let last = pc.tau.len() - 1;
        assert!(pc.phi[last].norm() < 1e-4);
        assert!((pc.g[last] - b2).norm() < 1e-4);
        assert!((pc.c[last] - b2).norm() < 1e-4);
        assert!((pc.gcal[last] - 1.0).norm() < 1e-4);
    }

    #[test]
    fn factors_hold_plateau_beyond_grid() {
        let pc = phonon_correlations(&default_env(4.0), &PhononGrid::default()).unwrap();
        let f = pc.factors_at(100.0);
        let b2 = pc.b * pc.b;
        assert_eq!(f.g, Complex64::new(b2, 0.0));
        assert_eq!(f.gcal, Complex64::new(1.0, 0.0));
        let mid = pc.factors_at(0.0025);
        assert!((mid.g - (pc.g[0] + pc.g[1]) * 0.5).norm() < 1e-15);
    }

    #[test]
    fn grid_sampling_matches_adaptive_phase() {
        let spec = QuadratureSpec::default();
        for t in [0.0, 4.0, 15.0] {
            let env = default_env(t);
            let tau: Vec<f64> = (0..=500).map(|i| i as f64 * 0.1).collect();
            let sampled = sample_phi(&env, 0.1, tau.len()).unwrap();
            let scale = phase_function(&env, 0.0, &spec).unwrap().norm();
            for (&x, s) in tau.iter().zip(&sampled) {
                let adaptive = phase_function(&env, x, &spec).unwrap();
                assert!(
                    (s - adaptive).norm() < 1e-12 * scale,
                    "T = {t}, τ = {x}: {s} vs {adaptive}"
                );
            }
        }
        // Full default grid: rotation error stays bounded within each block.
        let env = default_env(4.0);
        let n = 10_001;
        let fine = sample_phi(&env, DEFAULT_PHONON_TAU_STEP, n).unwrap();
        let scale = phase_function(&env, 0.0, &spec).unwrap().norm();
        for k in (0..n).step_by(97).chain([PHASE_BLOCK - 1, n - 1]) {
            let adaptive = phase_function(&env, k as f64 * DEFAULT_PHONON_TAU_STEP, &spec).unwrap();
            assert!((fine[k] - adaptive).norm() < 1e-12 * scale, "k = {k}");
        }
        assert!(sample_phi(&PhononEnvironment::new(0.0, 2.2, 4.0).unwrap(), 1.0, 2)
            .unwrap()
            .iter()
            .all(|p| p.norm() == 0.0));
    }

    #[test]
    fn rates_are_dissipative_at_default_point() {
        let pq = polaron_rates(&default_env(4.0), 0.01).unwrap();
        assert!(pq.gamma_x.re >= 0.0);
        assert!(pq.chi_y.re >= 0.0);
        assert!((pq.omega_r - 0.01 * pq.b).abs() < 1e-18);
    }
}

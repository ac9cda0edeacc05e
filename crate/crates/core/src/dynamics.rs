//! Polaron-frame Liouvillian, steady state, time evolution and
//! regression-theorem correlators for the two-level emitter.
//!
//! Density operators are written in the basis `{|0⟩, |X⟩}` and vectorized by
//! column stacking, `(ρ₀₀, ρ_X0, ρ_0X, ρ_XX)`, so that
//! `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::validate_delay_grid;
use crate::numerics::{eig_decompose, CMatrix4, CVector4, EigenSystem, ExpTerm};
use crate::phonon::PolaronQuantities;
use crate::series::{CorrelationSeries, SeriesKind};

pub type CMatrix2 = Matrix2<Complex64>;

const DENSITY_TOL: f64 = 1e-10;
const STEADY_RESIDUAL_TOL: f64 = 1e-12;
const KERNEL_GAP_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two-level operators in the basis `{|0⟩, |X⟩}`.
pub mod ops {
    use super::{c, CMatrix2};

    pub fn identity() -> CMatrix2 {
        CMatrix2::identity()
    }

    /// Lowering operator `σ = |0⟩⟨X|`.
    pub fn sigma() -> CMatrix2 {
        CMatrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    pub fn sigma_dag() -> CMatrix2 {
        sigma().adjoint()
    }

    pub fn sigma_x() -> CMatrix2 {
        sigma() + sigma_dag()
    }

    pub fn sigma_y() -> CMatrix2 {
        (sigma() - sigma_dag()) * c(0.0, 1.0)
    }

    /// `|X⟩⟨X| − |0⟩⟨0|`.
    pub fn sigma_z() -> CMatrix2 {
        CMatrix2::new(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    /// Excited-state projector `σ†σ`.
    pub fn excited() -> CMatrix2 {
        sigma_dag() * sigma()
    }
}

/// Column-stacked `vec(X)`.
pub fn vectorize(x: &CMatrix2) -> CVector4 {
    CVector4::new(x[(0, 0)], x[(1, 0)], x[(0, 1)], x[(1, 1)])
}

pub fn unvectorize(v: &CVector4) -> CMatrix2 {
    CMatrix2::new(v[0], v[2], v[1], v[3])
}

/// Row vector `w` with `w · vec(X) = tr(A X)`.
pub fn trace_row(a: &CMatrix2) -> CVector4 {
    vectorize(&a.transpose())
}

fn kron(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `X ↦ A X`.
fn spre(a: &CMatrix2) -> CMatrix4 {
    kron(&CMatrix2::identity(), a)
}

/// `X ↦ X B`.
fn spost(b: &CMatrix2) -> CMatrix4 {
    kron(&b.transpose(), &CMatrix2::identity())
}

/// `X ↦ A X B`.
fn sprepost(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    kron(&b.transpose(), a)
}

/// Drive parameters in the frame rotating at the laser frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// Bare Rabi frequency Ω, ps⁻¹.
    pub omega: f64,
    /// Spontaneous emission rate γ, ps⁻¹.
    pub gamma: f64,
    /// Polaron-shifted detuning δ̃, ps⁻¹.
    pub detuning_tilde: f64,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            omega: 0.01,
            gamma: 1.0 / 700.0,
            detuning_tilde: 0.0,
        }
    }
}

impl DriveConfig {
    pub fn resonant(omega: f64, gamma: f64) -> Result<Self> {
        let drive = Self {
            omega,
            gamma,
            detuning_tilde: 0.0,
        };
        drive.validate()?;
        Ok(drive)
    }

    /// Drive with saturation parameter `s = √2·Ω/γ`.
    pub fn from_saturation(s: f64, gamma: f64) -> Result<Self> {
        Self::resonant(s * gamma / std::f64::consts::SQRT_2, gamma)
    }

    pub fn saturation(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.omega / self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::Config(format!("omega must be ≥ 0, got {}", self.omega)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !self.detuning_tilde.is_finite() {
            return Err(Error::Config("detuning must be finite".into()));
        }
        Ok(())
    }
}

/// A 2×2 density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator(CMatrix2);

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity to `1e-10`.
    pub fn new(m: CMatrix2) -> Result<Self> {
        let rho = Self(m);
        rho.check(DENSITY_TOL)?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix2) -> Self {
        Self(m)
    }

    pub fn ground() -> Self {
        Self(CMatrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)))
    }

    pub fn excited() -> Self {
        Self(ops::excited())
    }

    pub fn matrix(&self) -> &CMatrix2 {
        &self.0
    }

    pub fn population(&self) -> f64 {
        self.0[(1, 1)].re
    }

    /// `⟨A⟩ = tr(Aρ)`.
    pub fn expect(&self, a: &CMatrix2) -> Complex64 {
        (a * self.0).trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let h = (self.0 + self.0.adjoint()) * c(0.5, 0.0);
        let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
        let off = h[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d).powi(2) + off * off).sqrt();
        [mean - radius, mean + radius]
    }

    /// Checks the density-operator invariants at tolerance `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let herm = (self.0 - self.0.adjoint()).norm();
        if herm > tol {
            return Err(Error::Domain(format!(
                "density operator not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = self.0.trace();
        if (trace - c(1.0, 0.0)).norm() > tol {
            return Err(Error::Domain(format!("density operator trace is {trace}")));
        }
        let min = self.eigenvalues()[0];
        if min < -tol {
            return Err(Error::Domain(format!("density operator has eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Generator of the polaron master equation acting on `vec(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Liouvillian(CMatrix4);

impl Liouvillian {
    pub fn from_matrix(m: CMatrix4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn apply(&self, x: &CMatrix2) -> CMatrix2 {
        unvectorize(&(self.0 * vectorize(x)))
    }
}

/// `L = −i(Ω_r/2)[σ_x,·] + 𝒦_PH + (γ/2)(2σ·σ† − {σ†σ,·})` at zero detuning.
pub fn build_liouvillian(drive: &DriveConfig, pq: &PolaronQuantities) -> Result<Liouvillian> {
    if drive.detuning_tilde != 0.0 {
        return Err(Error::Config(format!(
            "detuning {} ps⁻¹ is not supported; only δ̃ = 0 is validated",
            drive.detuning_tilde
        )));
    }
    assemble(drive, pq)
}

/// As [`build_liouvillian`] but accepting a nonzero detuning, which enters as
/// `−iδ̃[σ†σ, ·]`. Outside the validated regime.
pub fn build_liouvillian_experimental(drive: &DriveConfig, pq: &PolaronQuantities) -> Result<Liouvillian> {
    assemble(drive, pq)
}

fn assemble(drive: &DriveConfig, pq: &PolaronQuantities) -> Result<Liouvillian> {
    drive.validate()?;
    let expected = drive.omega * pq.b;
    if (pq.omega_r - expected).abs() > 1e-12 * expected.abs().max(1e-300) && pq.omega_r != expected {
        return Err(Error::Config(format!(
            "polaron quantities (Ω_r = {}) do not match drive Ω = {} with B = {}",
            pq.omega_r, drive.omega, pq.b
        )));
    }
    let (sx, sy, sz) = (ops::sigma_x(), ops::sigma_y(), ops::sigma_z());
    let (s, sd) = (ops::sigma(), ops::sigma_dag());
    let n = ops::excited();
    let minus_i = c(0.0, -1.0);

    let mut l = (spre(&sx) - spost(&sx)) * (minus_i * (0.5 * pq.omega_r));
    if drive.detuning_tilde != 0.0 {
        l += (spre(&n) - spost(&n)) * (minus_i * drive.detuning_tilde);
    }

    // −([A, Bρ]c + h.c.) for each phonon channel.
    for (a, b, rate) in [(sx, sx, pq.gamma_x), (sy, sy, pq.chi_y), (sy, sz, pq.chi_z)] {
        let forward = (spre(&(a * b)) - sprepost(&b, &a)) * rate;
        let adjoint = (spost(&(b * a)) - sprepost(&a, &b)) * rate.conj();
        l -= forward + adjoint;
    }

    let half_gamma = c(0.5 * drive.gamma, 0.0);
    l += (sprepost(&s, &sd) * c(2.0, 0.0) - spre(&n) - spost(&n)) * half_gamma;
    Ok(Liouvillian(l))
}

/// Unique `ρ_ss` with `L ρ_ss = 0`.
pub fn steady_state(l: &Liouvillian) -> Result<DensityOperator> {
    let m = l.matrix();
    let scale = m.norm();
    if scale == 0.0 {
        return Err(Error::NoUniqueSteadyState(
            "generator vanishes; every state is stationary (γ = 0 and Ω = 0?)".into(),
        ));
    }
    let singular = m.singular_values();
    let mut sorted: Vec<f64> = singular.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if sorted[1] <= KERNEL_GAP_TOL * scale {
        return Err(Error::NoUniqueSteadyState(format!(
            "kernel is at least two-dimensional (singular values {:e}, {:e}); a decay channel (γ > 0) is required",
            sorted[0], sorted[1]
        )));
    }

    // Replace the population row by the trace constraint.
    let mut a = *m;
    let trace = trace_row(&CMatrix2::identity());
    for col in 0..4 {
        a[(0, col)] = trace[col];
    }
    let mut rhs = CVector4::zeros();
    rhs[0] = c(1.0, 0.0);
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NoUniqueSteadyState("trace-constrained system is singular".into()))?;

    let raw = unvectorize(&x);
    let herm = (raw + raw.adjoint()) * c(0.5, 0.0);
    let rho = herm / herm.trace();
    let residual = (m * vectorize(&rho)).norm();
    if residual > STEADY_RESIDUAL_TOL * scale.max(1.0) {
        return Err(Error::NoUniqueSteadyState(format!(
            "steady-state residual {residual:e}"
        )));
    }
    DensityOperator::new(rho)
}

/// `e^{Lt}`: spectral form when `L` is diagonalizable, dense matrix
/// exponentials otherwise.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Propagator {
    Spectral(EigenSystem),
    Dense(CMatrix4),
}

impl Propagator {
    pub fn new(l: &Liouvillian) -> Result<Self> {
        match eig_decompose(l.matrix()) {
            Ok(es) => Ok(Self::Spectral(es)),
            Err(Error::Defective { .. }) => Ok(Self::Dense(*l.matrix())),
            Err(e) => Err(e),
        }
    }

    /// Always uses dense matrix exponentials.
    pub fn dense(l: &Liouvillian) -> Self {
        Self::Dense(*l.matrix())
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, Self::Spectral(_))
    }

    pub fn apply(&self, t: f64, x: &CVector4) -> CVector4 {
        if t == 0.0 {
            return *x;
        }
        match self {
            Self::Spectral(es) => es.propagate(t, x),
            Self::Dense(m) => (m * c(t, 0.0)).exp() * x,
        }
    }

    /// `tr(A e^{Lτ}X)` written as `Σₖ cₖ e^{λₖτ}`, with the kernel term
    /// (index returned alongside) included. `None` for the dense form.
    pub fn exp_terms(&self, observable: &CMatrix2, x: &CMatrix2) -> Option<(Vec<ExpTerm>, usize)> {
        let Self::Spectral(es) = self else { return None };
        let amps = es.mode_amplitudes(&vectorize(x));
        let w = trace_row(observable);
        let terms = (0..4)
            .map(|k| {
                let weight = (w.transpose() * es.right_vectors.column(k))[(0, 0)];
                ExpTerm::new(weight * amps[k], es.eigenvalues[k])
            })
            .collect();
        Some((terms, es.kernel_index()))
    }

    /// `f(τ) = tr(obs · e^{Lτ}[pre · ρ · post])` on `tau`.
    pub fn correlator(
        &self,
        rho: &DensityOperator,
        pre: &CMatrix2,
        post: &CMatrix2,
        observable: &CMatrix2,
        tau: &[f64],
    ) -> Vec<Complex64> {
        let x0 = vectorize(&(pre * rho.matrix() * post));
        let w = trace_row(observable);
        tau.iter()
            .map(|&t| {
                if t == 0.0 {
                    (observable * pre * rho.matrix() * post).trace()
                } else {
                    (w.transpose() * self.apply(t, &x0))[(0, 0)]
                }
            })
            .collect()
    }
}

/// `ρ(t) = e^{Lt}ρ₀` on an ascending grid starting at zero.
pub fn evolve_density(l: &Liouvillian, rho0: &DensityOperator, t_grid: &[f64]) -> Result<Vec<DensityOperator>> {
    validate_delay_grid(t_grid)?;
    let prop = Propagator::new(l)?;
    let x0 = vectorize(rho0.matrix());
    Ok(t_grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                *rho0
            } else {
                DensityOperator::from_matrix_unchecked(unvectorize(&prop.apply(t, &x0)))
            }
        })
        .collect())
}

/// Regression-theorem correlator `tr(obs · e^{Lτ}[pre · ρ_ss · post])`.
///
/// `⟨A(t)B(t+τ)⟩` uses `pre = 1, post = A, obs = B`; `⟨A(t)B(t+τ)C(t)⟩`
/// uses `pre = C, post = A, obs = B`.
pub fn regression_correlator(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    pre: &CMatrix2,
    post: &CMatrix2,
    observable: &CMatrix2,
    tau: &[f64],
) -> Result<CorrelationSeries> {
    validate_delay_grid(tau)?;
    let prop = Propagator::new(l)?;
    let values = prop.correlator(rho_ss, pre, post, observable, tau);
    CorrelationSeries::new(tau.to_vec(), values, SeriesKind::Correlator)
}

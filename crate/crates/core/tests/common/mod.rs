//! Closed-form references shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use polaron::phonon::PhononEnvironment;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn default_env(temperature: f64) -> PhononEnvironment {
    PhononEnvironment::new(0.03, 2.2, temperature).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Resonantly driven two-level atom, `H = (Ω/2)(σ + σ†)`, decay `γ`, with
/// index 0 the ground state. A general 2×2 operator `X` evolves through
/// its trace `t`, `p = x01 + x10`, `q = x01 − x10` and `z = x11 − x00`:
///
/// ```text
/// ṫ = 0,  ṗ = −γp/2,  q̇ = −γq/2 − iΩz,  ż = −iΩq − γ(z + t)
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Bloch {
    pub omega: f64,
    pub gamma: f64,
}

/// Components of an operator in the `(t, p, q, z)` basis.
#[derive(Debug, Clone, Copy)]
pub struct Components {
    pub t: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub z: Complex64,
}

impl Components {
    /// `[[x00, x01], [x10, x11]]`.
    pub fn from_elements(x00: Complex64, x01: Complex64, x10: Complex64, x11: Complex64) -> Self {
        Self {
            t: x00 + x11,
            p: x01 + x10,
            q: x01 - x10,
            z: x11 - x00,
        }
    }

    pub fn x10(&self) -> Complex64 {
        (self.p - self.q) * 0.5
    }

    pub fn x11(&self) -> Complex64 {
        (self.t + self.z) * 0.5
    }
}

impl Bloch {
    pub fn new(omega: f64, gamma: f64) -> Self {
        Self { omega, gamma }
    }

    pub fn rabi(&self) -> f64 {
        (self.omega.powi(2) - self.gamma.powi(2) / 16.0).sqrt()
    }

    fn decay(&self) -> f64 {
        -0.75 * self.gamma
    }

    /// Stationary `(q, z)` for trace `t`.
    fn stationary(&self, t: Complex64) -> (Complex64, Complex64) {
        let (w, g) = (self.omega, self.gamma);
        let z = -t * (g * g / (g * g + 2.0 * w * w));
        let q = c(0.0, -2.0 * w / g) * z;
        (q, z)
    }

    /// `(M − aI)·(q, z)` for the homogeneous `(q, z)` block.
    fn shifted(&self, q: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let a = self.decay();
        let iw = c(0.0, -self.omega);
        ((-0.5 * self.gamma - a) * q + iw * z, iw * q + (-self.gamma - a) * z)
    }

    pub fn evolve(&self, x0: Components, tau: f64) -> Components {
        let (qs, zs) = self.stationary(x0.t);
        let (dq, dz) = (x0.q - qs, x0.z - zs);
        let (sq, sz) = self.shifted(dq, dz);
        let mu = self.rabi();
        let env = (self.decay() * tau).exp();
        let (cos, sin_mu) = ((mu * tau).cos(), (mu * tau).sin() / mu);
        Components {
            t: x0.t,
            p: x0.p * (-0.5 * self.gamma * tau).exp(),
            q: qs + (dq * cos + sq * sin_mu) * env,
            z: zs + (dz * cos + sz * sin_mu) * env,
        }
    }

    pub fn excited_population(&self) -> f64 {
        let (w, g) = (self.omega, self.gamma);
        w * w / (g * g + 2.0 * w * w)
    }

    /// `⟨σ⟩ = tr(σρ) = ρ₁₀`.
    pub fn coherence(&self) -> Complex64 {
        let (w, g) = (self.omega, self.gamma);
        c(0.0, -w * g / (g * g + 2.0 * w * w))
    }

    pub fn coherent_fraction(&self) -> f64 {
        self.coherence().norm_sqr() / self.excited_population()
    }

    /// `ρ(τ)` components from the ground state.
    pub fn evolve_ground(&self, tau: f64) -> Components {
        self.evolve(
            Components::from_elements(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            tau,
        )
    }

    /// `g₀(τ) = tr(σ e^{Lτ}[ρσ†])`; `ρσ† = [[ρ₀₁, 0], [ρ₁₁, 0]]`.
    pub fn g0(&self, tau: f64) -> Complex64 {
        let rho01 = self.coherence().conj();
        let x0 = Components::from_elements(rho01, c(0.0, 0.0), c(self.excited_population(), 0.0), c(0.0, 0.0));
        self.evolve(x0, tau).x10()
    }

    /// `Re ∫₀^∞ (g₀(τ) − g₀(∞)) e^{iΔωτ} dτ`.
    pub fn incoherent_spectrum(&self, delta_omega: f64) -> f64 {
        let rho01 = self.coherence().conj();
        let x0 = Components::from_elements(rho01, c(0.0, 0.0), c(self.excited_population(), 0.0), c(0.0, 0.0));
        let (qs, zs) = self.stationary(x0.t);
        let (dq, dz) = (x0.q - qs, x0.z - zs);
        let (sq, _) = self.shifted(dq, dz);
        let s = c(self.decay(), delta_omega);
        let mu = self.rabi();
        let denom = s * s + mu * mu;
        let cos_part = -s / denom;
        let sin_part = c(1.0, 0.0) / denom;
        let q_part = dq * cos_part + sq * sin_part;
        let p_part = x0.p / c(0.5 * self.gamma, -delta_omega);
        ((p_part - q_part) * 0.5).re
    }
}

/// Maximum of `f` on `[a, b]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Composite Simpson rule, odd sample count.
pub fn simpson(step: f64, y: &[Complex64]) -> Complex64 {
    assert!(y.len() % 2 == 1 && y.len() >= 3);
    let n = y.len();
    let mut acc = y[0] + y[n - 1];
    for (i, v) in y.iter().enumerate().take(n - 1).skip(1) {
        acc += v * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (step / 3.0)
}

/// `φ(τ)` by Simpson's rule in `ν` on `[0, 8ν_c]`.
pub fn phi_reference(env: &PhononEnvironment, tau: f64, points: usize) -> Complex64 {
    let upper = 8.0 * env.nu_c;
    let h = upper / (points - 1) as f64;
    let beta = (env.temperature > 0.0).then(|| 1.0 / (0.1309 * env.temperature));
    let y: Vec<Complex64> = (0..points)
        .map(|i| {
            let nu = i as f64 * h;
            let bare = env.alpha * nu * (-(nu / env.nu_c).powi(2)).exp();
            let thermal = match beta {
                None => bare,
                Some(b) if nu == 0.0 => 2.0 * env.alpha / b,
                Some(b) => bare / (0.5 * b * nu).tanh(),
            };
            let (s, co) = (nu * tau).sin_cos();
            c(thermal * co, -bare * s)
        })
        .collect();
    simpson(h, &y)
}

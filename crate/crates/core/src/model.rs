//! Shared pipeline pieces: phonon treatment, grid settings and a driven
//! emitter with its steady state.

use crate::dynamics::{build_liouvillian, steady_state, DensityOperator, DriveConfig, Liouvillian, Propagator};
use crate::error::{Error, Result};
use crate::grid::{geometric_grid, linear_grid, merge_grids, uniform_grid};
use crate::phonon::{PhononBath, PhononGrid, PolaronQuantities};

/// How the phonon bath enters the emitted field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Treatment {
    /// Short-time phonon correlations `G(τ)` kept in full.
    #[default]
    NonMarkovian,
    /// Phonon correlations replaced by their long-time plateau.
    Markovian,
}

impl Treatment {
    pub fn from_flag(markovian: bool) -> Self {
        if markovian {
            Self::Markovian
        } else {
            Self::NonMarkovian
        }
    }

    pub fn is_markovian(self) -> bool {
        self == Self::Markovian
    }
}

pub const DEFAULT_OPTICAL_POINTS: usize = 2000;
pub const DEFAULT_HOM_POINTS: usize = 4000;
const OPTICAL_TAU_MIN: f64 = 1e-3;

/// Delay and frequency grid settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub phonon: PhononGrid,
    /// Upper optical delay in ps; `None` means `10/γ`.
    pub optical_tau_max: Option<f64>,
    pub optical_points: usize,
    pub hom_points: usize,
    pub freq_min: f64,
    pub freq_max: f64,
    pub freq_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            phonon: PhononGrid::default(),
            optical_tau_max: None,
            optical_points: DEFAULT_OPTICAL_POINTS,
            hom_points: DEFAULT_HOM_POINTS,
            freq_min: -12.0,
            freq_max: 12.0,
            freq_points: 4801,
        }
    }
}

impl GridConfig {
    pub fn optical_tau_max(&self, gamma: f64) -> f64 {
        self.optical_tau_max.unwrap_or(10.0 / gamma)
    }

    /// Phonon grid merged with a geometric grid reaching the optical scale.
    pub fn merged_grid(&self, gamma: f64) -> Result<Vec<f64>> {
        self.merged_to(self.optical_tau_max(gamma), self.optical_points)
    }

    /// Delay grid for HOM correlations, reaching `τ_opt + 5·fwhm`.
    pub fn hom_grid(&self, gamma: f64, fwhm: f64) -> Result<Vec<f64>> {
        self.merged_to(self.optical_tau_max(gamma) + 5.0 * fwhm, self.hom_points)
    }

    fn merged_to(&self, tau_max: f64, points: usize) -> Result<Vec<f64>> {
        let phonon = uniform_grid(self.phonon.step, self.phonon.tau_max)?;
        let optical = geometric_grid(OPTICAL_TAU_MIN, tau_max, points)?;
        Ok(merge_grids(&[&phonon, &optical]))
    }

    pub fn frequency_grid(&self) -> Result<Vec<f64>> {
        linear_grid(self.freq_min, self.freq_max, self.freq_points)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.optical_tau_max {
            if !(t > self.phonon.tau_max && t.is_finite()) {
                return Err(Error::Config(format!(
                    "optical_tau_max_ps {t} must exceed the phonon span {}",
                    self.phonon.tau_max
                )));
            }
        }
        if self.optical_points < 2 || self.hom_points < 2 {
            return Err(Error::Config("optical grids need at least two points".into()));
        }
        if !(self.freq_max > self.freq_min) || self.freq_points < 2 {
            return Err(Error::Config(
                "frequency grid needs freq_max > freq_min and ≥ 2 points".into(),
            ));
        }
        Ok(())
    }
}

/// A driven emitter in a given phonon bath with its steady state.
#[derive(Debug, Clone)]
pub struct Emitter<'a> {
    pub bath: &'a PhononBath,
    pub drive: DriveConfig,
    pub polaron: PolaronQuantities,
    pub liouvillian: Liouvillian,
    pub propagator: Propagator,
    pub rho_ss: DensityOperator,
}

impl<'a> Emitter<'a> {
    pub fn new(bath: &'a PhononBath, drive: DriveConfig) -> Result<Self> {
        let polaron = bath.rates(drive.omega)?;
        let liouvillian = build_liouvillian(&drive, &polaron)?;
        let rho_ss = steady_state(&liouvillian)?;
        let propagator = Propagator::new(&liouvillian)?;
        Ok(Self {
            bath,
            drive,
            polaron,
            liouvillian,
            propagator,
            rho_ss,
        })
    }
}

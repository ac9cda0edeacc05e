//! Polaron master-equation model of a resonantly driven two-level emitter
//! coupled to a super-ohmic phonon bath: emission spectra, coherent
//! scattering fractions and Hong–Ou–Mandel correlations.
//!
//! Units: ħ = 1, time in ps, frequency in ps⁻¹, temperature in K.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod emission;
pub mod error;
pub mod grid;
pub mod hom;
pub mod model;
pub mod numerics;
pub mod output;
pub mod phonon;
pub mod series;

pub use error::{Error, Result};

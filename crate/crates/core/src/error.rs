use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimated error {estimate:e} after {intervals} subintervals")]
    Quadrature { estimate: f64, intervals: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// The generator could not be diagonalized to the required accuracy.
    /// Callers fall back to dense matrix exponentials.
    #[error("Liouvillian is defective or ill-conditioned (reconstruction error {reconstruction:e})")]
    Defective { reconstruction: f64 },

    #[error("grid spacing {spacing} ps too coarse for detector FWHM {fwhm} ps")]
    Resolution { spacing: f64, fwhm: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("configuration error at line {line}, key `{key}`: {message}")]
    ConfigKey { key: String, line: usize, message: String },

    #[error("no unique steady state: {0}")]
    NoUniqueSteadyState(String),

    #[error("coherent fraction undefined: steady-state population is {population:e}")]
    UndefinedFraction { population: f64 },

    #[error("HOM correlation undefined: normalization {denominator:e} below threshold")]
    UndefinedCorrelation { denominator: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

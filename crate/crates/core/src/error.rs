use alloc::string::String;

/// Errors raised by the computational routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point outside the admissible region: {0}")]
    OutsideDomain(String),
    #[error("evaluation too close to a pole: {0}")]
    NearPole(String),
    #[error("quadrature did not reach the requested accuracy (estimated error 2^{0:.1})")]
    QuadratureNotConverged(f64),
    #[error("tail bound exceeds the requested accuracy: {0}")]
    TailTooLarge(String),
    #[error("independent computations disagree: {0}")]
    Mismatch(String),
    #[error("series truncations are incompatible: {0}")]
    Truncation(String),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Failure classes shared by every analysis. The CLI maps them onto its
/// exit-code contract.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (bad site index, parse failure, ...).
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical precondition of the requested analysis does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A search or enumeration bound would be exceeded.
    #[error("refused: {0}")]
    Bound(String),
    /// Evaluation requested at a point outside the domain of the reduction.
    #[error("λ = {point} is a pole of the reduction (factor {factor})")]
    Pole { point: String, factor: String },
    /// A floating-point construction missed its residual tolerance.
    #[error("numerical quality: {what} residual {residual:e} exceeds tolerance {tolerance:e}")]
    Numerical {
        what: String,
        residual: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

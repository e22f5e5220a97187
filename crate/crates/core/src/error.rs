use thiserror::Error;

/// Errors raised by the library. Verdict failures are not errors; they are
/// reported through `pass` flags on reports and certificates.
#[derive(Debug, Error)]
pub enum AdvError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("infeasible by construction: {0}")]
    Infeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, AdvError>;

use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field definition: {0}")]
    FieldDefinition(String),
    #[error("sign refinement exceeded {0} bisection steps")]
    SignDepthExceeded(usize),
    #[error("validation: {0}")]
    Validation(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("point is outside C^d_Delta: {0}")]
    OutsideDomain(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("parse: {0}")]
    Parse(String),
    #[error("internal consistency: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldDefinition(_) => "field_definition",
            Error::SignDepthExceeded(_) => "sign_depth_exceeded",
            Error::Validation(_) => "validation",
            Error::Precondition(_) => "precondition",
            Error::OutsideDomain(_) => "outside_domain",
            Error::Domain(_) => "domain",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by the exact engine, the copula lab and the CLI layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable u_{index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("polynomial still depends on u_{index}, which precedes u_{target} in the integration order")]
    NotIntegrated { index: usize, target: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("dimension {d} exceeds the cap of {cap} for {what}")]
    DimensionCap { d: usize, cap: usize, what: &'static str },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("malformed model: {0}")]
    Model(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

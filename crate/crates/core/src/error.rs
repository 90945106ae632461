use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Physical or numerical configuration is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested axial index is outside the trusted band of the truncated basis.
    #[error("index {index} outside trusted band (max {max_trusted}) of a dim-{dim} truncation")]
    Truncation {
        index: usize,
        max_trusted: usize,
        dim: usize,
    },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("cannot parse {input:?} as a rational number")]
    ParseRational { input: String },
}

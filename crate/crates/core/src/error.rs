use thiserror::Error;

/// Errors raised while building or solving a spin-chain scenario.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A connected block of the rate matrix has more than one stationary vector.
    #[error("degenerate steady state: null space of dimension {dimension} in component {component:?}")]
    Degenerate {
        dimension: usize,
        component: Vec<usize>,
    },

    #[error("closed-form radical chain left an imaginary residue of {residue:e}")]
    RadicalBranch { residue: f64 },

    #[error("eigenvalue matching failed: {0}")]
    IndexMatch(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

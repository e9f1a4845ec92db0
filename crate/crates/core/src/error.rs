use thiserror::Error;

use crate::grid::Representation;
use crate::weyl::ParseError;

pub type Result<T, E = QpbError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QpbError {
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("representation error: expected {expected:?}, found {found:?}")]
    Representation {
        expected: Representation,
        found: Representation,
    },

    #[error("boundary contamination: boundary measure {measure:.3e} exceeds {limit:.1e}")]
    BoundaryContamination { measure: f64, limit: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("phase undefined: zero magnitude at index {index} inside the window")]
    PhaseUndefined { index: usize },

    #[error("index {index} out of range (allowed 0..={max})")]
    Range { index: usize, max: usize },

    #[error("resource bound exceeded: {what} = {value}, bound {bound}")]
    ResourceBound {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("operator registers cannot be mixed in one expression")]
    MixedRegister,

    #[error(transparent)]
    Parse(#[from] ParseError),
}

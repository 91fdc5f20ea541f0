//! Crate error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {value} ({requirement})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("lattice point has {got} coordinates, kernel dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("enumeration budget exhausted after {classes} classes while {context}")]
    BudgetExhausted { classes: u64, context: String },

    #[error("brute-force cap exceeded: {0}")]
    CapExceeded(String),

    #[error("position {position} exceeds the {enumerated} enumerated eigenvalues")]
    PositionBeyondEnumeration { position: u128, enumerated: u128 },

    #[error("{quantity} is below the smallest positive normal f64; query is beyond float range")]
    BeyondFloatRange { quantity: &'static str },

    #[error("integer overflow in {0}; value exceeds the configured width")]
    Overflow(&'static str),

    #[error("sample path is not conjugate-symmetric; evaluation would not be real")]
    NonRealEvaluation,
}

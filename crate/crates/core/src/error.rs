use thiserror::Error;

/// Errors raised while building representations, operators and states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra parameters: {0}")]
    InvalidSpec(String),

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("no unitary lowest-weight representation: c - g(h0+{n}) = {gap:.6e} < 0")]
    UnitarityViolation { n: usize, gap: f64 },

    #[error("canonical conjugate undefined on a finite-dimensional representation")]
    CompactRep,

    #[error("degenerate denominator c - g(h0+{n}-1) = {value:.3e}")]
    DegenerateDenominator { n: usize, value: f64 },

    #[error("truncation too coarse: tail mass {tail_mass:.3e} exceeds ceiling {ceiling:.3e}")]
    Truncation { tail_mass: f64, ceiling: f64 },

    #[error("matrix exponential out of range (1-norm {norm:.3e})")]
    Overflow { norm: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no lowest weight of dimension {dim} found: {reason}")]
    NoFiniteWeight { dim: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

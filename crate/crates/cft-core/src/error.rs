//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CftError {
    /// A numeric input was NaN, infinite, or outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// tau must lie in the open upper half-plane.
    #[error("tau = {0} is not in the upper half-plane")]
    TauNotInUpperHalfPlane(num_complex::Complex64),

    /// A series or lattice sum could not reach the requested tolerance.
    #[error("sum did not converge: {0}")]
    Unconverged(String),

    /// The requested truncation order is too small for the quantity to be
    /// represented at all.
    #[error("truncation order too small: {0}")]
    TruncationTooSmall(String),

    /// A mode cutoff is too small for the requested operator block.
    #[error("cutoff too small: {0}")]
    InsufficientCutoff(String),

    /// Degenerate parameter where a closed form has a pole or 0/0.
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    /// Labels outside the Kac table, non-coprime (P, Q), and similar.
    #[error("invalid label: {0}")]
    InvalidLabel(String),

    /// A selection rule makes the requested correlator identically zero in a
    /// way the caller asked to be told about (charge non-neutrality, odd
    /// fermion number, ghost-number violation).
    #[error("selection rule violated: {0}")]
    SelectionRule(String),
}

pub type Result<T> = std::result::Result<T, CftError>;

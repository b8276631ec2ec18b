use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{ColumnLabel, Int, IntMatrix};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },

    #[error("coordinate sequences have mismatched lengths")]
    LengthMismatch,

    #[error("genus must be positive")]
    ZeroGenus,

    #[error("index {index} out of range for genus {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("generator indices must be distinct, both are {0}")]
    RepeatedIndex(usize),

    #[error("reflection vector has self-pairing {0}, expected -2")]
    BadReflection(Int),

    #[error("descent precondition violated: pivot {pivot} must be odd, coefficient {coefficient} even and nonzero")]
    DescentPrecondition { pivot: Int, coefficient: Int },

    #[error("matrix is not an isometry of the hyperbolic form")]
    NotIsometry,

    #[error("matrix is not congruent to the identity mod 2")]
    NotCongruent,

    #[error("mod-2 matrix does not preserve the quadratic form q0")]
    NotInOrthogonalGroup,

    #[error("mod-2 element lies outside the subgroup generated by orthogonal transvections")]
    NotGeneratedByTransvections,

    #[error("transvection parameter has q0 = 0, no (-2)-lift exists")]
    EvenTransvection,

    #[error("invalid orthogonal basis: {0}")]
    Basis(#[from] BasisError),

    /// A coefficient that the reduction expects to vanish did not. Carries
    /// the working matrix at the moment of failure.
    #[error("reduction invariant failed at index {index} ({stage}):\n{state}")]
    ResidualNonzero {
        stage: &'static str,
        index: usize,
        state: Box<IntMatrix>,
    },

    #[error("word length limit of {0} generators exceeded")]
    WordTooLong(usize),

    #[error("descent measure did not decrease at index {index} ({stage})")]
    MeasureNotDecreasing { stage: &'static str, index: usize },
}

/// One entry of the Gram matrix that differs from the standard form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramViolation {
    pub left: ColumnLabel,
    pub right: ColumnLabel,
    pub expected: Int,
    pub found: Int,
}

impl fmt::Display for GramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairing({}, {}) = {}, expected {}",
            self.left, self.right, self.found, self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisError {
    NotSquare { rows: usize, cols: usize },
    OddDimension(usize),
    Empty,
    GramViolations(Vec<GramViolation>),
    /// Gram conditions hold but the determinant is not +-1. Cannot happen for
    /// a correct implementation; reported separately from Gram violations.
    DeterminantInconsistent,
    Overflow,
}

impl fmt::Display for BasisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            BasisError::OddDimension(d) => write!(f, "dimension {d} is odd"),
            BasisError::Empty => write!(f, "matrix is empty"),
            BasisError::GramViolations(v) => {
                write!(f, "{} Gram violation(s)", v.len())?;
                for violation in v {
                    write!(f, "; {violation}")?;
                }
                Ok(())
            }
            BasisError::DeterminantInconsistent => {
                write!(f, "internal inconsistency: Gram conditions hold but |det| != 1")
            }
            BasisError::Overflow => write!(f, "integer overflow while checking Gram conditions"),
        }
    }
}

impl core::error::Error for BasisError {}

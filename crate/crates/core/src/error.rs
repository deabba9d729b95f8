use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures reported by the numerical and witness routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A pivot fell below the rank tolerance, or an eigenvalue sits at zero.
    SingularMatrix,
    /// The QR iteration exhausted its sweep budget.
    ConvergenceFailure { iterations: usize },
    /// Two interpolation nodes share an abscissa.
    DuplicateNode { index: usize },
    /// Operand dimensions do not line up.
    ShapeMismatch { expected: String, found: String },
    /// No admissible `m`-th root branch exists for these eigenvalues.
    BranchConflict { eigenvalues: Vec<Scalar> },
    /// A witness failed the check that the algorithm relies on.
    PreconditionFailed { residual: f64, threshold: f64 },
    /// A sign-split tuple has nonzero off-diagonal blocks.
    NotBlockDiagonal { index: usize, residual: f64 },
    /// The symmetry tags of two maps disagree, or a tag does not hold.
    SymmetryTagMismatch { detail: String },
    /// A derived map is not selfadjoint with respect to the forms.
    SelfadjointViolation { residual: f64, threshold: f64 },
    /// The generator could not produce an instance within its retry budget.
    GenerationFailed { detail: String },
    /// An argument is outside the supported domain.
    InvalidArgument { detail: String },
    /// Real arithmetic was requested for data with imaginary parts.
    NotReal,
    /// NaN or infinity would have escaped an operation.
    NonFinite,
    /// A constructed result misses its own postcondition.
    ResidualTooLarge { residual: f64, threshold: f64 },
}

impl Error {
    pub(crate) fn shape(expected: impl fmt::Display, found: impl fmt::Display) -> Self {
        Error::ShapeMismatch {
            expected: alloc::format!("{expected}"),
            found: alloc::format!("{found}"),
        }
    }

    pub(crate) fn invalid(detail: impl fmt::Display) -> Self {
        Error::InvalidArgument {
            detail: alloc::format!("{detail}"),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularMatrix => write!(f, "matrix is singular at the rank tolerance"),
            Error::ConvergenceFailure { iterations } => {
                write!(f, "QR iteration did not converge after {iterations} sweeps")
            }
            Error::DuplicateNode { index } => {
                write!(f, "interpolation node {index} repeats an earlier abscissa")
            }
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
            Error::BranchConflict { eigenvalues } => {
                write!(f, "no admissible root branch for eigenvalues [")?;
                for (i, z) in eigenvalues.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
                write!(f, "]")
            }
            Error::PreconditionFailed {
                residual,
                threshold,
            } => write!(
                f,
                "witness precondition failed: residual {residual:e} exceeds {threshold:e}"
            ),
            Error::NotBlockDiagonal { index, residual } => write!(
                f,
                "tuple entry {index} is not block diagonal (off-block residual {residual:e})"
            ),
            Error::SymmetryTagMismatch { detail } => write!(f, "symmetry tag mismatch: {detail}"),
            Error::SelfadjointViolation {
                residual,
                threshold,
            } => write!(
                f,
                "selfadjoint relation violated: residual {residual:e} exceeds {threshold:e}"
            ),
            Error::GenerationFailed { detail } => write!(f, "instance generation failed: {detail}"),
            Error::InvalidArgument { detail } => write!(f, "invalid argument: {detail}"),
            Error::NotReal => write!(f, "real mode requires real data"),
            Error::NonFinite => write!(f, "non-finite value encountered"),
            Error::ResidualTooLarge {
                residual,
                threshold,
            } => write!(
                f,
                "result residual {residual:e} exceeds {threshold:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}

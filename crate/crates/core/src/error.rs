use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },
    #[error("set is unbounded")]
    Unbounded,
    #[error("fibers of the family are not uniformly bounded")]
    UnboundedFibers,
    #[error("summation does not converge: {0}")]
    Convergence(String),
    #[error("rational function cannot be expanded with the given grading: {0}")]
    NotExpandable(String),
    #[error("term grade {grade} exceeds target grade {target}")]
    GradeExceeds { grade: usize, target: usize },
    #[error("oracle budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("rank {rank} is not supported (need {min} <= n <= {max})")]
    InvalidRank { rank: usize, min: usize, max: usize },
    #[error("invalid torus element: {0}")]
    InvalidElement(String),
    #[error("root index {index} is out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("cannot combine objects of rank {0} and rank {1}")]
    RankMismatch(usize, usize),
    #[error("the tuple is empty")]
    EmptyTuple,
    #[error("every element of the tuple is central")]
    AllCentral,
    #[error("element {0} of the tuple is central")]
    CentralElement(usize),
    #[error("the tuple needs at least two elements, got {0}")]
    TupleTooShort(usize),
    #[error("matrix is not skew-symmetric (residual {0:e})")]
    NotSkew(f64),
    #[error("matrix is not special orthogonal (residual {0:e})")]
    NotSpecialOrthogonal(f64),
    #[error("matrix has shape {rows}x{cols}, expected a square matrix of odd size")]
    BadShape { rows: usize, cols: usize },
    #[error("element cannot be reduced: {0}")]
    NotReducible(&'static str),
    #[error("the tuple is eligible, no forced eigenvalue exists")]
    TupleEligible,
    #[error("the tuple is ineligible")]
    TupleIneligible,
    #[error("could not find a torus element separating all root values")]
    SpectralSeparation,
    #[error("eigenvalue iteration did not converge")]
    EigenSolve,
    #[error("root plane {0} is not contained in the last element's Omega set")]
    OmegaNotContained(String),
    #[error("tuple mixes families or ranks")]
    FamilyMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

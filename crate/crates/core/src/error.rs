use thiserror::Error;

pub type Result<T> = std::result::Result<T, PcmError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcmError {
    #[error("matrix shape is invalid: {0}")]
    BadShape(String),
    #[error("entry ({row}, {col}) is not strictly positive")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("entries ({row}, {col}) and ({col}, {row}) are not reciprocal")]
    ReciprocityViolation { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight vector entry {0} is not strictly positive")]
    NonPositiveWeight(usize),
    #[error("index subset is empty")]
    EmptySubset,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("source set {0:?} has an incoming edge; it does not witness inefficiency")]
    InvalidWitness(Vec<usize>),
    #[error(
        "subvector obtained by deleting index {0} is not efficient for the principal submatrix"
    )]
    SubvectorNotEfficient(usize),
    #[error("no two equal entries in the tail of the weight vector")]
    NoEqualTailPair,
    #[error("leading subvector is not efficient for the perturbed block")]
    HeadNotEfficient,
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("eigenvector tail entries are not equal")]
    StructureViolation,
    #[error("entry (1,3) of the block is below 1; normalize first")]
    NotNormalized,
    #[error("theorem violated (implementation bug): {0}")]
    TheoremViolation(String),
    #[error("grid has {0} candidates, above the limit")]
    GridTooLarge(u64),
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

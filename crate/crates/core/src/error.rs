use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitian { defect: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} times but {right} matrices")]
    LengthMismatch { left: usize, right: usize },
    #[error("entry buffer has {found} elements, shape requires {expected}")]
    BadShape { expected: usize, found: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("eigenvalue list is invalid: {0}")]
    InvalidList(&'static str),
    #[error("eigenvalue list is not normalized (sum {sum})")]
    NotNormalized { sum: f64 },
    #[error("truncation to {max_terms} terms would drop a nonzero product")]
    TruncationLoss { max_terms: usize },
    #[error("generator kernel has dimension {dim}, expected 1")]
    DegenerateKernel { dim: usize },
    #[error("map is not completely positive (min Choi eigenvalue {min_eig:.3e})")]
    NotCp { min_eig: f64 },
    #[error("map is not unital (defect {defect:.3e})")]
    NotUnital { defect: f64 },
    #[error("times must be nondecreasing")]
    NotSorted,
    #[error("times must be nonnegative integers")]
    NotInteger,
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("word enumeration needs {needed} words, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operator is not an orthogonal projection")]
    NotProjection,
    #[error("adjacent entries of a free word must differ")]
    AdjacentRepeat,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("kernel is not conditionally positive definite (min reduced eigenvalue {min_eig:.3e})")]
    NotCondPd { min_eig: f64 },
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("invalid correlation parameters: {0}")]
    BadCorrelation(&'static str),
    #[error("correlation is undefined at t = 0")]
    AtZero,
    #[error("invalid grid: {0}")]
    BadGrid(&'static str),
    #[error("intervals overlap or are unbounded")]
    OverlappingIntervals,
    #[error("measures have different atom sets ({left} vs {right})")]
    AtomMismatch { left: usize, right: usize },
    #[error("Gram matrix is not positive definite")]
    SingularGram,
    #[error("sum map is not injective (smallest singular value {sigma_min:.3e})")]
    SumMapSingular { sigma_min: f64 },
    #[error("iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;

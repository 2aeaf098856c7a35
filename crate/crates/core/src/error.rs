use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} outside the supported range 2 < p < 2^31")]
    OutOfRange(u64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("right-hand side lies outside the column space")]
    InconsistentSystem,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot evaluate the Veronese map at the zero vector")]
    ZeroPoint,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("determinant entries do not have consistent degrees")]
    InhomogeneousDeterminant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointSetError {
    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),
    #[error("points {0} and {1} are projectively equal")]
    Duplicate(usize, usize),
    #[error("point {index} has {got} coordinates, expected {expected}")]
    Arity {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("point sets live over different fields or ambient spaces")]
    Incompatible,
    #[error("cb_check needs at least two points")]
    TooFewPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("bad split {0:?}: parts must be non-increasing, positive and sum to the degree (d >= 3)")]
    BadSplit((u32, u32, u32)),
    #[error("decomposition is redundant for T: {0}")]
    RedundancyDetected(String),
    #[error("form is not concise: h_A(1) = {h1}, expected {expected}")]
    NotConcise { h1: usize, expected: usize },
    #[error("criterion requires {0}")]
    NotApplicable(String),
    #[error("lambda has {got} entries for {expected} points")]
    LambdaLength { got: usize, expected: usize },
}

/// Which of the three admissibility tests failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PreconditionTest {
    /// rank of the degree-8 evaluation matrix is 14 and every lambda is nonzero
    NonRedundant,
    /// h_A(4) = 14
    FourthHilbert,
    /// k_3(A) = 10
    ThirdKruskal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OcticError {
    #[error("instance shape: {0}")]
    Shape(String),
    #[error("precondition {test:?} failed (computed {value})")]
    PreconditionFailed { test: PreconditionTest, value: usize },
    #[error("degree-4 ideal piece has dimension {0}, expected 1")]
    QuarticNotUnique(usize),
    #[error("syzygy module in degree 6 has dimension {0}, expected 4")]
    SyzygyDimension(usize),
    #[error("degree-5 ideal piece has dimension {0}, expected 7")]
    QuinticDimension(usize),
    #[error("the 4x4 linear minor of the Hilbert-Burch matrix vanishes")]
    MinorDegenerate,
    #[error("all cubic cofactors of the residual matrix vanish")]
    DegenerateCofactors,
    #[error("normalization matrix has rank {0} < 12")]
    NormalizationRank(usize),
    #[error("paper13 column selection reached rank {0} < 44 after all retries")]
    SelectionFailed(usize),
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("witness parameter vector must be nonzero with 12 entries")]
    ZeroWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("gave up after {0} attempts")]
    GenerationExhausted(usize),
    #[error("annihilator has dimension {0}, expected 1")]
    AnnihilatorDimension(usize),
    #[error("P^2 scan over p = {prime} exceeds the budget p <= {limit}")]
    ScanBudgetExceeded { prime: u64, limit: u64 },
    #[error(transparent)]
    Octic(#[from] OcticError),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("modulus {0} is not an odd prime below 2^31")]
    NotPrime(u64),
    #[error("elements belong to different fields or algebras")]
    ParentMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("structure constants are not associative: (b{i} b{j}) b{k} != b{i} (b{j} b{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("the algebra has no two-sided identity")]
    NoIdentity,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("algebra is not commutative: b{i} b{j} != b{j} b{i}")]
    NotCommutative { i: usize, j: usize },
    #[error("radical of a dimension {dim} algebra over F_{p} could not be certified (p <= dim)")]
    UnsupportedCharacteristic { p: u64, dim: usize },
    #[error("algebra is not semisimple: radical has dimension {}", radical.len())]
    NotSemisimple { radical: Vec<Vec<u64>> },
    #[error("no idempotent split found after {0} random attempts")]
    SplitIterationCapExceeded(usize),
    #[error("equivalence witness could not be solved: {0}")]
    WitnessSolveFailed(String),
    #[error("central idempotent check failed: {0}")]
    CentralityViolation(String),
    #[error("matrix unit relation failed: {0}")]
    MatrixUnitViolation(String),
    #[error("block entry does not lie in the corner algebra: {0}")]
    EntryOutsideCorner(String),
    #[error("assembled block map is not bijective")]
    NonBijective,
    #[error("invalid Cayley table: {0}")]
    InvalidCayley(String),
    #[error("defining polynomial is reducible over F_{0}")]
    ReduciblePolynomial(u64),
    #[error("direct summands have different moduli")]
    ModulusMismatch,
    #[error("could not sample an invertible matrix after {0} draws")]
    InternalSamplingFailure(usize),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

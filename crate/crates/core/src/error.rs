use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero argument where a nonzero scalar is required")]
    ZeroArgument,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("magnitude {0} exceeds the factorization bound")]
    FactorizationBound(String),

    #[error("cover relation contains a cycle through {0}")]
    CycleDetected(String),
    #[error("duplicate element label {0}")]
    DuplicateLabel(String),
    #[error("unknown element label {0}")]
    UnknownLabel(String),
    #[error("instance too large: {0}")]
    SizeLimit(String),
    #[error("no lambda-decomposition exists for the given map")]
    NoDecomposition,

    #[error("operands live over different posets or fields")]
    ContextMismatch,
    #[error("not a unit: diagonal vanishes at {0}")]
    NotAUnit(String),
    #[error("{0} and {1} are not comparable")]
    NotComparable(String, String),

    #[error("not an (anti-)automorphism: {0}")]
    NotAMorphism(String),
    #[error("map does not preserve the unity")]
    NotUnital,
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("not a derivation: {0}")]
    NotADerivation(String),
    #[error("derivation split failed: {0}")]
    SplitFailed(String),
    #[error("element is not a central unit")]
    NotCentral,

    #[error("map is not involutive on basis element {0}")]
    NotInvolutive(String),
    #[error("sign must satisfy k^2 = 1")]
    BadSign,
    #[error("characteristic 2 is not supported by the classification")]
    Char2Unsupported,
    #[error("poset is not connected")]
    NotConnected,
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("upper-right block of the map is nonzero")]
    UpperRightNonzero,
    #[error("lambda has fixed points")]
    FixedPointsPresent,
    #[error("epsilon takes the value zero at {0}")]
    ZeroEpsilon(String),
    #[error("element is not symmetric under the base involution")]
    NotSymmetric,
    #[error("diagonal entries are not squares at {}", .0.join(","))]
    NotASquare(Vec<String>),
    #[error("class count is infinite over this field")]
    InfiniteClassCount,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

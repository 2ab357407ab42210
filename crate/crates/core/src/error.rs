use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("a Lie frame needs {expected} vectors, found {found}")]
    FrameSize { expected: usize, found: usize },

    #[error("basis is rank deficient: rank {rank} for {dim} vectors")]
    DegenerateBasis { rank: usize, dim: usize },

    #[error("expected a unit vector, norm is {0}")]
    NotUnit(f64),

    #[error("vector is not on the Lie quadric (relative defect {0:e})")]
    OffQuadric(f64),

    #[error("zero vector has no projective class")]
    ZeroVector,

    #[error("not a line on the quadric: {0}")]
    NotALine(String),

    #[error("projective pair (0, 0) is not a point")]
    ZeroPair,

    #[error("matrix is not in O(n+1,2) (defect {0:e})")]
    NotLieTransform(f64),

    #[error("invalid patch data at {at:?}: {reason}")]
    InvalidPatch { at: Vec<f64>, reason: String },

    #[error("first fundamental form is degenerate at {0:?}")]
    DegenerateMetric(Vec<f64>),

    #[error("shape operator is not self-adjoint (defect {0:e})")]
    NotSelfAdjoint(f64),

    #[error("sample carries no derivative data")]
    MissingDerivatives,

    #[error("curvature values are not pairwise distinct")]
    RepeatedValues,

    #[error("curvature branch matching failed at {0:?}")]
    BranchMatching(Vec<f64>),

    #[error("tube radius {eps} reaches a focal point at {at:?}")]
    FocalRadius { eps: f64, at: Vec<f64> },

    #[error("profile point {0:?} lies on the axis with a normal tangent to it")]
    DegenerateRevolution(Vec<f64>),

    #[error("expected {expected} distinct curvatures, found {found}")]
    CurvatureCount { expected: usize, found: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("corpus file: {0}")]
    Corpus(String),
}

pub type Result<T> = std::result::Result<T, Error>;

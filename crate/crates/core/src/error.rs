use alloc::string::String;

use crate::rational::Rational;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("vertex masses sum to {0}, expected 1")]
    MassSumNotOne(Rational),
    #[error("vertex {vertex} has non-positive mass {mass}")]
    ZeroMass { vertex: usize, mass: Rational },
    #[error("weight {value} at ({row}, {col}) lies outside [0, 1]")]
    WeightOutOfRange { row: usize, col: usize, value: Rational },
    #[error("weights at ({row}, {col}) and ({col}, {row}) differ")]
    AsymmetricWeights { row: usize, col: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is not simple: edge ({u}, {v}) has multiplicity {multiplicity}")]
    NotSimple { u: usize, v: usize, multiplicity: u32 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {index} out of range for {bound} vertices")]
    VertexOutOfRange { index: usize, bound: usize },
    #[error("edge ({0}, {1}) has multiplicity zero")]
    ZeroMultiplicity(usize, usize),

    #[error("bad generator index: {0}")]
    BadGeneratorIndex(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("vertex {0} carries two labels of the same kind")]
    LabelCollision(usize),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),

    #[error("tree decomposition is not a tree: {0}")]
    NotATree(String),
    #[error("bags containing vertex {0} are empty or disconnected")]
    VertexBagsDisconnected(usize),
    #[error("edge ({0}, {1}) is not covered by any bag")]
    EdgeNotCovered(usize, usize),
    #[error("nice tree decomposition invariant violated: {0}")]
    NotNice(String),
    #[error("decomposition width {width} exceeds k - 1 = {limit}")]
    WidthExceedsK { width: usize, limit: usize },

    #[error("bi-labeled graph has {0} output labels where none are allowed")]
    HasOutputs(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("graph mode requires a 0/1 step graphon with uniform masses and empty diagonal")]
    ModeViolation,
    #[error("coloring has not stabilized")]
    NotStabilized,
}

pub type Result<T> = core::result::Result<T, Error>;

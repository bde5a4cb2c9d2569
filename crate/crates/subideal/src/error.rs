use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),
    #[error("order ideal of generator {0} is empty, index undefined")]
    EmptyOrderIdeal(usize),
    #[error("representation is identically zero")]
    ZeroRepresentation,
    #[error("point {0} has a coordinate outside [-1,1] (enable auto-scaling to rescale)")]
    PointOutOfRange(usize),
    #[error("invalid thresholds: epsilon > tau > 0 required")]
    InvalidThresholds,
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("generator {0} is the zero polynomial")]
    ZeroGenerator(usize),
    #[error("generator {0} is not 1-norm unitary (enable generator normalization)")]
    NotUnitary(usize),
    #[error("degree cap {0} exceeded, input is inconsistent or an internal invariant broke")]
    DegreeCap(usize),
    #[error("inconsistent prebasis: {0}")]
    InconsistentPrebasis(String),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

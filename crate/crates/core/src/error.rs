use thiserror::Error;

/// Errors raised by the algebra, geometry and groupoid layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("objects live on different patches ({0} vs {1})")]
    PatchMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no generic solution")]
    Inconsistent,
    #[error("exterior derivative of a {0}-form exceeds the supported degree")]
    DegreeTooHigh(usize),
    #[error("interior product of a 0-form")]
    DegreeZero,
    #[error("supplied inverse does not invert the map: {0}")]
    NotInverse(String),
    #[error("spanning set is rank deficient (rank {found} < {expected})")]
    RankDeficient { expected: usize, found: usize },
    #[error("frame is not Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("patch has the wrong shape: {0}")]
    WrongShape(String),
    #[error("not a Lie algebroid: {0}")]
    NotAlgebroid(String),
    #[error("structure functions are not antisymmetric: {0}")]
    NotAntisymmetric(String),
    #[error("rank {0} exceeds the supported bound of 4")]
    RankTooLarge(usize),
    #[error("generic rank jumps: {0}")]
    RankJump(String),
    #[error("anchor of K is not tangent to F_M: {0}")]
    AnchorNotTangent(String),
    #[error("subspace is not an ideal: {0}")]
    NotIdeal(String),
    #[error("not a Lie algebra: {0}")]
    NotLie(String),
    #[error("composable-pair chart is inconsistent: {0}")]
    ChartMismatch(String),
    #[error("translation maps cannot be derived: {0}")]
    TranslationNotDerivable(String),
    #[error("elements are not composable: {0}")]
    NotComposable(String),
    #[error("composition is underdetermined on this chart: {0}")]
    UnderdeterminedSpan(String),
    #[error("groupoid is not a group (base has dimension {0})")]
    NotAGroup(usize),
    #[error("structure is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("sections are not m-related: {0}")]
    HypothesisFails(String),
    #[error("result is not polynomial: {0}")]
    NotPolynomial(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

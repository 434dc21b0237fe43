use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("pole at ξ = {re}{im:+}i")]
    PoleAtPoint { re: f64, im: f64 },
    #[error("dimension {n} is too small (need at least 2)")]
    DimensionTooSmall { n: usize },
    #[error("vector is identically zero")]
    ZeroVector,
    #[error("entry {index} of the holomorphic input depends on ξ̄")]
    NotHolomorphic { index: usize },
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("tower truncates early: level {level} vanishes identically")]
    TowerDegenerate { level: usize },
    #[error("expected exact polynomial division failed (relative remainder {remainder:e})")]
    InexactDivision { remainder: f64 },
    #[error("rank {r} out of range 1..{n}")]
    RankOutOfRange { r: usize, n: usize },
    #[error("projector trace {found} does not match chart rank {expected}")]
    RankMismatch { expected: usize, found: f64 },
    #[error("matrix is not idempotent (residual {residual:e})")]
    NotIdempotent { residual: f64 },
    #[error("first row is inconsistent with a rank-1 projector: {0}")]
    InconsistentRow(String),
    #[error("leading entry P11 vanishes, the first-row chart does not apply")]
    ZeroLeadingEntry,
    #[error("leading entry Q11 equals 1, the first-row chart does not apply")]
    LeadingEntryOne,
    #[error("reduced relations need the middle projector of an odd-dimensional Veronese tower")]
    NotReducedCase,
    #[error("contour passes through a pole near ξ = {re}{im:+}i")]
    PoleOnContour { re: f64, im: f64 },
    #[error("contour needs at least two vertices")]
    EmptyContour,
    #[error("metric component vanishes identically")]
    DegenerateMetric,
    #[error("weights are all zero")]
    ZeroComposition,
}

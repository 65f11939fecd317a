use thiserror::Error;

use crate::setring::FiniteSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty universe")]
    EmptyUniverse,

    #[error("universe of size {0} exceeds the 64-point limit")]
    UniverseTooLarge(usize),

    #[error("point {point} is outside the universe of size {universe}")]
    PointOutOfRange { point: usize, universe: usize },

    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },

    #[error("enumeration bound exceeded: universe size {0} > 4")]
    EnumerationBound(usize),

    #[error("not a ring: {0}")]
    NotARing(String),

    #[error("set outside ring: {0}")]
    SetOutsideRing(FiniteSet),

    #[error("value dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty family")]
    EmptyFamily,

    #[error("not directed: {0} and {1} have no common bound in the family")]
    NotDirected(String, String),

    #[error("negative component {0} is outside the positive cone")]
    NegativeComponent(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("non-measurable level set {set} at level {level}")]
    NonMeasurable { level: String, set: FiniteSet },

    #[error("p.g.p. fails at level {level}: sets {a} and {b} are null but their union is not")]
    PgpFails {
        level: usize,
        a: FiniteSet,
        b: FiniteSet,
    },

    #[error("no covering set in R_sigma for {0}")]
    NoCover(FiniteSet),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("null-completion property violated for {0}")]
    NullCompletionViolated(FiniteSet),

    #[error("depth cap: {0} > 60")]
    DepthCap(u32),

    #[error("extension requires finite model")]
    RequiresFiniteModel,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

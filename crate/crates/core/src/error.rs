use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by design construction, parsing and the construction pipeline.
///
/// Axiom failures are never reported here: they show up as defects in a
/// [`VerificationReport`](crate::design::VerificationReport).
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} out of range for v={v}")]
    PointOutOfRange { point: usize, v: usize },
    #[error("block {block:?} repeats a point")]
    RepeatedPoint { block: Vec<usize> },
    #[error("groups do not partition the point set: {0}")]
    NotAPartition(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported field order q={0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(usize),
    #[error("geometry too large: {pairs} point pairs exceeds the budget of {budget}")]
    TooLarge { pairs: usize, budget: usize },
    #[error("truncation leaves a pair block {0:?}")]
    PairBlock(Vec<usize>),
    #[error("master block {block:?} has exactly two points of positive weight; would create pair structure")]
    WouldCreatePair { block: Vec<usize> },
    #[error("no ingredient GDD of type {group_type} with K={k}: {reason}")]
    MissingIngredient { group_type: String, k: String, reason: String },
    #[error("no filler design for group size {0}")]
    MissingFiller(usize),
    #[error("filler for group size {size} is invalid: {reason}")]
    BadFiller { size: usize, reason: String },
    #[error("improper flat: closure of block {block:?} with point {point} is the whole design")]
    ImproperFlat { block: Vec<usize>, point: usize },
    #[error("unknown recipe {0:?}")]
    UnknownRecipe(String),
    #[error("recipe {recipe} is not buildable in-repo ({reason})")]
    NotBuildable { recipe: String, reason: String },
    #[error("recipe {recipe} failed at stage {stage}: {detail}")]
    Pipeline { recipe: String, stage: String, detail: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

use thiserror::Error;

use crate::words::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid letter {0:?} (expected a-z or A-Z)")]
    InvalidLetter(char),

    #[error("word {word} uses a generator outside rank {rank}")]
    LetterOutOfRank { word: Word, rank: usize },

    #[error("relators must be nonempty")]
    EmptyRelator,

    #[error("genus {0} out of bounds (1..=16)")]
    GenusOutOfBounds(usize),

    #[error("budget limits must all be positive")]
    MalformedBudget,

    #[error("radius {radius} above the configured cap {cap}")]
    RadiusAboveCap { radius: usize, cap: usize },

    #[error("word {0} does not resolve to a vertex of the ball")]
    NotInBall(Word),

    #[error("word {0} is not in the subgroup")]
    NotInSubgroup(Word),

    #[error("pattern must be a nonempty word")]
    EmptyPattern,

    #[error("cochain arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("cochain complex mismatch: {0}")]
    ComplexMismatch(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("unknown region {0:?}")]
    UnknownRegion(String),

    #[error("invalid region model: {0}")]
    InvalidModel(String),

    #[error("invalid homomorphism spec: {0}")]
    InvalidHom(String),

    #[error("invalid case spec: {0}")]
    InvalidCase(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

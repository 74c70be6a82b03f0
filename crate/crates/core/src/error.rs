use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Cayley-Dickson level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("unsupported Cayley-Dickson level {0} (expected 0..=3)")]
    UnsupportedLevel(u32),

    #[error("not a cubic form: {0}")]
    NotCubic(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("form vanishes at the base point")]
    VanishesAtBasePoint,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no point off the hypersurface after {attempts} attempts; enlarge the sample box")]
    SamplingExhausted { attempts: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("zero vector where a nonzero point is required")]
    ZeroVector,

    #[error("invariant violated: {0}")]
    Finding(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension n={n} out of range (expected {min}..={max})")]
    DimensionOutOfRange { n: u32, min: u32, max: u32 },

    #[error("edge probability {p} outside [0, 1]")]
    ProbabilityOutOfRange { p: f64 },

    #[error("vertex {v} out of range for n={n}")]
    VertexOutOfRange { v: u64, n: u32 },

    #[error("({v}, {w}) is not an edge of the cube")]
    NotACubeEdge { v: u64, w: u64 },

    #[error("duplicate edge ({v}, {w})")]
    DuplicateEdge { v: u64, w: u64 },

    #[error("edge ({v}, {w}) must be listed with v < w")]
    NonCanonicalEdge { v: u64, w: u64 },

    #[error("vector length {got} does not match operator dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dense solver limited to n <= {max}, got n={n}")]
    DenseTooLarge { n: u32, max: u32 },

    #[error("edge ({v}, {w}) has both endpoints on the same side of the bipartition")]
    SameSideEdge { v: u64, w: u64 },

    #[error("mask array is not symmetric at vertex {v}, direction {dir}")]
    AsymmetricMasks { v: u64, dir: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }
}

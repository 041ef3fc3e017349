use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the sharing, hiding and recovery pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Inverse of zero requested in GF(2^8).
    #[error("zero has no multiplicative inverse in GF(2^8)")]
    ZeroInverse,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("image of {height}x{width} cannot be tiled by {block}x{block} blocks")]
    Dimension {
        height: usize,
        width: usize,
        block: usize,
    },

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error("payload needs {needed} bits but only {available} are available")]
    Capacity { needed: usize, available: usize },

    /// Compressed side information does not fit in the embeddable stream.
    #[error("cannot vacate room: side information and code need {needed} bits, stream holds {available}")]
    Vacating { needed: usize, available: usize },

    #[error("side information field overflow: {0}")]
    Encode(String),

    #[error("arithmetic decoding failed: {0}")]
    Decode(String),

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("corrupted shares: {0}")]
    Corruption(String),

    #[error("recovery failed: {0}")]
    Recovery(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Capacity,
    Recovery,
    Other,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroInverse
            | Error::InvalidArgument(_)
            | Error::Params(_)
            | Error::Dimension { .. } => ErrorKind::Usage,
            Error::Capacity { .. } | Error::Vacating { .. } | Error::Encode(_) => {
                ErrorKind::Capacity
            }
            Error::Decode(_) | Error::Extraction(_) | Error::Corruption(_) | Error::Recovery(_) => {
                ErrorKind::Recovery
            }
            Error::Pgm(_) | Error::Io(_) => ErrorKind::Other,
        }
    }
}

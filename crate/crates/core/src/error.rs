//! Crate-wide error type.

use std::io;
use std::path::PathBuf;

/// Errors raised by the simulator and analysis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("replay file {path}: {source}")]
    ReplayOpen { path: PathBuf, source: io::Error },

    #[error("replay file {0} holds no 16-bit samples")]
    ReplayEmpty(PathBuf),

    #[error("synthetic noise sigma must be finite and >= 0, got {0}")]
    InvalidSigma(f64),

    #[error("short read: a word needs 4 bytes, got {0}")]
    ShortRead(usize),

    #[error("framing error: {0}")]
    Framing(&'static str),

    #[error("line {line}: {text:?} is not a 32-bit hex word")]
    BadHexWord { line: usize, text: String },

    #[error("bitmap {width}x{height} needs {needed} samples, got {got}")]
    InsufficientSamples {
        width: usize,
        height: usize,
        needed: usize,
        got: usize,
    },

    #[error("statistic needs at least one word")]
    EmptyInput,

    #[error("byte chi-square needs at least 256 bytes, got {0}")]
    InsufficientBytes(usize),

    #[error("bad checkpoint line {0:?}")]
    BadCheckpoint(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

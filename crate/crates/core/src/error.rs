use std::io;

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no ATOM/HETATM records found")]
    NoAtoms,
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("invalid PDB id {0:?} (expected a digit followed by three alphanumerics)")]
    InvalidId(String),
    #[error("network unavailable while fetching {id}: {reason}")]
    NetworkUnavailable { id: String, reason: String },
    #[error("structure {0} not found on the remote repository")]
    NotFound(String),
    #[error("selection matched no atoms")]
    EmptySelection,
    #[error("point cloud is in the wrong coordinate frame (expected {expected})")]
    WrongFrame { expected: &'static str },
    #[error("unsupported structuring element size {size} for shape {shape}")]
    UnsupportedSize { shape: &'static str, size: usize },
    #[error("grid dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("grid has no set pixels")]
    EmptyGrid,
    #[error("box size {0} is not a power of two within the grid side")]
    InvalidBoxSize(usize),
    #[error("regression needs at least 3 scales, got {0}")]
    TooFewScales(usize),
    #[error("signatures were computed with different parameters")]
    ParamsMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid image data: {0}")]
    InvalidImage(String),
    #[error("cannot read {path}: {source}")]
    ReadInput { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

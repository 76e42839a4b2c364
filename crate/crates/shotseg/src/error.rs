//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    // --- stream / file ingestion ---
    #[error("not a YUV4MPEG2 stream: missing signature")]
    MissingSignature,

    #[error("unknown YUV4MPEG2 header parameter {0:?}")]
    UnknownHeaderParameter(String),

    #[error("missing required YUV4MPEG2 header parameter {0}")]
    MissingHeaderParameter(&'static str),

    #[error("invalid YUV4MPEG2 header value in {0:?}")]
    InvalidHeaderValue(String),

    #[error("unsupported chroma mode {0:?}")]
    UnsupportedChroma(String),

    #[error("malformed FRAME marker {0:?}")]
    MalformedFrameMarker(String),

    #[error("truncated frame payload: wanted {wanted} bytes, got {got}")]
    TruncatedFrame { wanted: usize, got: usize },

    #[error("unsupported bit depth in {path}: expected 8-bit gray or RGB")]
    UnsupportedBitDepth { path: PathBuf },

    #[error("cannot read input {path}: {source}")]
    UnreadableInput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("no frames found in {0}")]
    NoFrames(PathBuf),

    #[error("input has {got} frames but at least {need} are required")]
    TooFewFrames { got: usize, need: usize },

    // --- numerics ---
    #[error("gray level count {0} out of range [2, 256]")]
    InvalidGrayLevels(usize),

    #[error("no co-occurring pairs in grid for the requested offset")]
    NoCooccurringPairs,

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    EigenNonConvergence(usize),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("k-means needs at least k={k} points, got {n}")]
    TooFewPoints { n: usize, k: usize },

    #[error("cluster count {k} out of range [{min}, {max}]")]
    InvalidClusterCount { k: usize, min: usize, max: usize },

    #[error("class samples have mismatched dimensions: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("discriminant class has no samples")]
    EmptyClass,

    #[error("merge guard exceeded: more than {0} merges without reaching a fixpoint")]
    MergeGuardExceeded(usize),

    // --- configuration and evaluation ---
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid ground truth: {0}")]
    InvalidGroundTruth(String),

    #[error("total_frames mismatch: detected file says {detected}, truth file says {truth}")]
    TotalFramesMismatch { detected: usize, truth: usize },

    #[error("synthesis spec lists no shots")]
    EmptySynthSpec,

    // --- passthrough ---
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("image decode failed: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;

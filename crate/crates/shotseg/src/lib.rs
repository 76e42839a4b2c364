//! Shot boundary detection from block texture signatures.
//!
//! The pipeline compresses every video frame into a small
//! texture-based descriptor and segments the frame sequence into shots:
//!
//! 1. [`ingest`]: decode Y4M streams or image sequences into 256x256
//!    grayscale frames and tile each one into 64 blocks of 32x32.
//! 2. [`texture`]: per block, quantize to a few gray levels, build
//!    co-occurrence matrices in four directions, and reduce them to the
//!    fourteen Haralick statistics.
//! 3. [`frame_repr`]: spectrally cluster the 64 block vectors and keep
//!    one mean vector per cluster - the frame's k x 14 representative
//!    matrix.
//! 4. [`segmenter`]: split-and-merge over the representative-matrix
//!    sequence, driven by the two-directional Fisher criterion from
//!    [`fld`].
//! 5. [`eval`]: score detected transitions against ground truth.
//!
//! [`pipeline::detect_shots`] wires the stages together; [`synth`]
//! generates ground-truthed test corpora. The `shotseg` binary exposes
//! all of it as `detect`, `features`, `eval`, and `synth` subcommands,
//! and the crate's `examples/` directory walks through each capability.

pub mod config;
pub mod error;
pub mod eval;
pub mod fld;
pub mod frame_repr;
pub mod ingest;
pub mod linalg;
pub mod pipeline;
pub mod segmenter;
pub mod synth;
pub mod texture;

pub use config::Config;
pub use error::{Error, Result};

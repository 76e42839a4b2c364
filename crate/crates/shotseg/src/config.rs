//! Pipeline configuration.
//!
//! Precedence when assembling the effective configuration is
//! command-line flags > config file > built-in defaults. The file layer
//! is handled by [`Config::from_json_file`]; flag overrides are applied
//! on top by the CLI front end.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::texture::Orientation;

/// Frames are resized to this square edge before feature extraction.
pub const FRAME_EDGE: usize = 256;
/// Edge length of one texture block; 64 blocks tile a frame.
pub const BLOCK_EDGE: usize = 32;
/// Blocks per frame (row-major 8x8 tiling).
pub const BLOCKS_PER_FRAME: usize = (FRAME_EDGE / BLOCK_EDGE) * (FRAME_EDGE / BLOCK_EDGE);

/// Tunable knobs for the whole pipeline.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Number of region clusters per frame (rows of the representative matrix).
    pub k: usize,
    /// Number of quantized gray levels for co-occurrence counting.
    pub graylevels: usize,
    /// Co-occurrence offset distance.
    pub distance: usize,
    /// Offset orientations; texture features are averaged across them.
    pub orientations: Vec<Orientation>,
    /// Minimum emitted segment length in frames.
    pub min_seg_len: usize,
    /// Base seed; per-frame work derives its own seed as `seed ^ frame_index`.
    pub seed: u64,
    /// Boundary matching tolerance in frames for evaluation.
    pub tolerance: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            k: 6,
            graylevels: 8,
            distance: 1,
            orientations: Orientation::all().to_vec(),
            min_seg_len: 2,
            seed: 42,
            tolerance: 5,
        }
    }
}

impl Config {
    /// Load a config file (JSON object with any subset of the fields).
    pub fn from_json_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::UnreadableInput {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: Config = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=BLOCKS_PER_FRAME).contains(&self.k) {
            return Err(Error::InvalidClusterCount {
                k: self.k,
                min: 2,
                max: BLOCKS_PER_FRAME,
            });
        }
        if !(2..=256).contains(&self.graylevels) {
            return Err(Error::InvalidGrayLevels(self.graylevels));
        }
        if self.distance == 0 || self.distance >= BLOCK_EDGE {
            return Err(Error::InvalidConfig(format!(
                "distance {} out of range [1, {})",
                self.distance,
                BLOCK_EDGE
            )));
        }
        if self.orientations.is_empty() {
            return Err(Error::InvalidConfig("empty orientation set".into()));
        }
        if self.min_seg_len < 1 {
            return Err(Error::InvalidConfig("min_seg_len must be >= 1".into()));
        }
        Ok(())
    }

    /// Seed for the given frame's clustering work, independent of
    /// processing order.
    pub fn frame_seed(&self, frame_index: usize) -> u64 {
        self.seed ^ frame_index as u64
    }
}

//! Synthetic ground-truthed test corpora.
//!
//! A corpus spec is a list of shots, each with a length and a texture
//! generator. The generators are chosen to have well-separated Haralick
//! signatures: flat fields, checkerboards, seeded noise, and a ramp.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::FRAME_EDGE;
use crate::error::{Error, Result};
use crate::eval::GroundTruth;
use crate::ingest::Y4mWriter;

/// Per-shot texture generator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TextureKind {
    /// Every pixel the same value.
    Constant { value: u8 },
    /// 0/255 squares with the given edge length in pixels.
    Checkerboard { period: usize },
    /// Per-frame uniform noise; deterministic in (seed, frame index).
    Noise { seed: u64 },
    /// Horizontal luminance ramp.
    Gradient,
}

impl TextureKind {
    /// Render one 256x256 luma plane. `frame_index` is the global frame
    /// number, which keeps noise frames distinct but reproducible.
    pub fn render(&self, frame_index: usize) -> Vec<u8> {
        let n = FRAME_EDGE * FRAME_EDGE;
        match *self {
            TextureKind::Constant { value } => vec![value; n],
            TextureKind::Checkerboard { period } => {
                let period = period.max(1);
                let mut out = vec![0u8; n];
                for r in 0..FRAME_EDGE {
                    for c in 0..FRAME_EDGE {
                        if (r / period + c / period) % 2 == 0 {
                            out[r * FRAME_EDGE + c] = 255;
                        }
                    }
                }
                out
            }
            TextureKind::Noise { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(frame_index as u64);
                (0..n).map(|_| rng.gen::<u8>()).collect()
            }
            TextureKind::Gradient => {
                let mut out = vec![0u8; n];
                for r in 0..FRAME_EDGE {
                    for c in 0..FRAME_EDGE {
                        out[r * FRAME_EDGE + c] = c as u8;
                    }
                }
                out
            }
        }
    }
}

/// One shot of a synthetic video.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShotSpec {
    pub length: usize,
    pub texture: TextureKind,
}

/// A whole synthetic video.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SynthSpec {
    pub shots: Vec<ShotSpec>,
}

impl SynthSpec {
    pub fn from_json_file(path: &Path) -> Result<SynthSpec> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::UnreadableInput {
            path: path.to_path_buf(),
            source,
        })?;
        let spec: SynthSpec = serde_json::from_str(&text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots.is_empty() || self.shots.iter().all(|s| s.length == 0) {
            return Err(Error::EmptySynthSpec);
        }
        Ok(())
    }

    pub fn total_frames(&self) -> usize {
        self.shots.iter().map(|s| s.length).sum()
    }

    /// Ground truth implied by the shot list: a transition at the start
    /// of every shot but the first.
    pub fn ground_truth(&self) -> GroundTruth {
        let mut transitions = Vec::new();
        let mut t = 0usize;
        for (i, shot) in self.shots.iter().enumerate() {
            if i > 0 && shot.length > 0 {
                transitions.push(t);
            }
            t += shot.length;
        }
        GroundTruth {
            total_frames: t,
            transitions,
        }
    }

    /// Render every frame's raw 256x256 luma plane in order.
    pub fn render_frames(&self) -> Vec<Vec<u8>> {
        let mut frames = Vec::with_capacity(self.total_frames());
        let mut index = 0usize;
        for shot in &self.shots {
            for _ in 0..shot.length {
                frames.push(shot.texture.render(index));
                index += 1;
            }
        }
        frames
    }
}

/// Write the spec as a monochrome Y4M stream plus its ground truth.
pub fn write_corpus(spec: &SynthSpec, video: impl Write, truth: impl Write) -> Result<()> {
    spec.validate()?;
    let mut writer = Y4mWriter::new_mono(video, FRAME_EDGE, FRAME_EDGE, (25, 1))?;
    for plane in spec.render_frames() {
        writer.write_frame(&plane)?;
    }
    writer.finish()?;
    serde_json::to_writer_pretty(truth, &spec.ground_truth())?;
    Ok(())
}

/// The standard three-shot corpus used by examples and tests:
/// 50 flat frames, 50 checkerboard frames, 50 noise frames.
pub fn three_shot_spec() -> SynthSpec {
    SynthSpec {
        shots: vec![
            ShotSpec {
                length: 50,
                texture: TextureKind::Constant { value: 32 },
            },
            ShotSpec {
                length: 50,
                texture: TextureKind::Checkerboard { period: 8 },
            },
            ShotSpec {
                length: 50,
                texture: TextureKind::Noise { seed: 7 },
            },
        ],
    }
}

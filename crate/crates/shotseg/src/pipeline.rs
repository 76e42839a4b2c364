//! The end-to-end detection pipeline: frames -> representative
//! matrices -> split-and-merge segmentation.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::frame_repr::{frame_representative, RepresentativeMatrix};
use crate::ingest::GrayFrame;
use crate::segmenter::{segment_rms, Segment, Segmentation};

/// Wall-clock time spent per stage.
#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    pub decode: Duration,
    pub features: Duration,
    pub segmentation: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.decode + self.features + self.segmentation
    }
}

impl std::fmt::Display for StageTimings {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "decode {:.1?}, features {:.1?}, segmentation {:.1?}, total {:.1?}",
            self.decode,
            self.features,
            self.segmentation,
            self.total()
        )
    }
}

/// Detection result plus everything needed to report it.
#[derive(Debug, Clone)]
pub struct Detection {
    pub segmentation: Segmentation,
    pub rms: Vec<RepresentativeMatrix>,
    pub timings: StageTimings,
}

/// The output JSON schema of a detection run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DetectionOutput {
    pub total_frames: usize,
    pub shots: Vec<Segment>,
    pub transitions: Vec<usize>,
}

impl From<&Detection> for DetectionOutput {
    fn from(det: &Detection) -> DetectionOutput {
        DetectionOutput {
            total_frames: det.segmentation.total_frames,
            shots: det.segmentation.segments.clone(),
            transitions: det.segmentation.transitions(),
        }
    }
}

/// Per-frame signatures, computed in parallel. Frame order in the
/// output follows the input regardless of scheduling, and each frame's
/// seed is derived from its index, so the result is independent of the
/// worker count.
pub fn compute_rms(frames: &[GrayFrame], cfg: &Config) -> Result<Vec<RepresentativeMatrix>> {
    frames
        .par_iter()
        .map(|frame| frame_representative(frame, cfg))
        .collect()
}

/// Run feature extraction and segmentation on decoded frames.
pub fn detect_shots(frames: &[GrayFrame], cfg: &Config) -> Result<Detection> {
    cfg.validate()?;

    let t0 = Instant::now();
    let rms = compute_rms(frames, cfg)?;
    let features = t0.elapsed();

    let t1 = Instant::now();
    let matrices: Vec<_> = rms.iter().map(|r| r.rm.clone()).collect();
    let segmentation = segment_rms(&matrices, cfg)?;
    let segmentation_time = t1.elapsed();

    Ok(Detection {
        segmentation,
        rms,
        timings: StageTimings {
            decode: Duration::ZERO,
            features,
            segmentation: segmentation_time,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FRAME_EDGE;
    use crate::synth::{three_shot_spec, SynthSpec, ShotSpec, TextureKind};

    fn frames_of(spec: &SynthSpec) -> Vec<GrayFrame> {
        spec.render_frames()
            .into_iter()
            .enumerate()
            .map(|(i, p)| GrayFrame::new(i, p))
            .collect()
    }

    #[test]
    fn constant_video_one_shot() {
        let spec = SynthSpec {
            shots: vec![ShotSpec {
                length: 20,
                texture: TextureKind::Constant { value: 64 },
            }],
        };
        let det = detect_shots(&frames_of(&spec), &Config::default()).unwrap();
        assert_eq!(det.segmentation.segments.len(), 1);
        assert!(det.segmentation.transitions().is_empty());
    }

    #[test]
    fn three_shot_video_two_transitions() {
        let det = detect_shots(&frames_of(&three_shot_spec()), &Config::default()).unwrap();
        let tr = det.segmentation.transitions();
        assert_eq!(tr.len(), 2, "transitions {tr:?}");
        assert!(tr[0].abs_diff(50) <= 2, "first transition at {}", tr[0]);
        assert!(tr[1].abs_diff(100) <= 2, "second transition at {}", tr[1]);
    }

    #[test]
    fn detection_is_deterministic() {
        let frames = frames_of(&three_shot_spec());
        let cfg = Config::default();
        let a = detect_shots(&frames, &cfg).unwrap();
        let b = detect_shots(&frames, &cfg).unwrap();
        assert_eq!(a.segmentation, b.segmentation);
        for (x, y) in a.rms.iter().zip(b.rms.iter()) {
            assert_eq!(x.rm, y.rm);
        }
    }

    #[test]
    fn output_schema_shape() {
        let spec = SynthSpec {
            shots: vec![ShotSpec {
                length: 10,
                texture: TextureKind::Noise { seed: 3 },
            }],
        };
        let det = detect_shots(&frames_of(&spec), &Config::default()).unwrap();
        let out = DetectionOutput::from(&det);
        let json = serde_json::to_string(&out).unwrap();
        let back: DetectionOutput = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out);
        assert_eq!(back.total_frames, 10);
        assert_eq!(back.shots[0].start, 0);
        assert_eq!(back.shots[0].end, 10);
    }

    #[test]
    fn gradient_frame_sanity() {
        // The ramp must survive the identity resize.
        let spec = SynthSpec {
            shots: vec![ShotSpec {
                length: 1,
                texture: TextureKind::Gradient,
            }],
        };
        let frames = frames_of(&spec);
        assert_eq!(frames[0].get(0, 0), 0);
        assert_eq!(frames[0].get(0, 255), 255);
        assert_eq!(frames[0].get(100, 128), 128);
        assert_eq!(frames[0].pixels().len(), FRAME_EDGE * FRAME_EDGE);
    }
}

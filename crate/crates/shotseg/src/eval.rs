//! Scoring detected transitions against ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Manually annotated transitions for one video.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroundTruth {
    pub total_frames: usize,
    pub transitions: Vec<usize>,
}

impl GroundTruth {
    pub fn validate(&self) -> Result<()> {
        for w in self.transitions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidGroundTruth(format!(
                    "transitions must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &t in &self.transitions {
            if t == 0 || t >= self.total_frames {
                return Err(Error::InvalidGroundTruth(format!(
                    "transition {t} outside (0, {})",
                    self.total_frames
                )));
            }
        }
        Ok(())
    }
}

/// Match counts plus the derived percentage scores. Percentages keep
/// full precision; rounding to two decimals happens only on display.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalReport {
    /// Correctly detected transitions.
    pub d: usize,
    /// Missed transitions.
    pub md: usize,
    /// False alarms.
    pub fa: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl std::fmt::Display for EvalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>10} {:>6} {:>6} {:>10} {:>8} {:>10}", "D", "MD", "FA", "Precision", "Recall", "F-measure")?;
        write!(
            f,
            "{:>10} {:>6} {:>6} {:>9.2}% {:>7.2}% {:>9.2}%",
            self.d, self.md, self.fa, self.precision, self.recall, self.f_measure
        )
    }
}

/// Greedy one-to-one boundary matching within a frame tolerance.
///
/// Walking the detected boundaries in increasing order, each one claims
/// the nearest still-unmatched truth boundary within `tolerance`
/// frames (ties prefer the earlier truth). Returns `(D, MD, FA)`.
pub fn match_boundaries(detected: &[usize], truth: &[usize], tolerance: usize) -> (usize, usize, usize) {
    debug_assert!(detected.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(truth.windows(2).all(|w| w[0] <= w[1]));

    let mut taken = vec![false; truth.len()];
    let mut d = 0usize;
    for &det in detected {
        let mut best: Option<(usize, usize)> = None; // (distance, index)
        for (i, &t) in truth.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let dist = det.abs_diff(t);
            if dist <= tolerance && best.map_or(true, |(bd, _)| dist < bd) {
                best = Some((dist, i));
            }
        }
        if let Some((_, i)) = best {
            taken[i] = true;
            d += 1;
        }
    }
    let md = truth.len() - d;
    let fa = detected.len() - d;
    (d, md, fa)
}

/// Precision, recall, and F-measure (as percentages) from the counts;
/// every 0/0 case is defined as 0.
pub fn score(d: usize, md: usize, fa: usize) -> EvalReport {
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            100.0 * num as f64 / den as f64
        }
    };
    let precision = ratio(d, d + fa);
    let recall = ratio(d, d + md);
    let f_measure = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    EvalReport {
        d,
        md,
        fa,
        precision,
        recall,
        f_measure,
    }
}

/// Match then score in one step.
pub fn evaluate(detected: &[usize], truth: &GroundTruth, tolerance: usize) -> Result<EvalReport> {
    truth.validate()?;
    let (d, md, fa) = match_boundaries(detected, &truth.transitions, tolerance);
    Ok(score(d, md, fa))
}

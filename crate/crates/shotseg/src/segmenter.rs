//! Split-and-merge segmentation of the representative-matrix sequence.
//!
//! Splitting recursively bisects a segment at the position maximizing
//! the discriminant criterion between the two halves, accepting the
//! split only when both children separate better from the segment's
//! neighbors than the segment itself did. Merging then rejoins adjacent
//! segments whenever the merged segment separates from the outer
//! neighbors at least as well as the parts did, repeated to a fixpoint.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::fld::{criterion_j_balanced, ClassSummary, EPS_ABS, EPS_REL};

/// Criterion differences below this margin count as ties.
///
/// With identical content on both sides the scatters are pure rounding
/// noise (J around 1e-16), while any genuine texture change moves J by
/// many orders of magnitude; comparing through this margin keeps the
/// strict-inequality split rule and the merge rule from reacting to
/// last-ulp noise.
pub const J_TIE_MARGIN: f64 = 1e-9;

/// Guard on the total number of merges before reporting a cycle.
pub const MAX_MERGES: usize = 1000;

/// A half-open frame range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

/// An ordered, contiguous, exhaustive partition of `[0, total_frames)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
    pub total_frames: usize,
}

impl Segmentation {
    /// Start frame of every segment except the first.
    pub fn transitions(&self) -> Vec<usize> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    fn assert_tiling(&self) {
        debug_assert!(!self.segments.is_empty());
        debug_assert_eq!(self.segments[0].start, 0);
        debug_assert_eq!(self.segments.last().unwrap().end, self.total_frames);
        for w in self.segments.windows(2) {
            debug_assert_eq!(w[0].end, w[1].start);
        }
    }
}

/// Prefix scatter summaries over the RM sequence; every segment's
/// class summary is one subtraction away.
pub struct ScatterIndex {
    prefix: Vec<ClassSummary>,
}

impl ScatterIndex {
    pub fn new(rms: &[Array2<f64>]) -> ScatterIndex {
        assert!(!rms.is_empty());
        let (k, d) = (rms[0].nrows(), rms[0].ncols());
        let mut prefix = Vec::with_capacity(rms.len() + 1);
        prefix.push(ClassSummary::zero(k, d));
        for rm in rms {
            assert_eq!((rm.nrows(), rm.ncols()), (k, d));
            let mut next = prefix.last().unwrap().clone();
            next.add_sample(rm.view());
            prefix.push(next);
        }
        ScatterIndex { prefix }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn summary(&self, seg: Segment) -> ClassSummary {
        debug_assert!(seg.start < seg.end && seg.end < self.prefix.len());
        self.prefix[seg.end].minus(&self.prefix[seg.start])
    }

    /// Criterion J between two frame ranges, in the length-balanced
    /// form used for split/merge comparisons.
    pub fn criterion(&self, a: Segment, b: Segment) -> f64 {
        let sa = self.summary(a);
        let sb = self.summary(b);
        criterion_j_balanced(&sa, &sb, EPS_REL, EPS_ABS)
            .expect("nonempty ranges with matching dimensions")
            .j
    }
}

fn meaningfully_greater(a: f64, b: f64) -> f64 {
    // Positive iff a exceeds b beyond the tie margin.
    a - b - J_TIE_MARGIN
}

/// The split position maximizing J between the two halves, or `None`
/// when the segment is too short to admit one. Ties break to the
/// smallest position.
pub fn best_split(seg: Segment, index: &ScatterIndex, min_seg_len: usize) -> Option<usize> {
    if seg.len() < 2 * min_seg_len {
        return None;
    }
    let lo = seg.start + min_seg_len;
    let hi = seg.end - min_seg_len;
    let mut best_p = lo;
    let mut best_j = f64::NEG_INFINITY;
    for p in lo..=hi {
        let j = index.criterion(
            Segment {
                start: seg.start,
                end: p,
            },
            Segment {
                start: p,
                end: seg.end,
            },
        );
        if j > best_j {
            best_j = j;
            best_p = p;
        }
    }
    Some(best_p)
}

/// Whether splitting `seg` at its best position improves the
/// separation from both neighbors; missing neighbors waive their
/// condition. Returns the accepted children.
pub fn try_split(
    seg: Segment,
    left: Option<Segment>,
    right: Option<Segment>,
    index: &ScatterIndex,
    min_seg_len: usize,
) -> Option<(Segment, Segment)> {
    let p = best_split(seg, index, min_seg_len)?;
    let s1 = Segment {
        start: seg.start,
        end: p,
    };
    let s2 = Segment {
        start: p,
        end: seg.end,
    };

    let left_ok = match left {
        None => true,
        Some(l) => meaningfully_greater(index.criterion(l, s1), index.criterion(l, seg)) > 0.0,
    };
    if !left_ok {
        return None;
    }
    let right_ok = match right {
        None => true,
        Some(r) => meaningfully_greater(index.criterion(s2, r), index.criterion(seg, r)) > 0.0,
    };
    if right_ok {
        Some((s1, s2))
    } else {
        None
    }
}

/// Recursive splitting pass, processed deterministically left to right.
pub fn split_phase(index: &ScatterIndex, cfg: &Config) -> Result<Segmentation> {
    let total = index.len();
    if total < cfg.min_seg_len {
        return Err(Error::TooFewFrames {
            got: total,
            need: cfg.min_seg_len,
        });
    }

    // Each entry carries a "final" mark; neighbors are always read from
    // the current state of the list.
    let mut segs: Vec<(Segment, bool)> = vec![(
        Segment {
            start: 0,
            end: total,
        },
        false,
    )];
    while let Some(i) = segs.iter().position(|(_, done)| !done) {
        let seg = segs[i].0;
        let left = (i > 0).then(|| segs[i - 1].0);
        let right = (i + 1 < segs.len()).then(|| segs[i + 1].0);
        match try_split(seg, left, right, index, cfg.min_seg_len) {
            Some((s1, s2)) => {
                segs.splice(i..=i, [(s1, false), (s2, false)]);
            }
            None => segs[i].1 = true,
        }
    }

    let out = Segmentation {
        segments: segs.into_iter().map(|(s, _)| s).collect(),
        total_frames: total,
    };
    out.assert_tiling();
    Ok(out)
}

/// Merge pass: repeated left-to-right sweeps until a sweep performs no
/// merge. After a merge the sweep backs up to the merged segment's
/// left neighbor so newly adjacent pairs are reconsidered immediately.
pub fn merge_phase(mut segmentation: Segmentation, index: &ScatterIndex) -> Result<Segmentation> {
    let segs = &mut segmentation.segments;
    let mut merges = 0usize;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < segs.len() {
            if should_merge(segs, i, index) {
                let merged = Segment {
                    start: segs[i].start,
                    end: segs[i + 1].end,
                };
                segs.splice(i..=i + 1, [merged]);
                merges += 1;
                if merges > MAX_MERGES {
                    return Err(Error::MergeGuardExceeded(MAX_MERGES));
                }
                changed = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    segmentation.assert_tiling();
    Ok(segmentation)
}

fn should_merge(segs: &[Segment], i: usize, index: &ScatterIndex) -> bool {
    let a = segs[i];
    let b = segs[i + 1];
    let merged = Segment {
        start: a.start,
        end: b.end,
    };
    let left_ok = match (i > 0).then(|| segs[i - 1]) {
        None => true,
        Some(l) => meaningfully_greater(index.criterion(l, a), index.criterion(l, merged)) <= 0.0,
    };
    if !left_ok {
        return false;
    }
    match segs.get(i + 2) {
        None => true,
        Some(&r) => meaningfully_greater(index.criterion(b, r), index.criterion(merged, r)) <= 0.0,
    }
}

/// Split then merge over a sequence of representative matrices.
pub fn segment_rms(rms: &[Array2<f64>], cfg: &Config) -> Result<Segmentation> {
    if rms.len() < cfg.min_seg_len {
        return Err(Error::TooFewFrames {
            got: rms.len(),
            need: cfg.min_seg_len,
        });
    }
    let index = ScatterIndex::new(rms);
    let split = split_phase(&index, cfg)?;
    merge_phase(split, &index)
}

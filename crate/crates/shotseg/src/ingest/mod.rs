//! Video input: Y4M streams and PGM/PNG image sequences, decoded into
//! a uniform run of 256x256 grayscale frames.
//!
//! Whatever the source, every frame ends up as a [`GrayFrame`]: the
//! luma plane resized to 256x256, ready to be tiled into 64 blocks of
//! 32x32 for texture analysis. Chroma is never used.

mod images;
mod y4m;

pub use images::load_image_sequence;
pub use y4m::{ChromaMode, StreamInfo, Y4mReader, Y4mWriter};

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::config::{BLOCK_EDGE, FRAME_EDGE};
use crate::error::{Error, Result};

/// One 256x256 grayscale frame with its position in the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    pub index: usize,
    /// Row-major luma values, exactly `FRAME_EDGE * FRAME_EDGE` of them.
    pixels: Vec<u8>,
}

impl GrayFrame {
    /// Wrap an already-sized pixel buffer.
    ///
    /// Panics if `pixels` is not exactly 256*256 long; callers produce
    /// the buffer via [`resize_bilinear`] which guarantees the size.
    pub fn new(index: usize, pixels: Vec<u8>) -> GrayFrame {
        assert_eq!(pixels.len(), FRAME_EDGE * FRAME_EDGE);
        GrayFrame { index, pixels }
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * FRAME_EDGE + col]
    }
}

/// A 32x32 tile of a frame, addressed by its (row, col) in the 8x8 grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub frame_index: usize,
    pub block_row: usize,
    pub block_col: usize,
    /// Row-major luma values, `BLOCK_EDGE * BLOCK_EDGE` of them.
    pub pixels: Vec<u8>,
}

/// Tile a frame into its 64 blocks, row-major.
///
/// Block `(i, j)` covers frame rows `32i..32i+32` and columns
/// `32j..32j+32`; the tiles are disjoint and cover the frame exactly.
pub fn partition_blocks(frame: &GrayFrame) -> Vec<Block> {
    let per_side = FRAME_EDGE / BLOCK_EDGE;
    let mut blocks = Vec::with_capacity(per_side * per_side);
    for bi in 0..per_side {
        for bj in 0..per_side {
            let mut pixels = Vec::with_capacity(BLOCK_EDGE * BLOCK_EDGE);
            for r in 0..BLOCK_EDGE {
                let row = bi * BLOCK_EDGE + r;
                let start = row * FRAME_EDGE + bj * BLOCK_EDGE;
                pixels.extend_from_slice(&frame.pixels[start..start + BLOCK_EDGE]);
            }
            blocks.push(Block {
                frame_index: frame.index,
                block_row: bi,
                block_col: bj,
                pixels,
            });
        }
    }
    blocks
}

/// Inverse of [`partition_blocks`]; used to check the tiling is exact.
pub fn reassemble_blocks(blocks: &[Block]) -> GrayFrame {
    assert_eq!(blocks.len(), (FRAME_EDGE / BLOCK_EDGE).pow(2));
    let mut pixels = vec![0u8; FRAME_EDGE * FRAME_EDGE];
    for b in blocks {
        for r in 0..BLOCK_EDGE {
            let row = b.block_row * BLOCK_EDGE + r;
            let start = row * FRAME_EDGE + b.block_col * BLOCK_EDGE;
            pixels[start..start + BLOCK_EDGE]
                .copy_from_slice(&b.pixels[r * BLOCK_EDGE..(r + 1) * BLOCK_EDGE]);
        }
    }
    GrayFrame::new(blocks[0].frame_index, pixels)
}

/// Resize an `h x w` grid to 256x256 with pixel-center-aligned bilinear
/// interpolation.
///
/// Source coordinates follow `src = (dst + 0.5) * size / 256 - 0.5`
/// with edge clamping; the blended value is rounded half away from
/// zero. A 256x256 input passes through bit-identically.
pub fn resize_bilinear(src: &[u8], h: usize, w: usize) -> Vec<u8> {
    assert!(h >= 1 && w >= 1, "source grid must be nonempty");
    assert_eq!(src.len(), h * w);

    let mut out = vec![0u8; FRAME_EDGE * FRAME_EDGE];

    // Precompute the per-axis sample positions once.
    let map_axis = |size: usize| -> Vec<(usize, usize, f64)> {
        (0..FRAME_EDGE)
            .map(|dst| {
                let s = (dst as f64 + 0.5) * size as f64 / FRAME_EDGE as f64 - 0.5;
                let i0 = s.floor();
                let t = s - i0;
                let lo = (i0.max(0.0) as usize).min(size - 1);
                let hi = ((i0 + 1.0).max(0.0) as usize).min(size - 1);
                (lo, hi, t)
            })
            .collect()
    };
    let rows = map_axis(h);
    let cols = map_axis(w);

    for (dr, &(r0, r1, tr)) in rows.iter().enumerate() {
        for (dc, &(c0, c1, tc)) in cols.iter().enumerate() {
            let v00 = src[r0 * w + c0] as f64;
            let v01 = src[r0 * w + c1] as f64;
            let v10 = src[r1 * w + c0] as f64;
            let v11 = src[r1 * w + c1] as f64;
            let top = v00 + (v01 - v00) * tc;
            let bot = v10 + (v11 - v10) * tc;
            let val = (top + (bot - top) * tr).round();
            out[dr * FRAME_EDGE + dc] = val.clamp(0.0, 255.0) as u8;
        }
    }
    out
}

/// ITU-R BT.601 luma with round-half-away-from-zero.
#[inline]
pub fn luma_bt601(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
    y.round().clamp(0.0, 255.0) as u8
}

/// Decode any supported input into frames: a `.y4m` file, a directory
/// of PGM/PNG images, a glob over images, or a single image.
pub fn load_frames(input: &Path) -> Result<Vec<GrayFrame>> {
    if input.is_dir() {
        return load_image_sequence(input);
    }
    let name = input.to_string_lossy();
    if name.contains('*') || name.contains('?') || name.contains('[') {
        return load_image_sequence(input);
    }
    let meta = std::fs::metadata(input).map_err(|source| Error::UnreadableInput {
        path: input.to_path_buf(),
        source,
    })?;
    if meta.len() == 0 {
        return Err(Error::NoFrames(input.to_path_buf()));
    }
    let is_y4m = input
        .extension()
        .map(|e| e.eq_ignore_ascii_case("y4m"))
        .unwrap_or(false);
    if is_y4m {
        let file = File::open(input).map_err(|source| Error::UnreadableInput {
            path: input.to_path_buf(),
            source,
        })?;
        let mut reader = Y4mReader::new(BufReader::new(file))?;
        let mut frames = Vec::new();
        while let Some(frame) = reader.next_frame()? {
            frames.push(frame);
        }
        if frames.is_empty() {
            return Err(Error::NoFrames(input.to_path_buf()));
        }
        Ok(frames)
    } else {
        load_image_sequence(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_frame() -> GrayFrame {
        let pixels: Vec<u8> = (0..FRAME_EDGE * FRAME_EDGE)
            .map(|i| ((i * 31 + i / 97) % 256) as u8)
            .collect();
        GrayFrame::new(5, pixels)
    }

    #[test]
    fn partition_yields_64_blocks() {
        let blocks = partition_blocks(&ramp_frame());
        assert_eq!(blocks.len(), 64);
        assert_eq!(blocks[0].block_row, 0);
        assert_eq!(blocks[0].block_col, 0);
        assert_eq!(blocks[63].block_row, 7);
        assert_eq!(blocks[63].block_col, 7);
    }

    #[test]
    fn corners_land_in_corner_blocks() {
        let frame = ramp_frame();
        let blocks = partition_blocks(&frame);
        assert_eq!(blocks[0].pixels[0], frame.get(0, 0));
        assert_eq!(blocks[63].pixels[BLOCK_EDGE * BLOCK_EDGE - 1], frame.get(255, 255));
    }

    #[test]
    fn reassembly_is_exact() {
        let frame = ramp_frame();
        let blocks = partition_blocks(&frame);
        assert_eq!(reassemble_blocks(&blocks), frame);
    }

    #[test]
    fn resize_identity_at_256() {
        let frame = ramp_frame();
        let out = resize_bilinear(frame.pixels(), FRAME_EDGE, FRAME_EDGE);
        assert_eq!(out, frame.pixels());
    }

    #[test]
    fn resize_1x1_replicates() {
        let out = resize_bilinear(&[37], 1, 1);
        assert!(out.iter().all(|&v| v == 37));
        assert_eq!(out.len(), FRAME_EDGE * FRAME_EDGE);
    }

    #[test]
    fn resize_2x2_vertical_stripe() {
        // Rows identical in the source, so every output row must match;
        // the mapping formula pins the first and last column exactly.
        let out = resize_bilinear(&[0, 255, 0, 255], 2, 2);
        let first_row = &out[..FRAME_EDGE];
        for r in 1..FRAME_EDGE {
            assert_eq!(&out[r * FRAME_EDGE..(r + 1) * FRAME_EDGE], first_row);
        }
        assert_eq!(first_row[0], 0);
        assert_eq!(first_row[255], 255);
    }

    #[test]
    fn luma_weights() {
        assert_eq!(luma_bt601(255, 255, 255), 255);
        assert_eq!(luma_bt601(0, 0, 0), 0);
        // 0.299 * 255 = 76.245, rounds to 76.
        assert_eq!(luma_bt601(255, 0, 0), 76);
        // 0.587 * 255 = 149.685 -> 150; 0.114 * 255 = 29.07 -> 29.
        assert_eq!(luma_bt601(0, 255, 0), 150);
        assert_eq!(luma_bt601(0, 0, 255), 29);
    }

    #[test]
    fn empty_file_reports_no_frames() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.y4m");
        std::fs::write(&path, b"").unwrap();
        assert!(matches!(load_frames(&path), Err(Error::NoFrames(_))));
    }
}

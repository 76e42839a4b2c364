//! PGM/PNG image-sequence input.

use std::path::{Path, PathBuf};

use image::DynamicImage;

use crate::error::{Error, Result};
use crate::ingest::{luma_bt601, resize_bilinear, GrayFrame};

const IMAGE_EXTENSIONS: [&str; 2] = ["pgm", "png"];

/// Load a temporally ordered frame sequence from images.
///
/// `input` may be a directory (all PGM/PNG files inside), a glob
/// pattern, or a single image file. Files sorted lexicographically
/// define temporal order. RGB inputs are converted with BT.601 weights;
/// everything is resized to 256x256.
pub fn load_image_sequence(input: &Path) -> Result<Vec<GrayFrame>> {
    let paths = collect_paths(input)?;
    if paths.is_empty() {
        return Err(Error::NoFrames(input.to_path_buf()));
    }
    let mut frames = Vec::with_capacity(paths.len());
    for (index, path) in paths.iter().enumerate() {
        frames.push(load_one(path, index)?);
    }
    Ok(frames)
}

fn collect_paths(input: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    if input.is_dir() {
        let entries = std::fs::read_dir(input).map_err(|source| Error::UnreadableInput {
            path: input.to_path_buf(),
            source,
        })?;
        for entry in entries {
            let path = entry?.path();
            let supported = path
                .extension()
                .map(|e| {
                    IMAGE_EXTENSIONS
                        .iter()
                        .any(|ok| e.eq_ignore_ascii_case(ok))
                })
                .unwrap_or(false);
            if path.is_file() && supported {
                paths.push(path);
            }
        }
    } else {
        let name = input.to_string_lossy();
        if name.contains('*') || name.contains('?') || name.contains('[') {
            for hit in glob::glob(&name).map_err(|e| Error::InvalidConfig(e.to_string()))? {
                let path = hit.map_err(|e| Error::UnreadableInput {
                    path: e.path().to_path_buf(),
                    source: e.into(),
                })?;
                if path.is_file() {
                    paths.push(path);
                }
            }
        } else {
            paths.push(input.to_path_buf());
        }
    }
    paths.sort();
    Ok(paths)
}

fn load_one(path: &Path, index: usize) -> Result<GrayFrame> {
    let img = image::open(path).map_err(|e| match e {
        image::ImageError::IoError(source) => Error::UnreadableInput {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Image(other),
    })?;

    let (w, h) = (img.width() as usize, img.height() as usize);
    let gray: Vec<u8> = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageLumaA8(buf) => buf.pixels().map(|p| p.0[0]).collect(),
        DynamicImage::ImageRgb8(buf) => buf
            .pixels()
            .map(|p| luma_bt601(p.0[0], p.0[1], p.0[2]))
            .collect(),
        DynamicImage::ImageRgba8(buf) => buf
            .pixels()
            .map(|p| luma_bt601(p.0[0], p.0[1], p.0[2]))
            .collect(),
        _ => {
            return Err(Error::UnsupportedBitDepth {
                path: path.to_path_buf(),
            })
        }
    };
    Ok(GrayFrame::new(index, resize_bilinear(&gray, h, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FRAME_EDGE;

    fn write_pgm(path: &Path, w: usize, h: usize, pixels: &[u8]) {
        let mut data = format!("P5\n{w} {h}\n255\n").into_bytes();
        data.extend_from_slice(pixels);
        std::fs::write(path, data).unwrap();
    }

    #[test]
    fn gray_pgm_256_passes_through() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f0.pgm");
        let pixels: Vec<u8> = (0..FRAME_EDGE * FRAME_EDGE).map(|i| (i % 251) as u8).collect();
        write_pgm(&path, FRAME_EDGE, FRAME_EDGE, &pixels);
        let frames = load_image_sequence(&path).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].pixels(), &pixels[..]);
    }

    #[test]
    fn directory_sorted_lexicographically() {
        let dir = tempfile::tempdir().unwrap();
        // Written out of order on purpose.
        for (name, fill) in [("b.pgm", 2u8), ("a.pgm", 1), ("c.pgm", 3)] {
            write_pgm(&dir.path().join(name), 4, 4, &[fill; 16]);
        }
        let frames = load_image_sequence(dir.path()).unwrap();
        let fills: Vec<u8> = frames.iter().map(|f| f.pixels()[0]).collect();
        assert_eq!(fills, vec![1, 2, 3]);
        assert_eq!(frames[2].index, 2);
    }

    #[test]
    fn rgb_png_converted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        let mut buf = image::RgbImage::new(8, 8);
        for p in buf.pixels_mut() {
            *p = image::Rgb([255, 0, 0]);
        }
        buf.save(&path).unwrap();
        let frames = load_image_sequence(&path).unwrap();
        assert!(frames[0].pixels().iter().all(|&v| v == 76));
    }

    #[test]
    fn sixteen_bit_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep.png");
        let buf = image::ImageBuffer::<image::Luma<u16>, _>::new(4, 4);
        buf.save(&path).unwrap();
        assert!(matches!(
            load_image_sequence(&path),
            Err(Error::UnsupportedBitDepth { .. })
        ));
    }

    #[test]
    fn missing_file_unreadable() {
        let err = load_image_sequence(Path::new("/nonexistent/x.pgm")).unwrap_err();
        assert!(matches!(err, Error::UnreadableInput { .. }));
    }

    #[test]
    fn glob_pattern_selects_subset() {
        let dir = tempfile::tempdir().unwrap();
        write_pgm(&dir.path().join("shot_000.pgm"), 4, 4, &[9; 16]);
        write_pgm(&dir.path().join("shot_001.pgm"), 4, 4, &[8; 16]);
        write_pgm(&dir.path().join("other.pgm"), 4, 4, &[7; 16]);
        let pattern = dir.path().join("shot_*.pgm");
        let frames = load_image_sequence(&pattern).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[0].pixels()[0], 9);
    }
}

//! Normalized gray-tone co-occurrence matrices with cached marginals.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::texture::Orientation;

/// Quantize luma values into `[0, gray_levels)` as
/// `level = floor(v * gray_levels / 256)`.
pub fn quantize(pixels: &[u8], gray_levels: usize) -> Result<Vec<u8>> {
    if !(2..=256).contains(&gray_levels) {
        return Err(Error::InvalidGrayLevels(gray_levels));
    }
    Ok(pixels
        .iter()
        .map(|&v| ((v as usize * gray_levels) / 256) as u8)
        .collect())
}

/// A normalized co-occurrence matrix for one offset, plus the marginal
/// distributions the Haralick statistics are built from.
#[derive(Debug, Clone)]
pub struct Glcm {
    /// Number of quantized gray levels (matrix is `n_g x n_g`).
    pub n_g: usize,
    /// Normalized joint distribution; symmetric, entries sum to 1.
    pub p: Array2<f64>,
    /// Raw number of contributing ordered pairs (the normalizer R).
    pub pair_count: u64,
    /// Row sums of `p`.
    pub p_x: Array1<f64>,
    /// Column sums of `p`; equals `p_x` for symmetric matrices.
    pub p_y: Array1<f64>,
    /// Distribution of `i + j`, indexed by `i + j` (length `2*n_g - 1`).
    pub p_sum: Array1<f64>,
    /// Distribution of `|i - j|`, indexed by `|i - j|` (length `n_g`).
    pub p_diff: Array1<f64>,
}

impl Glcm {
    /// Build from an already-normalized probability matrix. Used by
    /// tests and fixtures; the entries must sum to 1.
    pub fn from_probabilities(p: Array2<f64>) -> Result<Glcm> {
        let n_g = p.nrows();
        if p.ncols() != n_g || n_g == 0 {
            return Err(Error::InvalidConfig("GLCM must be square".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 || p.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidConfig(
                "GLCM probabilities must be nonnegative and sum to 1".into(),
            ));
        }
        Ok(Self::with_marginals(p, n_g, 0))
    }

    fn with_marginals(p: Array2<f64>, n_g: usize, pair_count: u64) -> Glcm {
        let mut p_x = Array1::<f64>::zeros(n_g);
        let mut p_y = Array1::<f64>::zeros(n_g);
        let mut p_sum = Array1::<f64>::zeros(2 * n_g - 1);
        let mut p_diff = Array1::<f64>::zeros(n_g);
        for i in 0..n_g {
            for j in 0..n_g {
                let v = p[[i, j]];
                p_x[i] += v;
                p_y[j] += v;
                p_sum[i + j] += v;
                p_diff[i.abs_diff(j)] += v;
            }
        }
        Glcm {
            n_g,
            p,
            pair_count,
            p_x,
            p_y,
            p_sum,
            p_diff,
        }
    }
}

/// Count level co-occurrences at the orientation's offset over a
/// `rows x cols` grid and normalize.
///
/// Accumulation is symmetric: each neighboring pair `(a, b)` increments
/// both `(a, b)` and `(b, a)`, so the matrix is symmetric by
/// construction. Errors only when the grid admits no pair at all.
pub fn compute_glcm(
    levels: &[u8],
    rows: usize,
    cols: usize,
    gray_levels: usize,
    orientation: Orientation,
    distance: usize,
) -> Result<Glcm> {
    assert_eq!(levels.len(), rows * cols);
    if !(2..=256).contains(&gray_levels) {
        return Err(Error::InvalidGrayLevels(gray_levels));
    }

    let (dr, dc) = orientation.offset();
    let dr = dr * distance as isize;
    let dc = dc * distance as isize;

    let mut counts = Array2::<u64>::zeros((gray_levels, gray_levels));
    let mut total: u64 = 0;
    for r in 0..rows as isize {
        for c in 0..cols as isize {
            let (nr, nc) = (r + dr, c + dc);
            if nr < 0 || nr >= rows as isize || nc < 0 || nc >= cols as isize {
                continue;
            }
            let a = levels[r as usize * cols + c as usize] as usize;
            let b = levels[nr as usize * cols + nc as usize] as usize;
            counts[[a, b]] += 1;
            counts[[b, a]] += 1;
            total += 2;
        }
    }
    if total == 0 {
        return Err(Error::NoCooccurringPairs);
    }

    let p = counts.mapv(|c| c as f64 / total as f64);
    Ok(Glcm::with_marginals(p, gray_levels, total))
}

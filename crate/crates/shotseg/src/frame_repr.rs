//! Per-frame signature: the 64x14 block feature matrix, spectral
//! clustering of the blocks, and the k x 14 representative matrix whose
//! rows are cluster means.

use ndarray::{Array1, Array2, ArrayView2};

use crate::config::{Config, BLOCKS_PER_FRAME, BLOCK_EDGE};
use crate::error::{Error, Result};
use crate::ingest::{partition_blocks, GrayFrame};
use crate::linalg::{jacobi_eigh, kmeans};
use crate::texture::{block_texture_vector, TextureConfig};

pub const FEATURES: usize = 14;

/// Texture features of every block of one frame, row-major block order.
#[derive(Debug, Clone)]
pub struct FrameFeatureMatrix {
    pub frame_index: usize,
    /// 64 rows, 14 columns.
    pub fm: Array2<f64>,
}

/// The frame's k x 14 descriptor: one mean texture vector per cluster,
/// in canonical row order.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeMatrix {
    pub frame_index: usize,
    /// k rows, 14 columns.
    pub rm: Array2<f64>,
    /// Blocks per cluster, aligned with the rows; sums to 64.
    pub cluster_sizes: Vec<usize>,
}

/// Texture vectors for all 64 blocks of a frame.
pub fn frame_feature_matrix(frame: &GrayFrame, cfg: &TextureConfig) -> Result<FrameFeatureMatrix> {
    let blocks = partition_blocks(frame);
    let mut fm = Array2::<f64>::zeros((BLOCKS_PER_FRAME, FEATURES));
    for (b, block) in blocks.iter().enumerate() {
        let tv = block_texture_vector(&block.pixels, BLOCK_EDGE, BLOCK_EDGE, cfg)?;
        for (j, v) in tv.f.iter().enumerate() {
            fm[[b, j]] = *v;
        }
    }
    debug_assert!(fm.iter().all(|v| v.is_finite()));
    Ok(FrameFeatureMatrix {
        frame_index: frame.index,
        fm,
    })
}

/// Gaussian similarity between blocks.
///
/// Features are z-scored per column first (zero-variance columns are
/// left at zero) so no single feature's scale dominates the Euclidean
/// distance. The kernel width is the median positive pairwise distance;
/// the diagonal is zero.
pub fn affinity_matrix(fm: &FrameFeatureMatrix) -> Array2<f64> {
    let n = fm.fm.nrows();
    let d = fm.fm.ncols();

    // Column z-scores (population variance).
    let mut z = fm.fm.clone();
    for j in 0..d {
        let col = fm.fm.column(j);
        let mean = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std > 0.0 {
            for i in 0..n {
                z[[i, j]] = (fm.fm[[i, j]] - mean) / std;
            }
        } else {
            for i in 0..n {
                z[[i, j]] = 0.0;
            }
        }
    }

    let mut dist = Array2::<f64>::zeros((n, n));
    let mut positive = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2: f64 = (0..d).map(|c| (z[[i, c]] - z[[j, c]]).powi(2)).sum();
            let dij = d2.sqrt();
            dist[[i, j]] = dij;
            dist[[j, i]] = dij;
            if dij > 0.0 {
                positive.push(dij);
            }
        }
    }
    let sigma = median(&mut positive).unwrap_or(1.0);

    let mut w = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let dij = dist[[i, j]];
                w[[i, j]] = (-dij * dij / (2.0 * sigma * sigma)).exp();
            }
        }
    }
    w
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Ng-Jordan-Weiss spectral clustering of a similarity matrix.
///
/// Forms `L = D^{-1/2} W D^{-1/2}` (zero-degree rows get a zero
/// scaling), embeds each point as its row in the matrix of the k
/// leading eigenvectors, normalizes rows to unit length, and k-means
/// clusters the embedded rows.
pub fn spectral_cluster(w: &Array2<f64>, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = w.nrows();
    if k > n || k == 0 {
        return Err(Error::InvalidClusterCount { k, min: 1, max: n });
    }

    let mut d_inv_sqrt = Array1::<f64>::zeros(n);
    for i in 0..n {
        let deg: f64 = w.row(i).sum();
        if deg > 0.0 {
            d_inv_sqrt[i] = 1.0 / deg.sqrt();
        }
    }
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            l[[i, j]] = d_inv_sqrt[i] * w[[i, j]] * d_inv_sqrt[j];
        }
    }

    let eig = jacobi_eigh(&l)?;
    let mut embed = Array2::<f64>::zeros((n, k));
    for c in 0..k {
        for i in 0..n {
            embed[[i, c]] = eig.eigenvectors[[i, c]];
        }
    }
    for i in 0..n {
        let norm: f64 = embed.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for c in 0..k {
                embed[[i, c]] /= norm;
            }
        }
    }

    let result = kmeans(embed.view(), k, seed)?;
    Ok(result.labels)
}

/// Cluster means of the raw (unstandardized) feature rows, in canonical
/// order: descending cluster size, ties broken by lexicographic row
/// comparison. Empty clusters are filled with the global mean so the
/// matrix keeps its k x 14 shape.
pub fn representative_matrix(
    fm: &FrameFeatureMatrix,
    labels: &[usize],
    k: usize,
) -> RepresentativeMatrix {
    let n = fm.fm.nrows();
    let d = fm.fm.ncols();
    assert_eq!(labels.len(), n);
    assert!(labels.iter().all(|&l| l < k));

    let mut sums = Array2::<f64>::zeros((k, d));
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for j in 0..d {
            sums[[l, j]] += fm.fm[[i, j]];
        }
    }
    let global_mean: Vec<f64> = (0..d).map(|j| fm.fm.column(j).sum() / n as f64).collect();

    let mut rows: Vec<(usize, Vec<f64>)> = (0..k)
        .map(|c| {
            if counts[c] > 0 {
                let row: Vec<f64> = (0..d).map(|j| sums[[c, j]] / counts[c] as f64).collect();
                (counts[c], row)
            } else {
                (0, global_mean.clone())
            }
        })
        .collect();

    rows.sort_by(|a, b| {
        b.0.cmp(&a.0).then_with(|| {
            for (x, y) in a.1.iter().zip(b.1.iter()) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let mut rm = Array2::<f64>::zeros((k, d));
    let mut cluster_sizes = Vec::with_capacity(k);
    for (r, (size, row)) in rows.into_iter().enumerate() {
        cluster_sizes.push(size);
        for (j, v) in row.into_iter().enumerate() {
            rm[[r, j]] = v;
        }
    }
    RepresentativeMatrix {
        frame_index: fm.frame_index,
        rm,
        cluster_sizes,
    }
}

/// Full per-frame signature: features, affinity, spectral clustering,
/// cluster means.
pub fn frame_representative(frame: &GrayFrame, cfg: &Config) -> Result<RepresentativeMatrix> {
    let tex = TextureConfig {
        gray_levels: cfg.graylevels,
        distance: cfg.distance,
        orientations: cfg.orientations.clone(),
    };
    let fm = frame_feature_matrix(frame, &tex)?;
    let w = affinity_matrix(&fm);
    let labels = spectral_cluster(&w, cfg.k, cfg.frame_seed(frame.index))?;
    Ok(representative_matrix(&fm, &labels, cfg.k))
}

/// Serialization shape for the optional representative-matrix dump.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct RmRecord {
    pub frame: usize,
    pub rm: Vec<Vec<f64>>,
}

impl From<&RepresentativeMatrix> for RmRecord {
    fn from(r: &RepresentativeMatrix) -> RmRecord {
        RmRecord {
            frame: r.frame_index,
            rm: r.rm.rows().into_iter().map(|row| row.to_vec()).collect(),
        }
    }
}

/// Convenience view of the RM rows for scatter computations.
pub fn rm_view(r: &RepresentativeMatrix) -> ArrayView2<'_, f64> {
    r.rm.view()
}

//! Block texture description: gray-level co-occurrence matrices and the
//! fourteen Haralick statistics derived from them.

mod glcm;
mod haralick;

pub use glcm::{compute_glcm, quantize, Glcm};
pub use haralick::{maximal_correlation_coefficient, texture_vector_for, TextureVector};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Co-occurrence offset direction. With symmetric accumulation an
/// offset and its negation produce the same matrix, so four directions
/// cover all eight neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Orientation {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Orientation {
    pub fn all() -> [Orientation; 4] {
        [
            Orientation::Deg0,
            Orientation::Deg45,
            Orientation::Deg90,
            Orientation::Deg135,
        ]
    }

    /// (row, col) offset at distance 1; scale by the configured distance.
    pub fn offset(&self) -> (isize, isize) {
        match self {
            Orientation::Deg0 => (0, 1),
            Orientation::Deg45 => (-1, 1),
            Orientation::Deg90 => (-1, 0),
            Orientation::Deg135 => (-1, -1),
        }
    }

    pub fn degrees(&self) -> u16 {
        match self {
            Orientation::Deg0 => 0,
            Orientation::Deg45 => 45,
            Orientation::Deg90 => 90,
            Orientation::Deg135 => 135,
        }
    }
}

impl TryFrom<u16> for Orientation {
    type Error = String;

    fn try_from(deg: u16) -> std::result::Result<Orientation, String> {
        match deg {
            0 => Ok(Orientation::Deg0),
            45 => Ok(Orientation::Deg45),
            90 => Ok(Orientation::Deg90),
            135 => Ok(Orientation::Deg135),
            other => Err(format!("unsupported orientation {other}; expected 0, 45, 90 or 135")),
        }
    }
}

impl From<Orientation> for u16 {
    fn from(o: Orientation) -> u16 {
        o.degrees()
    }
}

/// Everything the texture stage needs to turn a block of luma values
/// into a feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureConfig {
    pub gray_levels: usize,
    pub distance: usize,
    pub orientations: Vec<Orientation>,
}

impl Default for TextureConfig {
    fn default() -> Self {
        TextureConfig {
            gray_levels: 8,
            distance: 1,
            orientations: Orientation::all().to_vec(),
        }
    }
}

/// Quantize a block, build one GLCM per orientation, and average the
/// fourteen features across orientations.
pub fn block_texture_vector(
    pixels: &[u8],
    rows: usize,
    cols: usize,
    cfg: &TextureConfig,
) -> Result<TextureVector> {
    if cfg.orientations.is_empty() {
        return Err(Error::InvalidConfig("empty orientation set".into()));
    }
    let levels = quantize(pixels, cfg.gray_levels)?;
    let glcms: Vec<Glcm> = cfg
        .orientations
        .iter()
        .map(|o| compute_glcm(&levels, rows, cols, cfg.gray_levels, *o, cfg.distance))
        .collect::<Result<_>>()?;
    Ok(average_texture_vector(&glcms))
}

/// Average per-orientation feature vectors; this is the per-block
/// descriptor used everywhere downstream.
pub fn average_texture_vector(glcms: &[Glcm]) -> TextureVector {
    assert!(!glcms.is_empty());
    let mut acc = [0.0f64; 14];
    for g in glcms {
        let tv = texture_vector_for(g);
        for (a, v) in acc.iter_mut().zip(tv.f.iter()) {
            *a += v;
        }
    }
    let n = glcms.len() as f64;
    for a in acc.iter_mut() {
        *a /= n;
    }
    TextureVector { f: acc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BLOCK_EDGE;
    use proptest::prelude::*;

    fn any_block() -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(any::<u8>(), BLOCK_EDGE * BLOCK_EDGE)
    }

    #[test]
    fn constant_block_features() {
        let pixels = vec![200u8; BLOCK_EDGE * BLOCK_EDGE];
        let tv = block_texture_vector(&pixels, BLOCK_EDGE, BLOCK_EDGE, &TextureConfig::default())
            .unwrap();
        assert_eq!(tv.f1(), 1.0);
        assert_eq!(tv.f2(), 0.0);
        assert_eq!(tv.f8(), 0.0);
        assert_eq!(tv.f9(), 0.0);
        assert_eq!(tv.f11(), 0.0);
        assert_eq!(tv.f14(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn orientation_order_does_not_matter(pixels in any_block()) {
            let mut cfg = TextureConfig::default();
            let a = block_texture_vector(&pixels, BLOCK_EDGE, BLOCK_EDGE, &cfg).unwrap();
            cfg.orientations.reverse();
            let b = block_texture_vector(&pixels, BLOCK_EDGE, BLOCK_EDGE, &cfg).unwrap();
            for i in 0..14 {
                prop_assert!((a.f[i] - b.f[i]).abs() <= 1e-12 * a.f[i].abs().max(1.0));
            }
        }

        #[test]
        fn features_stay_in_range(pixels in any_block()) {
            let tv = block_texture_vector(&pixels, BLOCK_EDGE, BLOCK_EDGE, &TextureConfig::default()).unwrap();
            prop_assert!(tv.f1() > 0.0 && tv.f1() <= 1.0);
            prop_assert!(tv.f2() >= 0.0);
            prop_assert!(tv.f8() >= -1e-15);
            prop_assert!(tv.f9() >= -1e-15);
            prop_assert!(tv.f11() >= -1e-15);
            prop_assert!((0.0..=1.0).contains(&tv.f14()));
            for v in tv.f {
                prop_assert!(v.is_finite());
            }
        }
    }

    #[test]
    fn orientation_serde_uses_degrees() {
        let cfg = TextureConfig::default();
        let json = serde_json::to_string(&cfg.orientations).unwrap();
        assert_eq!(json, "[0,45,90,135]");
        let back: Vec<Orientation> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg.orientations);
        assert!(serde_json::from_str::<Orientation>("30").is_err());
    }
}

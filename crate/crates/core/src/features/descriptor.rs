use alloc::format;
use alloc::vec::Vec;

use super::hog::{hog, HogConfig};
use super::resize::resize_replicate;
use crate::image::View;
use crate::pyramid::Pyramid;
use crate::{Error, Result};

/// Per-view target sizes: front `h x w`, side `h x d`, top `d x w`
/// (rows x cols).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalizationSpec {
    pub w: usize,
    pub h: usize,
    pub d: usize,
}

impl Default for NormalizationSpec {
    /// (60, 100, 80): 143 blocks per layer with 10 px cells and 2x2 blocks,
    /// i.e. 15444 values at 3 layers and 20592 at 4.
    fn default() -> Self {
        Self { w: 60, h: 100, d: 80 }
    }
}

impl NormalizationSpec {
    /// Target `(rows, cols)` for a view.
    pub fn target(&self, view: View) -> (usize, usize) {
        match view {
            View::Front => (self.h, self.w),
            View::Side => (self.h, self.d),
            View::Top => (self.d, self.w),
        }
    }

    pub fn validate(&self, hog: &HogConfig) -> Result<()> {
        for (name, v) in [("w", self.w), ("h", self.h), ("d", self.d)] {
            if v == 0 || v % hog.cell != 0 {
                return Err(Error::InvalidConfig(format!(
                    "normalization {name} = {v} must be a positive multiple of the {} px hog cell",
                    hog.cell
                )));
            }
            if v / hog.cell < hog.block {
                return Err(Error::InvalidConfig(format!(
                    "normalization {name} = {v} is smaller than one hog block"
                )));
            }
        }
        Ok(())
    }
}

/// Where one (layer, view) HOG sits inside a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayoutSpan {
    /// Pyramid level, counted from 1.
    pub layer: usize,
    pub view: View,
    pub offset: usize,
    pub blocks: usize,
    pub len: usize,
}

/// Cascaded LP-DMI-HOG values with their layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: Vec<LayoutSpan>,
}

/// Descriptor length for `layers` pyramid levels.
pub fn descriptor_len(layers: usize, norm: &NormalizationSpec, cfg: &HogConfig) -> usize {
    let per_layer: usize = View::ALL
        .iter()
        .map(|&v| {
            let (r, c) = norm.target(v);
            cfg.descriptor_len(r, c)
        })
        .sum();
    layers * per_layer
}

/// Resizes every level of the front, side and top pyramids to its view's
/// target size, describes it with HOG and concatenates layer by layer
/// (ascending), views in front/side/top order within a layer.
pub fn assemble_descriptor(pyramids: &[Pyramid; 3], norm: &NormalizationSpec, cfg: &HogConfig) -> Result<FeatureVector> {
    norm.validate(cfg)?;
    let layers = pyramids[0].len();
    if pyramids.iter().any(|p| p.len() != layers) || layers == 0 {
        return Err(Error::DimensionMismatch {
            expected: format!("{layers} levels in every view"),
            found: format!("{:?}", pyramids.iter().map(Pyramid::len).collect::<Vec<_>>()),
        });
    }
    let mut values = Vec::with_capacity(descriptor_len(layers, norm, cfg));
    let mut layout = Vec::with_capacity(3 * layers);
    for layer in 1..=layers {
        for (pyr, view) in pyramids.iter().zip(View::ALL) {
            let target = norm.target(view);
            let resized = resize_replicate(pyr.level(layer), target)?;
            let h = hog(&resized, cfg)?;
            layout.push(LayoutSpan {
                layer,
                view,
                offset: values.len(),
                blocks: h.len() / cfg.block_len(),
                len: h.len(),
            });
            values.extend_from_slice(&h);
        }
    }
    Ok(FeatureVector { values, layout })
}

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::image::ViewImage;
use crate::{Error, Result};

/// Dalal–Triggs style HOG parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HogConfig {
    /// Cell side in pixels.
    pub cell: usize,
    /// Unsigned orientation bins over `[0, π)`.
    pub bins: usize,
    /// Block side in cells.
    pub block: usize,
    /// Block step in pixels; a positive multiple of `cell`.
    pub stride: usize,
    pub l2_epsilon: f64,
}

impl Default for HogConfig {
    fn default() -> Self {
        Self { cell: 10, bins: 9, block: 2, stride: 10, l2_epsilon: 1e-5 }
    }
}

impl HogConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cell == 0 || self.block == 0 {
            return Err(Error::InvalidConfig("hog cell and block sizes must be positive".into()));
        }
        if self.bins < 2 {
            return Err(Error::InvalidConfig(format!("hog needs at least 2 bins, got {}", self.bins)));
        }
        if self.stride == 0 || !self.stride.is_multiple_of(self.cell) {
            return Err(Error::InvalidConfig(format!(
                "hog stride ({}) must be a positive multiple of the cell size ({})",
                self.stride, self.cell
            )));
        }
        if self.l2_epsilon.is_nan() || self.l2_epsilon <= 0.0 {
            return Err(Error::InvalidConfig("hog l2_epsilon must be positive".into()));
        }
        Ok(())
    }

    /// Values per block: `block² · bins`.
    pub fn block_len(&self) -> usize {
        self.block * self.block * self.bins
    }

    /// Blocks along an axis of `pixels` length (which must be cell-aligned).
    pub fn blocks_along(&self, pixels: usize) -> usize {
        let cells = pixels / self.cell;
        if cells < self.block {
            0
        } else {
            (cells - self.block) / (self.stride / self.cell) + 1
        }
    }

    pub fn descriptor_len(&self, rows: usize, cols: usize) -> usize {
        self.blocks_along(rows) * self.blocks_along(cols) * self.block_len()
    }
}

/// HOG descriptor of an image whose sides are multiples of the cell size.
///
/// Gradients use `[-1, 0, 1]` with replicate borders; each pixel votes its
/// magnitude into the two nearest orientation bins (bin `k` centred on
/// `k·π/bins`) by linear interpolation. Blocks are laid out row-major, cells
/// row-major inside a block, and each block is scaled by
/// `1 / sqrt(‖v‖² + ε²)`.
pub fn hog(img: &ViewImage, cfg: &HogConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (rows, cols) = img.dims();
    if rows % cfg.cell != 0 || cols % cfg.cell != 0 {
        return Err(Error::InvalidConfig(format!(
            "image {rows}x{cols} is not a multiple of the {0}x{0} cell",
            cfg.cell
        )));
    }
    let (cells_y, cells_x) = (rows / cfg.cell, cols / cfg.cell);
    if cells_y < cfg.block || cells_x < cfg.block {
        return Err(Error::InvalidConfig(format!(
            "image {rows}x{cols} holds fewer cells than one {0}x{0} block",
            cfg.block
        )));
    }
    let hist = cell_histograms(img, cfg, cells_x);

    let step = cfg.stride / cfg.cell;
    let (blocks_y, blocks_x) = (cfg.blocks_along(rows), cfg.blocks_along(cols));
    let mut out = Vec::with_capacity(blocks_y * blocks_x * cfg.block_len());
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let start = out.len();
            for cy in by * step..by * step + cfg.block {
                for cx in bx * step..bx * step + cfg.block {
                    let c = (cy * cells_x + cx) * cfg.bins;
                    out.extend_from_slice(&hist[c..c + cfg.bins]);
                }
            }
            let block = &mut out[start..];
            let norm = libm::sqrt(block.iter().map(|v| v * v).sum::<f64>() + cfg.l2_epsilon * cfg.l2_epsilon);
            for v in block {
                *v /= norm;
            }
        }
    }
    Ok(out)
}

fn cell_histograms(img: &ViewImage, cfg: &HogConfig, cells_x: usize) -> Vec<f64> {
    let (rows, cols) = img.dims();
    let mut hist = vec![0.0; (rows / cfg.cell) * cells_x * cfg.bins];
    let bin_width = PI / cfg.bins as f64;
    for i in 0..rows {
        let (ii, cy) = (i as isize, i / cfg.cell);
        for j in 0..cols {
            let jj = j as isize;
            let gx = img.get_clamped(ii, jj + 1) - img.get_clamped(ii, jj - 1);
            let gy = img.get_clamped(ii + 1, jj) - img.get_clamped(ii - 1, jj);
            let magnitude = libm::hypot(gx, gy);
            if magnitude == 0.0 {
                continue;
            }
            let theta = unsigned_angle(libm::atan2(gy, gx));
            let pos = theta / bin_width;
            let lo = libm::floor(pos);
            let frac = pos - lo;
            let lo = (lo as usize) % cfg.bins;
            let hi = (lo + 1) % cfg.bins;
            let base = (cy * cells_x + j / cfg.cell) * cfg.bins;
            hist[base + lo] += magnitude * (1.0 - frac);
            hist[base + hi] += magnitude * frac;
        }
    }
    hist
}

/// Folds `atan2` output from `(-π, π]` onto `[0, π)`.
#[inline]
fn unsigned_angle(theta: f64) -> f64 {
    let t = if theta < 0.0 { theta + PI } else { theta };
    if t >= PI {
        t - PI
    } else {
        t
    }
}

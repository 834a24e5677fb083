//! Three-view projection of depth frames and depth motion images (DMI).
//!
//! Each frame yields three byte-range maps. Background cells hold 255 so the
//! temporal minimum only sees foreground:
//!
//! * front (`h x w`): scaled depth of the pixel;
//! * side (`h x D`): smallest scaled column coordinate among the row's pixels
//!   whose depth falls in bin `d`;
//! * top (`D x w`): smallest scaled row coordinate among the column's pixels
//!   whose depth falls in bin `d`.
//!
//! The DMI of a view is `255 - min_t map(i, j, t)`, cropped to its nonzero
//! bounding box and divided by its maximum.

use alloc::format;

use crate::depth::{DepthFrame, DepthSequence};
use crate::image::{View, ViewImage};
use crate::{Error, Result};

/// Value of an empty cell in a per-frame map.
pub const BACKGROUND: f64 = 255.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectionConfig {
    /// Number of depth slots spanning the side and top extents.
    pub depth_bins: usize,
    /// Sensor value mapped to intensity 0 and bin 0.
    pub depth_min: u32,
    /// Sensor value mapped to intensity 255 and bin `depth_bins - 1`.
    pub depth_max: u32,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self { depth_bins: 128, depth_min: 500, depth_max: 4500 }
    }
}

impl ProjectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depth_max <= self.depth_min {
            return Err(Error::InvalidConfig(format!(
                "depth_max ({}) must exceed depth_min ({})",
                self.depth_max, self.depth_min
            )));
        }
        if self.depth_bins < 8 {
            return Err(Error::InvalidConfig(format!("depth_bins must be at least 8, got {}", self.depth_bins)));
        }
        Ok(())
    }

    /// Affine map of a raw sample onto `[0, 255]` after clamping to the range.
    #[inline]
    pub fn intensity(&self, raw: u32) -> f64 {
        let d = raw.clamp(self.depth_min, self.depth_max);
        (d - self.depth_min) as f64 * 255.0 / (self.depth_max - self.depth_min) as f64
    }

    /// Depth slot of a raw sample.
    #[inline]
    pub fn bin(&self, raw: u32) -> usize {
        let d = raw.clamp(self.depth_min, self.depth_max) as u64;
        let span = (self.depth_max - self.depth_min) as u64;
        let b = (d - self.depth_min as u64) * self.depth_bins as u64 / span;
        (b as usize).min(self.depth_bins - 1)
    }
}

#[inline]
fn coordinate(index: usize, extent: usize) -> f64 {
    if extent > 1 {
        index as f64 * (255.0 / (extent - 1) as f64)
    } else {
        0.0
    }
}

/// Projects one frame onto the front, side and top planes.
pub fn project_frame(frame: &DepthFrame, cfg: &ProjectionConfig) -> [ViewImage; 3] {
    let (h, w, bins) = (frame.height(), frame.width(), cfg.depth_bins);
    let mut front = ViewImage::filled(View::Front, h, w, BACKGROUND);
    let mut side = ViewImage::filled(View::Side, h, bins, BACKGROUND);
    let mut top = ViewImage::filled(View::Top, bins, w, BACKGROUND);
    accumulate_frame(frame, cfg, [&mut front, &mut side, &mut top]);
    [front, side, top]
}

/// Lowers each cell of `maps` to the minimum with this frame's projection.
fn accumulate_frame(frame: &DepthFrame, cfg: &ProjectionConfig, maps: [&mut ViewImage; 3]) {
    let (h, w) = (frame.height(), frame.width());
    let [front, side, top] = maps;
    for i in 0..h {
        let row_coord = coordinate(i, h);
        for j in 0..w {
            let raw = frame.at(i, j);
            if raw == 0 {
                continue;
            }
            let value = cfg.intensity(raw);
            if value < front.get(i, j) {
                front.set(i, j, value);
            }
            let d = cfg.bin(raw);
            let col_coord = coordinate(j, w);
            if col_coord < side.get(i, d) {
                side.set(i, d, col_coord);
            }
            if row_coord < top.get(d, j) {
                top.set(d, j, row_coord);
            }
        }
    }
}

/// `255 - min_t map_v(i, j, t)` for the three views, before cropping and
/// normalization. Values lie in `[0, 255]`.
pub fn raw_dmi(seq: &DepthSequence, cfg: &ProjectionConfig) -> Result<[ViewImage; 3]> {
    cfg.validate()?;
    if seq.frames().iter().all(DepthFrame::is_background) {
        return Err(Error::AllBackground);
    }
    let (h, w, bins) = (seq.height(), seq.width(), cfg.depth_bins);
    let mut front = ViewImage::filled(View::Front, h, w, BACKGROUND);
    let mut side = ViewImage::filled(View::Side, h, bins, BACKGROUND);
    let mut top = ViewImage::filled(View::Top, bins, w, BACKGROUND);
    for frame in seq.frames() {
        accumulate_frame(frame, cfg, [&mut front, &mut side, &mut top]);
    }
    let mut out = [front, side, top];
    for img in &mut out {
        for p in img.pixels_mut() {
            *p = 255.0 - *p;
        }
    }
    Ok(out)
}

/// Per-view DMIs: inverted temporal minimum, ROI-cropped, then divided by the
/// maximum so the brightest pixel is 1.
pub fn compute_dmi(seq: &DepthSequence, cfg: &ProjectionConfig) -> Result<[ViewImage; 3]> {
    compute_dmi_with_min_roi(seq, cfg, 1)
}

/// As [`compute_dmi`], but each crop box is grown (centred, inside the image)
/// to at least `min_side` pixels per axis so later pyramid levels stay legal.
pub fn compute_dmi_with_min_roi(seq: &DepthSequence, cfg: &ProjectionConfig, min_side: usize) -> Result<[ViewImage; 3]> {
    let [f, s, t] = raw_dmi(seq, cfg)?;
    Ok([finish(&f, min_side)?, finish(&s, min_side)?, finish(&t, min_side)?])
}

fn finish(img: &ViewImage, min_side: usize) -> Result<ViewImage> {
    let mut cropped = crop_roi_min(img, min_side)?;
    normalize_max(&mut cropped);
    Ok(cropped)
}

/// Divides every pixel by the image maximum; all-zero images are left as is.
pub fn normalize_max(img: &mut ViewImage) {
    let max = img.max();
    if max > 0.0 {
        for p in img.pixels_mut() {
            *p /= max;
        }
    }
}

/// Tight bounding box of pixels `> 0` as `(top, left, rows, cols)`.
pub fn roi_box(img: &ViewImage) -> Option<(usize, usize, usize, usize)> {
    let (mut top, mut left, mut bottom, mut right) = (usize::MAX, usize::MAX, 0, 0);
    for i in 0..img.rows() {
        for j in 0..img.cols() {
            if img.get(i, j) > 0.0 {
                top = top.min(i);
                bottom = bottom.max(i);
                left = left.min(j);
                right = right.max(j);
            }
        }
    }
    (top != usize::MAX).then(|| (top, left, bottom - top + 1, right - left + 1))
}

/// Crops to the tight bounding box of nonzero pixels.
pub fn crop_roi(img: &ViewImage) -> Result<ViewImage> {
    crop_roi_min(img, 1)
}

/// Crops to the nonzero bounding box, widened symmetrically where needed to
/// reach `min_side` per axis (limited by the image itself).
pub fn crop_roi_min(img: &ViewImage, min_side: usize) -> Result<ViewImage> {
    let (top, left, rows, cols) = roi_box(img).ok_or(Error::AllBackground)?;
    let (top, rows) = widen(top, rows, min_side, img.rows());
    let (left, cols) = widen(left, cols, min_side, img.cols());
    Ok(img.sub_image(top, left, rows, cols))
}

fn widen(start: usize, len: usize, min_len: usize, extent: usize) -> (usize, usize) {
    let target = min_len.min(extent);
    if len >= target {
        return (start, len);
    }
    let grow = target - len;
    let new_start = start.saturating_sub(grow / 2).min(extent - target);
    (new_start, target)
}

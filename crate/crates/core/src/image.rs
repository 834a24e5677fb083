//! Single-channel real-valued images tagged with their projection view.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Projection plane an image belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum View {
    Front,
    Side,
    Top,
}

impl View {
    /// Cascading order used everywhere: front, side, top.
    pub const ALL: [View; 3] = [View::Front, View::Side, View::Top];

    pub fn short_name(self) -> &'static str {
        match self {
            View::Front => "f",
            View::Side => "s",
            View::Top => "t",
        }
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Front => "front",
            View::Side => "side",
            View::Top => "top",
        })
    }
}

/// Row-major grid of `f64` intensities.
///
/// Projection outputs are non-negative; Laplacian pyramid levels are signed.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewImage {
    pub view: View,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ViewImage {
    pub fn new(view: View, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimensions(alloc::format!(
                "image dims must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: alloc::format!("{} pixels", rows * cols),
                found: alloc::format!("{} pixels", data.len()),
            });
        }
        Ok(Self { view, rows, cols, data })
    }

    pub fn filled(view: View, rows: usize, cols: usize, value: f64) -> Self {
        assert!(rows > 0 && cols > 0, "image dims must be positive");
        Self { view, rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(view: View, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "image dims must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { view, rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Pixel lookup with replicate (clamp-to-edge) borders.
    #[inline]
    pub fn get_clamped(&self, i: isize, j: isize) -> f64 {
        let i = i.clamp(0, self.rows as isize - 1) as usize;
        let j = j.clamp(0, self.cols as isize - 1) as usize;
        self.get(i, j)
    }

    pub fn pixels(&self) -> &[f64] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.data
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum::<f64>() / self.data.len() as f64
    }

    /// Copies the sub-rectangle starting at `(top, left)`.
    pub fn sub_image(&self, top: usize, left: usize, rows: usize, cols: usize) -> ViewImage {
        assert!(top + rows <= self.rows && left + cols <= self.cols);
        ViewImage::from_fn(self.view, rows, cols, |i, j| self.get(top + i, left + j))
    }

    /// Elementwise difference `self - other`; dims must agree.
    pub fn sub(&self, other: &ViewImage) -> Result<ViewImage> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Elementwise sum `self + other`; dims must agree.
    pub fn add(&self, other: &ViewImage) -> Result<ViewImage> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &ViewImage, f: impl Fn(f64, f64) -> f64) -> Result<ViewImage> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: alloc::format!("{}x{}", self.rows, self.cols),
                found: alloc::format!("{}x{}", other.rows, other.cols),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(ViewImage { view: self.view, rows: self.rows, cols: self.cols, data })
    }

    /// Affine map of the pixel range onto `[0, 255]` bytes, for display only.
    pub fn to_display_bytes(&self) -> Vec<u8> {
        let (lo, hi) = (self.min(), self.max());
        let span = hi - lo;
        self.data
            .iter()
            .map(|&v| {
                if span > 0.0 {
                    libm::round((v - lo) / span * 255.0) as u8
                } else {
                    0
                }
            })
            .collect()
    }
}

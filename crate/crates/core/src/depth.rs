//! Depth frames, labelled sequences and the deterministic synthetic generator.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SeededRng;
use crate::{Error, Result};

/// One depth map. Samples are raw sensor units; 0 means no return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFrame {
    width: usize,
    height: usize,
    depth: Vec<u32>,
}

impl DepthFrame {
    pub fn new(width: usize, height: usize, depth: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("frame dims must be positive, got {width}x{height}")));
        }
        if depth.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: format!("{} samples", width * height),
                found: format!("{} samples", depth.len()),
            });
        }
        Ok(Self { width, height, depth })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, depth: vec![0; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Sample at row `i`, column `j`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.depth[i * self.width + j]
    }

    pub fn samples(&self) -> &[u32] {
        &self.depth
    }

    pub fn is_background(&self) -> bool {
        self.depth.iter().all(|&d| d == 0)
    }
}

/// An action clip: `frames[0]` is frame index `start_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthSequence {
    frames: Vec<DepthFrame>,
    pub subject_id: u32,
    pub action_label: u32,
    pub repetition: u32,
    pub start_index: usize,
}

impl DepthSequence {
    pub fn new(frames: Vec<DepthFrame>, subject_id: u32, action_label: u32, repetition: u32) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidDimensions("sequence needs at least one frame".into()))?;
        let (w, h) = (first.width, first.height);
        if let Some(pos) = frames.iter().position(|f| f.width != w || f.height != h) {
            return Err(Error::DimensionMismatch {
                expected: format!("{w}x{h} frames"),
                found: format!("{}x{} at frame {pos}", frames[pos].width, frames[pos].height),
            });
        }
        if subject_id == 0 || repetition == 0 {
            return Err(Error::InvalidDimensions(format!(
                "subject id and repetition start at 1 (got subject {subject_id}, repetition {repetition})"
            )));
        }
        Ok(Self { frames, subject_id, action_label, repetition, start_index: 0 })
    }

    pub fn frames(&self) -> &[DepthFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }
}

/// Motion patterns the synthetic generator can render.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MotionPattern {
    BlobTranslateRight,
    BlobTranslateUp,
    BlobGrow,
    BlobDiagonal,
}

impl MotionPattern {
    pub const ALL: [MotionPattern; 4] =
        [Self::BlobTranslateRight, Self::BlobTranslateUp, Self::BlobGrow, Self::BlobDiagonal];

    pub fn name(self) -> &'static str {
        match self {
            Self::BlobTranslateRight => "blob-translate-right",
            Self::BlobTranslateUp => "blob-translate-up",
            Self::BlobGrow => "blob-grow",
            Self::BlobDiagonal => "blob-diagonal",
        }
    }
}

/// Parameters of one synthetic clip: a dome-shaped blob (nearest at its
/// centre) moving over an empty background.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticSpec {
    pub pattern: MotionPattern,
    pub frames: usize,
    pub width: usize,
    pub height: usize,
    /// Blob radius in pixels (at the first frame for `BlobGrow`).
    pub blob_radius: usize,
    /// Total displacement in pixels across the clip (radius growth for `BlobGrow`).
    pub travel: usize,
    /// Depth at the blob centre, sensor units.
    pub blob_depth: u32,
    /// Extra depth at the blob rim, sensor units.
    pub depth_relief: u32,
    /// Uniform integer noise amplitude added to blob samples.
    pub noise: u32,
    /// Offset of the start position in pixels (row, col), may be negative.
    pub jitter: (i32, i32),
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(pattern: MotionPattern, seed: u64) -> Self {
        Self {
            pattern,
            frames: 10,
            width: 64,
            height: 64,
            blob_radius: 8,
            travel: 24,
            blob_depth: 2000,
            depth_relief: 800,
            noise: 0,
            jitter: (0, 0),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.frames < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 frames, got {}", self.frames)));
        }
        if self.width < 16 || self.height < 16 {
            return Err(Error::InvalidSpec(format!(
                "frame dims must be at least 16x16, got {}x{}",
                self.width, self.height
            )));
        }
        if self.blob_radius == 0 || self.blob_depth == 0 {
            return Err(Error::InvalidSpec("blob radius and depth must be positive".into()));
        }
        if self.pattern != MotionPattern::BlobGrow && self.travel < self.frames - 1 {
            return Err(Error::InvalidSpec(format!(
                "travel of {} px cannot move the blob on each of {} frames",
                self.travel, self.frames
            )));
        }
        // blob must stay inside the frame at every step
        for t in 0..self.frames {
            let (ci, cj, r) = self.placement(t);
            let r = r as i64;
            if ci - r < 0 || cj - r < 0 || ci + r >= self.height as i64 || cj + r >= self.width as i64 {
                return Err(Error::InvalidSpec(format!(
                    "blob of radius {r} at ({ci}, {cj}) leaves the {}x{} frame at step {t}",
                    self.height, self.width
                )));
            }
        }
        Ok(())
    }

    /// Blob centre (row, col) and radius at frame `t`.
    fn placement(&self, t: usize) -> (i64, i64, usize) {
        let steps = (self.frames - 1) as i64;
        let travel = self.travel as i64;
        let offset = (travel * t as i64 + steps / 2) / steps;
        let mid_i = self.height as i64 / 2 + self.jitter.0 as i64;
        let mid_j = self.width as i64 / 2 + self.jitter.1 as i64;
        let half = travel / 2;
        match self.pattern {
            MotionPattern::BlobTranslateRight => (mid_i, mid_j - half + offset, self.blob_radius),
            MotionPattern::BlobTranslateUp => (mid_i + half - offset, mid_j, self.blob_radius),
            MotionPattern::BlobDiagonal => (mid_i + half - offset, mid_j - half + offset, self.blob_radius),
            MotionPattern::BlobGrow => (mid_i, mid_j, self.blob_radius + offset as usize / 2),
        }
    }
}

/// Renders a synthetic sequence; a pure function of `spec`.
pub fn synth_sequence(spec: &SyntheticSpec, subject_id: u32, action_label: u32, repetition: u32) -> Result<DepthSequence> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let mut frames = Vec::with_capacity(spec.frames);
    for t in 0..spec.frames {
        let (ci, cj, r) = spec.placement(t);
        let r2 = (r * r) as i64;
        let mut depth = vec![0u32; spec.width * spec.height];
        for i in (ci - r as i64)..=(ci + r as i64) {
            for j in (cj - r as i64)..=(cj + r as i64) {
                let d2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
                if d2 > r2 {
                    continue;
                }
                let relief = (spec.depth_relief as i64 * d2) / r2.max(1);
                let mut value = spec.blob_depth as i64 + relief;
                if spec.noise > 0 {
                    value += rng.int_inclusive(-(spec.noise as i64), spec.noise as i64);
                }
                depth[i as usize * spec.width + j as usize] = value.max(1) as u32;
            }
        }
        frames.push(DepthFrame { width: spec.width, height: spec.height, depth });
    }
    DepthSequence::new(frames, subject_id, action_label, repetition)
}

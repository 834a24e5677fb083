//! Synthetic datasets: one motion pattern per class, with per-clip jitter in
//! placement, size, travel, depth and sensor noise.

use std::path::{Path, PathBuf};

use lpdmi_core::depth::{synth_sequence, MotionPattern, SyntheticSpec};
use lpdmi_core::rng::{derive_seed, SeededRng};

use crate::error::{Error, Result, StageExt};
use crate::io::{create_dir, raw};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthPlan {
    pub classes: u32,
    pub subjects: u32,
    pub reps: u32,
    pub seed: u64,
}

impl SynthPlan {
    pub fn validate(&self) -> Result<()> {
        let max = MotionPattern::ALL.len() as u32;
        let mut errors = Vec::new();
        if !(1..=max).contains(&self.classes) {
            errors.push(format!("classes must lie in 1..={max} (one per motion pattern), got {}", self.classes));
        }
        if self.subjects == 0 || self.reps == 0 {
            errors.push("subjects and reps must be at least 1".into());
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }

    /// Spec of clip (label, subject, repetition), labels counted from 1.
    pub fn spec(&self, label: u32, subject: u32, rep: u32) -> SyntheticSpec {
        let clip_seed = derive_seed(self.seed, &[label as u64, subject as u64, rep as u64]);
        let mut rng = SeededRng::new(clip_seed);
        let mut spec = SyntheticSpec::new(MotionPattern::ALL[label as usize - 1], clip_seed);
        spec.jitter = (rng.int_inclusive(-4, 4) as i32, rng.int_inclusive(-4, 4) as i32);
        spec.blob_radius = rng.int_inclusive(7, 9) as usize;
        spec.travel = rng.int_inclusive(20, 28) as usize;
        spec.blob_depth = rng.int_inclusive(1800, 2400) as u32;
        spec.noise = 20;
        spec
    }

    /// Writes every clip as `aLL_sSS_eEE.lpd` under `dir` (created if
    /// missing) and returns the paths in label, subject, repetition order.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        self.validate()?;
        create_dir(dir)?;
        let mut paths = Vec::new();
        for label in 1..=self.classes {
            for subject in 1..=self.subjects {
                for rep in 1..=self.reps {
                    let seq = synth_sequence(&self.spec(label, subject, rep), subject, label, rep).stage("synth")?;
                    let path = dir.join(format!("a{label:02}_s{subject:02}_e{rep:02}.{}", raw::EXTENSION));
                    raw::save_sequence(&seq, &path)?;
                    paths.push(path);
                }
            }
        }
        Ok(paths)
    }
}

//! Experiment reports: JSON body, text table and confusion CSV.
//!
//! Wall-clock timings are kept out of the JSON body so that reruns with the
//! same config produce byte-identical reports.

use std::fmt::Write as _;
use std::path::Path;

use lpdmi_core::eval::ConfusionMatrix;
use serde::Serialize;

use crate::config::{pyramid_name, PipelineConfig};
use crate::error::Result;
use crate::io::{write_atomic, write_json};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub extract_s: f64,
    pub fit_s: f64,
    pub predict_s: f64,
}

impl Timings {
    pub fn total_s(&self) -> f64 {
        self.extract_s + self.fit_s + self.predict_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassAccuracy {
    pub label: u32,
    pub test_samples: u64,
    /// `None` when the class has no test samples.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub sample: String,
    pub truth: u32,
    pub predicted: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: PipelineConfig,
    pub train_samples: usize,
    pub test_samples: usize,
    pub descriptor_dims: usize,
    pub pca_components: usize,
    pub accuracy: f64,
    pub per_class: Vec<ClassAccuracy>,
    pub confusion: ConfusionMatrix,
    pub predictions: Vec<PredictionRecord>,
    #[serde(skip)]
    pub timings: Timings,
}

impl ExperimentReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        config: PipelineConfig,
        train_samples: usize,
        test_samples: usize,
        descriptor_dims: usize,
        pca_components: usize,
        confusion: ConfusionMatrix,
        predictions: Vec<PredictionRecord>,
        timings: Timings,
    ) -> Self {
        let per_class = confusion
            .classes
            .iter()
            .zip(confusion.per_class_accuracy())
            .zip(&confusion.counts)
            .map(|((&label, accuracy), row)| ClassAccuracy { label, test_samples: row.iter().sum(), accuracy })
            .collect();
        Self {
            accuracy: confusion.accuracy(),
            config,
            train_samples,
            test_samples,
            descriptor_dims,
            pca_components,
            per_class,
            confusion,
            predictions,
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let cfg = &self.config;
        let mut s = String::new();
        let protocol = match cfg.split.subset {
            Some(sub) => format!("{} ({})", cfg.split.protocol.name(), sub.name()),
            None => cfg.split.protocol.name().to_string(),
        };
        let _ = writeln!(s, "protocol     {protocol}");
        let _ = writeln!(s, "pyramid      {}{}", pyramid_name(cfg.pyramid).to_uppercase(), cfg.layers);
        let _ = writeln!(s, "train/test   {} / {}", self.train_samples, self.test_samples);
        let _ = writeln!(s, "descriptor   {} -> {} (pca)", self.descriptor_dims, self.pca_components);
        let _ = writeln!(s, "elm          {} hidden, {}, seed {}", cfg.elm_hidden, cfg.elm_activation.name(), cfg.seed);
        let _ = writeln!(s, "accuracy     {:.2}%", 100.0 * self.accuracy);
        let _ = writeln!(s);
        let _ = writeln!(s, "class  test  accuracy");
        for c in &self.per_class {
            let acc = c.accuracy.map_or("-".to_string(), |a| format!("{:.2}%", 100.0 * a));
            let _ = writeln!(s, "{:>5} {:>5} {:>9}", c.label, c.test_samples, acc);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "confusion (rows true, columns predicted)");
        let _ = write!(s, "     ");
        for c in &self.confusion.classes {
            let _ = write!(s, " {c:>4}");
        }
        let _ = writeln!(s);
        for (c, row) in self.confusion.classes.iter().zip(&self.confusion.counts) {
            let _ = write!(s, "{c:>5}");
            for v in row {
                let _ = write!(s, " {v:>4}");
            }
            let _ = writeln!(s);
        }
        s
    }

    pub fn confusion_csv(&self) -> String {
        let mut s = String::from("true\\predicted");
        for c in &self.confusion.classes {
            let _ = write!(s, ",{c}");
        }
        s.push('\n');
        for (c, row) in self.confusion.classes.iter().zip(&self.confusion.counts) {
            let _ = write!(s, "{c}");
            for v in row {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }

    /// `report.json`, `report.txt`, `confusion.csv` and `timings.json`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        crate::io::create_dir(dir)?;
        write_atomic(&dir.join("report.json"), self.to_json().as_bytes())?;
        write_atomic(&dir.join("report.txt"), self.table().as_bytes())?;
        write_atomic(&dir.join("confusion.csv"), self.confusion_csv().as_bytes())?;
        write_json(&dir.join("timings.json"), &self.timings)
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub pyramid: String,
    pub layers: usize,
    pub descriptor_dims: usize,
    pub pca_components: usize,
    pub accuracy: f64,
    #[serde(skip)]
    pub seconds: f64,
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut s = String::from("pyramid  layers  descriptor  pca  accuracy  seconds\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<7} {:>7} {:>11} {:>4} {:>8.2}% {:>8.2}",
            r.pyramid.to_uppercase(),
            r.layers,
            r.descriptor_dims,
            r.pca_components,
            100.0 * r.accuracy,
            r.seconds
        );
    }
    s
}

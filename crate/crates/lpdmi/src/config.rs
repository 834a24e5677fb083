//! Flat `key = value` pipeline configuration.
//!
//! `#` starts a comment; blank lines are ignored; every key is optional and
//! falls back to its default. Relative paths resolve against the config
//! file's directory. Parsing and validation collect every problem before
//! failing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lpdmi_core::elm::{Activation, ElmConfig};
use lpdmi_core::eval::{ActionSubset, Protocol, SplitSpec};
use lpdmi_core::features::{HogConfig, NormalizationSpec};
use lpdmi_core::projection::ProjectionConfig;
use lpdmi_core::pyramid::{max_levels, PyramidKind};
use lpdmi_core::Error as CoreError;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    /// Directory of `.lpd` sequences.
    pub dataset: PathBuf,
    /// Directory receiving artifacts and reports.
    pub output: PathBuf,
    /// Seeds the ELM hidden layer (and is passed to the split).
    pub seed: u64,
    pub projection: ProjectionConfig,
    pub layers: usize,
    pub pyramid: PyramidKind,
    pub norm: NormalizationSpec,
    pub hog: HogConfig,
    /// Retained principal components, capped at the train rank.
    pub pca_k: usize,
    pub elm_hidden: usize,
    pub elm_activation: Activation,
    pub elm_pinv_tol: f64,
    pub split: SplitSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let elm = ElmConfig::default();
        Self {
            dataset: PathBuf::from("data"),
            output: PathBuf::from("out"),
            seed: elm.seed,
            projection: ProjectionConfig::default(),
            layers: 4,
            pyramid: PyramidKind::Laplacian,
            norm: NormalizationSpec::default(),
            hog: HogConfig::default(),
            pca_k: 550,
            elm_hidden: elm.hidden,
            elm_activation: elm.activation,
            elm_pinv_tol: elm.pinv_tol,
            split: SplitSpec::cross_subject(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse {v:?} as a number"))
}

pub fn pyramid_name(kind: PyramidKind) -> &'static str {
    match kind {
        PyramidKind::Gaussian => "gp",
        PyramidKind::Laplacian => "lp",
    }
}

pub fn parse_pyramid(v: &str) -> std::result::Result<PyramidKind, String> {
    match v {
        "gp" => Ok(PyramidKind::Gaussian),
        "lp" => Ok(PyramidKind::Laplacian),
        _ => Err(format!("unknown pyramid {v:?} (expected gp or lp)")),
    }
}

fn parse_activation(v: &str) -> std::result::Result<Activation, String> {
    [Activation::Sigmoid, Activation::RadialBasis, Activation::Sine]
        .into_iter()
        .find(|a| a.name() == v)
        .ok_or_else(|| format!("unknown activation {v:?} (expected sigmoid, radial-basis or sine)"))
}

fn parse_protocol(v: &str) -> std::result::Result<Protocol, String> {
    [Protocol::CrossSubjectOddEven, Protocol::SubsetTest1, Protocol::SubsetTest2, Protocol::SubsetTest3]
        .into_iter()
        .find(|p| p.name() == v)
        .ok_or_else(|| format!("unknown protocol {v:?} (expected cross_subject or subset_test1..3)"))
}

fn parse_subset(v: &str) -> std::result::Result<Option<ActionSubset>, String> {
    match v {
        "none" => Ok(None),
        "AS1" => Ok(Some(ActionSubset::AS1)),
        "AS2" => Ok(Some(ActionSubset::AS2)),
        "AS3" => Ok(Some(ActionSubset::AS3)),
        _ => Err(format!("unknown subset {v:?} (expected AS1, AS2, AS3 or none)")),
    }
}

fn core_message(e: CoreError) -> String {
    match e {
        CoreError::InvalidConfig(m) => m,
        other => other.to_string(),
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).map_err(|e| match e {
            Error::Config(msgs) => Error::Config(msgs.into_iter().map(|m| format!("{}: {m}", path.display())).collect()),
            other => other,
        })
    }

    /// Parses and validates; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut errors = Vec::new();
        let mut seen: Vec<String> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(format!("line {}: expected `key = value`, got {line:?}", n + 1));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                errors.push(format!("line {}: duplicate key {key}", n + 1));
                continue;
            }
            seen.push(key.to_string());
            if let Err(e) = cfg.set(key, value, base) {
                errors.push(format!("line {}: {key}: {e}", n + 1));
            }
        }
        errors.extend(cfg.violations());
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }

    fn set(&mut self, key: &str, v: &str, base: &Path) -> std::result::Result<(), String> {
        match key {
            "dataset" => self.dataset = base.join(v),
            "output" => self.output = base.join(v),
            "seed" => self.seed = parse_num(v)?,
            "depth_min" => self.projection.depth_min = parse_num(v)?,
            "depth_max" => self.projection.depth_max = parse_num(v)?,
            "depth_bins" => self.projection.depth_bins = parse_num(v)?,
            "layers" => self.layers = parse_num(v)?,
            "pyramid" => self.pyramid = parse_pyramid(v)?,
            "norm_w" => self.norm.w = parse_num(v)?,
            "norm_h" => self.norm.h = parse_num(v)?,
            "norm_d" => self.norm.d = parse_num(v)?,
            "hog_cell" => self.hog.cell = parse_num(v)?,
            "hog_bins" => self.hog.bins = parse_num(v)?,
            "hog_block" => self.hog.block = parse_num(v)?,
            "hog_stride" => self.hog.stride = parse_num(v)?,
            "hog_epsilon" => self.hog.l2_epsilon = parse_num(v)?,
            "pca_k" => self.pca_k = parse_num(v)?,
            "elm_hidden" => self.elm_hidden = parse_num(v)?,
            "elm_activation" => self.elm_activation = parse_activation(v)?,
            "elm_pinv_tol" => self.elm_pinv_tol = parse_num(v)?,
            "protocol" => self.split.protocol = parse_protocol(v)?,
            "subset" => self.split.subset = parse_subset(v)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Every module precondition the config violates.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |r: lpdmi_core::Result<()>| {
            if let Err(e) = r {
                out.push(core_message(e));
            }
        };
        check(self.projection.validate());
        check(self.hog.validate());
        if self.hog.cell > 0 {
            check(self.norm.validate(&self.hog));
        }
        check(self.elm().validate());
        check(self.split.validate());
        if self.layers == 0 {
            out.push("layers must be at least 1".into());
        }
        let bound = max_levels(self.projection.depth_bins, self.projection.depth_bins);
        if self.layers > bound {
            out.push(format!(
                "layers = {} exceeds floor(log2(depth_bins = {})) = {bound}",
                self.layers, self.projection.depth_bins
            ));
        }
        if self.pca_k == 0 {
            out.push("pca_k must be at least 1".into());
        }
        out
    }

    /// Rejects a level count the dataset's frame size cannot support:
    /// side and top views span `depth_bins`, the front view `height x width`.
    pub fn check_frame_dims(&self, height: usize, width: usize) -> Result<()> {
        let m = height.min(width).min(self.projection.depth_bins);
        let bound = max_levels(m, m);
        if self.layers > bound {
            return Err(Error::Config(vec![format!(
                "layers = {} exceeds floor(log2(min(height {height}, width {width}, depth_bins {}))) = {bound}",
                self.layers, self.projection.depth_bins
            )]));
        }
        Ok(())
    }

    pub fn elm(&self) -> ElmConfig {
        ElmConfig {
            hidden: self.elm_hidden,
            activation: self.elm_activation,
            seed: self.seed,
            pinv_tol: self.elm_pinv_tol,
        }
    }

    /// Smallest crop side keeping every pyramid level legal.
    pub fn min_roi(&self) -> usize {
        1usize << self.layers
    }

    /// Canonical text form; parsing it back yields the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("dataset", &self.dataset.display());
        kv("output", &self.output.display());
        kv("seed", &self.seed);
        kv("depth_min", &self.projection.depth_min);
        kv("depth_max", &self.projection.depth_max);
        kv("depth_bins", &self.projection.depth_bins);
        kv("layers", &self.layers);
        kv("pyramid", &pyramid_name(self.pyramid));
        kv("norm_w", &self.norm.w);
        kv("norm_h", &self.norm.h);
        kv("norm_d", &self.norm.d);
        kv("hog_cell", &self.hog.cell);
        kv("hog_bins", &self.hog.bins);
        kv("hog_block", &self.hog.block);
        kv("hog_stride", &self.hog.stride);
        kv("hog_epsilon", &self.hog.l2_epsilon);
        kv("pca_k", &self.pca_k);
        kv("elm_hidden", &self.elm_hidden);
        kv("elm_activation", &self.elm_activation.name());
        kv("elm_pinv_tol", &self.elm_pinv_tol);
        kv("protocol", &self.split.protocol.name());
        kv("subset", &self.split.subset.map_or("none", |s| s.name()));
        s
    }
}

/// Annotated default config, written by `lpdmi synth` next to its data.
pub fn template(dataset: &str, output: &str) -> String {
    format!(
        "\
# dataset and artifacts (relative to this file)
dataset = {dataset}            # directory of .lpd sequences
output = {output}
seed = 1                       # ELM hidden-layer seed

# projection
depth_min = 500                # sensor units, maps to intensity 0
depth_max = 4500               # sensor units, maps to intensity 255
depth_bins = 128               # slots along the depth axis of side/top views

# pyramid
layers = 4                     # at most floor(log2(min(height, width, depth_bins)))
pyramid = lp                   # lp | gp

# per-view size normalization, pixels (front h x w, side h x d, top d x w)
norm_w = 60
norm_h = 100
norm_d = 80

# hog
hog_cell = 10                  # pixels
hog_bins = 9                   # unsigned orientations over 180 degrees
hog_block = 2                  # cells
hog_stride = 10                # pixels
hog_epsilon = 1e-5

# reduction and classifier
pca_k = 550                    # capped at the train rank
elm_hidden = 1000
elm_activation = sigmoid       # sigmoid | radial-basis | sine
elm_pinv_tol = 1e-10           # relative singular-value cutoff

# protocol
protocol = cross_subject       # cross_subject | subset_test1 | subset_test2 | subset_test3
subset = none                  # AS1 | AS2 | AS3 | none
"
    )
}

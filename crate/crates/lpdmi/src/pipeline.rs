//! Dataset-level orchestration: DMI → pyramid → descriptor → scaling → PCA
//! → ELM → confusion.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lpdmi_core::depth::DepthSequence;
use lpdmi_core::elm::{self, ElmModel, LabelEncoding};
use lpdmi_core::eval::{confusion, split, SampleMeta};
use lpdmi_core::features::{assemble_descriptor, minmax_fit, pca_fit, FeatureVector, LayoutSpan, MinMaxScaler, PcaModel};
use lpdmi_core::linalg::Matrix;
use lpdmi_core::projection::compute_dmi_with_min_roi;
use lpdmi_core::pyramid::{build, Pyramid};
use lpdmi_core::ViewImage;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::{Error, Result, StageExt};
use crate::io::raw::{self, load_sequence, SequenceFormat};
use crate::report::{ExperimentReport, PredictionRecord, Timings};

/// Runs `f` on a pool of `jobs` threads (0 = one per core). Results of
/// parallel iterators inside keep their input order.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// `.lpd` files of a dataset directory, sorted by name.
pub fn sequence_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == raw::EXTENSION) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Error::Data(format!("{}: no .{} sequences", dir.display(), raw::EXTENSION)));
    }
    Ok(files)
}

pub fn sample_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn meta_of(seq: &DepthSequence) -> SampleMeta {
    SampleMeta { subject_id: seq.subject_id, action_label: seq.action_label, repetition: seq.repetition }
}

/// Front, side and top DMIs, crops grown so `cfg.layers` levels fit.
pub fn view_dmis(seq: &DepthSequence, cfg: &PipelineConfig) -> Result<[ViewImage; 3]> {
    cfg.check_frame_dims(seq.height(), seq.width())?;
    compute_dmi_with_min_roi(seq, &cfg.projection, cfg.min_roi()).stage("projection")
}

pub fn view_pyramids(dmis: &[ViewImage; 3], cfg: &PipelineConfig) -> Result<[Pyramid; 3]> {
    let [f, s, t] = dmis;
    let p = |img: &ViewImage| build(img, cfg.layers, cfg.pyramid).stage("pyramid");
    Ok([p(f)?, p(s)?, p(t)?])
}

pub fn describe(seq: &DepthSequence, cfg: &PipelineConfig) -> Result<FeatureVector> {
    let pyramids = view_pyramids(&view_dmis(seq, cfg)?, cfg)?;
    assemble_descriptor(&pyramids, &cfg.norm, &cfg.hog).stage("features")
}

/// Raw descriptors of a whole dataset, one row per sequence in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptors {
    pub names: Vec<String>,
    pub meta: Vec<SampleMeta>,
    pub values: Matrix,
    pub layout: Vec<LayoutSpan>,
}

fn load_and_describe(path: &Path, cfg: &PipelineConfig) -> Result<(SampleMeta, FeatureVector)> {
    let seq = load_sequence(path, SequenceFormat::RawLpdmi)?;
    let fv = describe(&seq, cfg).map_err(|e| match e {
        Error::Stage { stage, source } => Error::Data(format!("{}: {stage}: {source}", path.display())),
        other => other,
    })?;
    Ok((meta_of(&seq), fv))
}

pub fn extract(cfg: &PipelineConfig, jobs: usize) -> Result<Descriptors> {
    let files = sequence_files(&cfg.dataset)?;
    let rows: Vec<Result<(SampleMeta, FeatureVector)>> =
        with_jobs(jobs, || files.par_iter().map(|p| load_and_describe(p, cfg)).collect())?;
    let mut meta = Vec::with_capacity(rows.len());
    let mut vectors = Vec::with_capacity(rows.len());
    for r in rows {
        let (m, fv) = r?;
        meta.push(m);
        vectors.push(fv);
    }
    let dims = vectors[0].values.len();
    let layout = vectors[0].layout.clone();
    let mut values = Matrix::zeros(vectors.len(), dims);
    for (i, fv) in vectors.iter().enumerate() {
        values.row_mut(i).copy_from_slice(&fv.values);
    }
    log::info!("extracted {} descriptors of {dims} values", meta.len());
    Ok(Descriptors { names: files.iter().map(|p| sample_name(p)).collect(), meta, values, layout })
}

pub fn select_rows(m: &Matrix, rows: &[usize]) -> Matrix {
    Matrix::from_fn(rows.len(), m.cols(), |i, j| m[(rows[i], j)])
}

/// Scaler and PCA fitted on training rows only.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTransform {
    pub scaler: MinMaxScaler,
    pub pca: PcaModel,
}

impl FeatureTransform {
    pub fn fit(train: &Matrix, k: usize) -> Result<Self> {
        let scaler = minmax_fit(train).stage("scaling")?;
        let scaled = scaler.transform(train).stage("scaling")?;
        let pca = pca_fit(&scaled, k).stage("pca")?;
        Ok(Self { scaler, pca })
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        let scaled = self.scaler.transform(x).stage("scaling")?;
        self.pca.transform(&scaled).stage("pca")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub transform: FeatureTransform,
    pub elm: ElmModel,
}

impl TrainedModel {
    pub fn fit(train: &Matrix, labels: &[u32], cfg: &PipelineConfig) -> Result<Self> {
        let transform = FeatureTransform::fit(train, cfg.pca_k)?;
        let reduced = transform.apply(train)?;
        let elm = elm::train(&reduced, labels, &cfg.elm()).stage("elm")?;
        Ok(Self { transform, elm })
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<u32>> {
        let reduced = self.transform.apply(x)?;
        (0..reduced.rows())
            .map(|i| elm::predict(&self.elm, reduced.row(i)).map(|p| p.label).stage("elm"))
            .collect()
    }
}

/// Row indices of the configured split.
pub fn split_rows(desc: &Descriptors, cfg: &PipelineConfig) -> Result<(Vec<usize>, Vec<usize>)> {
    let s = split(&desc.meta, &cfg.split, cfg.seed).stage("split")?;
    Ok((s.train, s.test))
}

pub fn labels_of(desc: &Descriptors, rows: &[usize]) -> Vec<u32> {
    rows.iter().map(|&i| desc.meta[i].action_label).collect()
}

/// Train on the split's train side and score its test side.
pub fn evaluate_descriptors(desc: &Descriptors, cfg: &PipelineConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (train, test) = split_rows(desc, cfg)?;
    let train_labels = labels_of(desc, &train);
    let model = TrainedModel::fit(&select_rows(&desc.values, &train), &train_labels, cfg)?;
    let fit_s = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let truths = labels_of(desc, &test);
    let predicted = model.predict(&select_rows(&desc.values, &test))?;
    let classes = LabelEncoding::from_labels(&[train_labels.as_slice(), truths.as_slice()].concat());
    let matrix = confusion(&predicted, &truths, &classes).stage("confusion")?;
    let predict_s = start.elapsed().as_secs_f64();

    let predictions = test
        .iter()
        .zip(truths.iter().zip(&predicted))
        .map(|(&i, (&truth, &p))| PredictionRecord { sample: desc.names[i].clone(), truth, predicted: p })
        .collect();
    Ok(ExperimentReport::new(
        cfg.clone(),
        train.len(),
        test.len(),
        desc.values.cols(),
        model.transform.pca.k(),
        matrix,
        predictions,
        Timings { extract_s: 0.0, fit_s, predict_s },
    ))
}

/// Full run over the configured dataset.
pub fn evaluate(cfg: &PipelineConfig, jobs: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    let desc = extract(cfg, jobs)?;
    let extract_s = start.elapsed().as_secs_f64();
    let mut report = evaluate_descriptors(&desc, cfg)?;
    report.timings.extract_s = extract_s;
    Ok(report)
}

/// Per-sample metadata written beside the descriptor tensor.
#[derive(Debug, Serialize)]
pub struct DescriptorSidecar<'a> {
    pub config: &'a PipelineConfig,
    pub samples: Vec<SampleRecord<'a>>,
    pub layout: &'a [LayoutSpan],
}

#[derive(Debug, Serialize)]
pub struct SampleRecord<'a> {
    pub name: &'a str,
    #[serde(flatten)]
    pub meta: SampleMeta,
}

impl Descriptors {
    pub fn sidecar<'a>(&'a self, cfg: &'a PipelineConfig) -> DescriptorSidecar<'a> {
        DescriptorSidecar {
            config: cfg,
            samples: self.names.iter().zip(&self.meta).map(|(n, &meta)| SampleRecord { name: n, meta }).collect(),
            layout: &self.layout,
        }
    }
}

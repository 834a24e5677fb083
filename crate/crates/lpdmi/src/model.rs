//! Trained models on disk: one tensor per parameter block plus `model.json`.

use std::fs;
use std::path::Path;

use lpdmi_core::elm::{Activation, ElmModel, LabelEncoding};
use lpdmi_core::features::{MinMaxScaler, PcaModel};
use lpdmi_core::linalg::Matrix;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::io::tensor::{read_tensor, write_tensor};
use crate::io::{create_dir, write_json};
use crate::pipeline::{FeatureTransform, TrainedModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub seed: u64,
    pub hidden: usize,
    pub activation: Activation,
    pub classes: Vec<u32>,
    pub input_dims: usize,
    pub pca_components: usize,
    pub explained_variance: Vec<f64>,
}

#[derive(Serialize)]
struct ModelFile<'a> {
    #[serde(flatten)]
    meta: &'a ModelMeta,
    config: &'a PipelineConfig,
}

const TENSORS: [&str; 7] = ["scaler_min", "scaler_max", "pca_mean", "pca_components", "elm_weights", "elm_biases", "elm_beta"];

fn row(v: &[f64]) -> Matrix {
    Matrix::from_vec(1, v.len(), v.to_vec()).expect("row shape")
}

pub fn save_model(dir: &Path, model: &TrainedModel, cfg: &PipelineConfig) -> Result<()> {
    create_dir(dir)?;
    let (t, e) = (&model.transform, &model.elm);
    let blocks = [
        row(&t.scaler.min),
        row(&t.scaler.max),
        row(&t.pca.mean),
        t.pca.components.clone(),
        e.weights.clone(),
        row(&e.biases),
        e.beta.clone(),
    ];
    for (name, m) in TENSORS.iter().zip(&blocks) {
        write_tensor(&dir.join(format!("{name}.tensor")), m)?;
    }
    let meta = ModelMeta {
        seed: e.seed,
        hidden: e.hidden(),
        activation: e.activation,
        classes: e.classes.classes().to_vec(),
        input_dims: t.scaler.dims(),
        pca_components: t.pca.k(),
        explained_variance: t.pca.explained_variance.clone(),
    };
    write_json(&dir.join("model.json"), &ModelFile { meta: &meta, config: cfg })
}

pub fn load_model(dir: &Path) -> Result<TrainedModel> {
    let path = dir.join("model.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let meta: ModelMeta = serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let mut t = Vec::with_capacity(TENSORS.len());
    for name in TENSORS {
        t.push(read_tensor(&dir.join(format!("{name}.tensor")))?);
    }
    let [smin, smax, mean, components, weights, biases, beta]: [Matrix; 7] = t.try_into().expect("seven tensors");
    let d = meta.input_dims;
    let consistent = smin.cols() == d
        && smax.cols() == d
        && mean.cols() == d
        && components.rows() == d
        && components.cols() == meta.pca_components
        && weights.rows() == meta.hidden
        && weights.cols() == meta.pca_components
        && biases.cols() == meta.hidden
        && beta.rows() == meta.hidden
        && beta.cols() == meta.classes.len();
    if !consistent {
        return Err(Error::Data(format!("{}: tensor shapes disagree with model.json", dir.display())));
    }
    Ok(TrainedModel {
        transform: FeatureTransform {
            scaler: MinMaxScaler { min: smin.as_slice().to_vec(), max: smax.as_slice().to_vec() },
            pca: PcaModel {
                mean: mean.as_slice().to_vec(),
                components,
                explained_variance: meta.explained_variance,
            },
        },
        elm: ElmModel {
            activation: meta.activation,
            seed: meta.seed,
            weights,
            biases: biases.as_slice().to_vec(),
            beta,
            classes: LabelEncoding::from_labels(&meta.classes),
        },
    })
}

//! Extreme learning machine: a single hidden layer with random, frozen input
//! weights and output weights solved in closed form as `β = H⁺ Y`.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{dot, pinv, Matrix};
use crate::rng::SeededRng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Activation {
    /// `1 / (1 + e^{-z})`
    Sigmoid,
    /// `e^{-z²}`
    RadialBasis,
    /// `sin z`
    Sine,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + libm::exp(-z)),
            Activation::RadialBasis => libm::exp(-z * z),
            Activation::Sine => libm::sin(z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::RadialBasis => "radial-basis",
            Activation::Sine => "sine",
        }
    }
}

/// Sorted class ids; class `k` owns column `k` of the one-hot targets.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabelEncoding {
    classes: Vec<u32>,
}

impl LabelEncoding {
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut classes = labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        Self { classes }
    }

    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, label: u32) -> Result<usize> {
        self.classes.binary_search(&label).map_err(|_| Error::UnknownLabel(label as i64))
    }

    pub fn label(&self, index: usize) -> u32 {
        self.classes[index]
    }

    /// `n x m` one-hot target matrix.
    pub fn one_hot(&self, labels: &[u32]) -> Result<Matrix> {
        let mut y = Matrix::zeros(labels.len(), self.len());
        for (i, &l) in labels.iter().enumerate() {
            y[(i, self.index_of(l)?)] = 1.0;
        }
        Ok(y)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElmConfig {
    pub hidden: usize,
    pub activation: Activation,
    pub seed: u64,
    /// Relative singular-value cutoff of the pseudoinverse.
    pub pinv_tol: f64,
}

impl Default for ElmConfig {
    fn default() -> Self {
        Self { hidden: 1000, activation: Activation::Sigmoid, seed: 1, pinv_tol: 1e-10 }
    }
}

impl ElmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 {
            return Err(Error::InvalidConfig("elm needs at least one hidden node".into()));
        }
        if !(self.pinv_tol >= 0.0 && self.pinv_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("pinv tolerance {} must lie in [0, 1)", self.pinv_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElmModel {
    pub activation: Activation,
    pub seed: u64,
    /// `hidden x input_dim`; row `j` is `w_j`.
    pub weights: Matrix,
    pub biases: Vec<f64>,
    /// `hidden x classes`.
    pub beta: Matrix,
    pub classes: LabelEncoding,
}

impl ElmModel {
    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn hidden(&self) -> usize {
        self.weights.rows()
    }
}

/// Input weights and biases drawn i.i.d. from `U[-1, 1)`: the whole of `W`
/// row-major, then `b`, from one seeded stream.
pub fn random_hidden_layer(seed: u64, input_dim: usize, hidden: usize) -> (Matrix, Vec<f64>) {
    let mut rng = SeededRng::new(seed);
    let weights = Matrix::from_fn(hidden, input_dim, |_, _| rng.uniform(-1.0, 1.0));
    let biases = (0..hidden).map(|_| rng.uniform(-1.0, 1.0)).collect();
    (weights, biases)
}

/// `H(i, j) = g(w_j · x_i + b_j)`.
pub fn hidden_matrix(x: &Matrix, weights: &Matrix, biases: &[f64], g: Activation) -> Result<Matrix> {
    if x.cols() != weights.cols() || biases.len() != weights.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("inputs of dim {} and {} biases", weights.cols(), weights.rows()),
            found: format!("inputs of dim {} and {} biases", x.cols(), biases.len()),
        });
    }
    if let Some(pos) = x.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let mut h = Matrix::zeros(x.rows(), weights.rows());
    for i in 0..x.rows() {
        let xi = x.row(i);
        for (j, out) in h.row_mut(i).iter_mut().enumerate() {
            *out = g.apply(dot(weights.row(j), xi) + biases[j]);
        }
    }
    Ok(h)
}

/// Fits the output weights on the rows of `x`.
pub fn train(x: &Matrix, labels: &[u32], cfg: &ElmConfig) -> Result<ElmModel> {
    cfg.validate()?;
    if labels.len() != x.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} labels", x.rows()),
            found: format!("{}", labels.len()),
        });
    }
    let classes = LabelEncoding::from_labels(labels);
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let (weights, biases) = random_hidden_layer(cfg.seed, x.cols(), cfg.hidden);
    let h = hidden_matrix(x, &weights, &biases, cfg.activation)?;
    let y = classes.one_hot(labels)?;
    let beta = pinv(&h, cfg.pinv_tol)?.matmul(&y)?;
    Ok(ElmModel { activation: cfg.activation, seed: cfg.seed, weights, biases, beta, classes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// One score per class, in class-id order.
    pub scores: Vec<f64>,
    pub label: u32,
}

/// Scores `h(x) · β`; the label is the arg-max, ties going to the lowest id.
pub fn predict(model: &ElmModel, x: &[f64]) -> Result<Prediction> {
    if x.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("input of dim {}", model.input_dim()),
            found: format!("{}", x.len()),
        });
    }
    if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let m = model.classes.len();
    let mut scores = alloc::vec![0.0; m];
    for j in 0..model.hidden() {
        let hj = model.activation.apply(dot(model.weights.row(j), x) + model.biases[j]);
        for (s, &b) in scores.iter_mut().zip(model.beta.row(j)) {
            *s += hj * b;
        }
    }
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = k;
        }
    }
    Ok(Prediction { label: model.classes.label(best), scores })
}

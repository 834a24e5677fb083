use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{symmetric_eigen, Matrix};
use crate::{Error, Result};

/// Eigenvalues below this fraction of the largest are treated as zero in the
/// Gram (dual) route, where no unit component can be recovered from them.
const DUAL_RANK_TOL: f64 = 1e-10;

/// Fitted principal components.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// `dims x k`, orthonormal columns in order of decreasing variance.
    pub components: Matrix,
    /// Sample covariance (`1 / (n - 1)`) captured by each component.
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn k(&self) -> usize {
        self.components.cols()
    }

    pub fn dims(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, data: &Matrix) -> Result<Matrix> {
        let mut out = Matrix::zeros(data.rows(), self.k());
        for i in 0..data.rows() {
            let p = pca_apply(self, data.row(i))?;
            out.row_mut(i).copy_from_slice(&p);
        }
        Ok(out)
    }
}

/// Fits the top-`k` principal components of the rows of `train`.
///
/// Works on the `dims x dims` covariance when `dims <= samples`, otherwise on
/// the `samples x samples` Gram matrix of the centred data. `k` above
/// `min(samples, dims)` is capped with a warning; in the Gram route
/// components with (numerically) zero variance are dropped as well.
pub fn pca_fit(train: &Matrix, k: usize) -> Result<PcaModel> {
    let (n, d) = (train.rows(), train.cols());
    if n < 2 || d == 0 {
        return Err(Error::InvalidDimensions(format!("pca needs at least 2 samples and 1 dim, got {n}x{d}")));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("pca k must be positive".into()));
    }
    let limit = n.min(d);
    let k = if k > limit {
        log::warn!("pca k = {k} exceeds min(samples, dims) = {limit}; capping");
        limit
    } else {
        k
    };

    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, &v) in mean.iter_mut().zip(train.row(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered = Matrix::from_fn(n, d, |i, j| train[(i, j)] - mean[j]);
    let denom = (n - 1) as f64;

    let (components, explained_variance) = if d <= n {
        let cov = centered.transpose().gram_rows();
        let eig = symmetric_eigen(&cov)?;
        let comps = Matrix::from_fn(d, k, |i, c| eig.vectors[(i, c)]);
        (comps, eig.values[..k].iter().map(|v| v.max(0.0) / denom).collect::<Vec<_>>())
    } else {
        let gram = centered.gram_rows();
        let eig = symmetric_eigen(&gram)?;
        let top = eig.values.first().copied().unwrap_or(0.0);
        let kept = eig.values[..k].iter().take_while(|&&l| l > DUAL_RANK_TOL * top && l > 0.0).count();
        if kept < k {
            log::info!("pca: only {kept} of {k} requested components carry variance; dropping the rest");
        }
        let mut comps = Matrix::zeros(d, kept);
        for c in 0..kept {
            let scale = 1.0 / libm::sqrt(eig.values[c]);
            for s in 0..n {
                let u = eig.vectors[(s, c)] * scale;
                for (j, &x) in centered.row(s).iter().enumerate() {
                    comps[(j, c)] += u * x;
                }
            }
        }
        (comps, eig.values[..kept].iter().map(|v| v / denom).collect())
    };
    let mut model = PcaModel { mean, components, explained_variance };
    fix_signs(&mut model.components);
    Ok(model)
}

/// Makes the largest-magnitude entry of each component positive.
fn fix_signs(c: &mut Matrix) {
    for col in 0..c.cols() {
        let mut best = 0;
        for i in 0..c.rows() {
            if c[(i, col)].abs() > c[(best, col)].abs() {
                best = i;
            }
        }
        if c[(best, col)] < 0.0 {
            for i in 0..c.rows() {
                c[(i, col)] = -c[(i, col)];
            }
        }
    }
}

/// Projects `x - mean` onto the components.
pub fn pca_apply(model: &PcaModel, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != model.dims() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} features", model.dims()),
            found: format!("{}", x.len()),
        });
    }
    let mut out = vec![0.0; model.k()];
    for (i, (&v, &m)) in x.iter().zip(&model.mean).enumerate() {
        let c = v - m;
        if c == 0.0 {
            continue;
        }
        for (o, &w) in out.iter_mut().zip(model.components.row(i)) {
            *o += c * w;
        }
    }
    Ok(out)
}

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Per-dimension train minimum and maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Fits on the rows of `train` (at least two samples).
pub fn minmax_fit(train: &Matrix) -> Result<MinMaxScaler> {
    if train.rows() < 2 {
        return Err(Error::InvalidDimensions(format!("min-max fit needs at least 2 samples, got {}", train.rows())));
    }
    let mut min = train.row(0).to_vec();
    let mut max = min.clone();
    for i in 1..train.rows() {
        for ((lo, hi), &v) in min.iter_mut().zip(max.iter_mut()).zip(train.row(i)) {
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }
    Ok(MinMaxScaler { min, max })
}

/// `(x - min) / (max - min)` per dimension; constant dimensions map to 0.
/// Values outside the train range are not clipped.
pub fn minmax_apply(scaler: &MinMaxScaler, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != scaler.min.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} features", scaler.min.len()),
            found: format!("{}", x.len()),
        });
    }
    Ok(x.iter()
        .zip(scaler.min.iter().zip(&scaler.max))
        .map(|(&v, (&lo, &hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
        .collect())
}

impl MinMaxScaler {
    pub fn dims(&self) -> usize {
        self.min.len()
    }

    pub fn transform(&self, data: &Matrix) -> Result<Matrix> {
        let mut rows = Vec::with_capacity(data.rows());
        for i in 0..data.rows() {
            rows.push(minmax_apply(self, data.row(i))?);
        }
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, self.dims()));
        }
        Matrix::from_rows(&rows)
    }
}

//! Gaussian and Laplacian pyramids over view images.
//!
//! Level 1 is the input; each further level is blurred with the 5x5 binomial
//! kernel and decimated by two (`ceil` on odd sizes). Borders replicate the
//! edge pixel in both `reduce` and `expand`, which keeps constant images
//! constant.

use alloc::format;
use alloc::vec::Vec;

use crate::image::ViewImage;
use crate::{Error, Result};

/// One-dimensional factor of the kernel: `[1, 4, 6, 4, 1] / 16`.
pub const KERNEL_1D: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Integer form of the 5x5 smoothing window; divide by 256 for the weights.
pub const KERNEL_INT: [[u32; 5]; 5] = [
    [1, 4, 6, 4, 1],
    [4, 16, 24, 16, 4],
    [6, 24, 36, 24, 6],
    [4, 16, 24, 16, 4],
    [1, 4, 6, 4, 1],
];

/// The 5x5 smoothing window (radius 2).
///
/// It is a sampled Gaussian in spirit; the fixed integer matrix is
/// authoritative and no standard deviation is configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    pub weights: [[f64; 5]; 5],
}

impl GaussianKernel {
    pub const RADIUS: usize = 2;

    pub fn new() -> Self {
        let mut weights = [[0.0; 5]; 5];
        for (row, ints) in weights.iter_mut().zip(KERNEL_INT.iter()) {
            for (w, &k) in row.iter_mut().zip(ints.iter()) {
                *w = k as f64 / 256.0;
            }
        }
        Self { weights }
    }

    /// Weight at offset `(m, n)`, each in `-2..=2`.
    #[inline]
    pub fn at(&self, m: isize, n: isize) -> f64 {
        self.weights[(m + 2) as usize][(n + 2) as usize]
    }
}

impl Default for GaussianKernel {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PyramidKind {
    Gaussian,
    Laplacian,
}

/// Ordered levels, level 1 (largest) first.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    pub kind: PyramidKind,
    levels: Vec<ViewImage>,
}

impl Pyramid {
    pub fn levels(&self) -> &[ViewImage] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level `l` counted from 1.
    pub fn level(&self, l: usize) -> &ViewImage {
        &self.levels[l - 1]
    }
}

/// Largest legal level count for a `rows x cols` base: `floor(log2(min))`.
pub fn max_levels(rows: usize, cols: usize) -> usize {
    let m = rows.min(cols);
    if m == 0 {
        0
    } else {
        (usize::BITS - 1 - m.leading_zeros()) as usize
    }
}

#[inline]
fn half_up(n: usize) -> usize {
    n.div_ceil(2)
}

/// Blur with the 5x5 kernel and keep every second row and column.
pub fn reduce(img: &ViewImage) -> Result<ViewImage> {
    let (rows, cols) = img.dims();
    if rows < 2 || cols < 2 {
        return Err(Error::TooSmall { rows, cols });
    }
    let (out_rows, out_cols) = (half_up(rows), half_up(cols));
    // horizontal pass on every source row, evaluated at even columns only
    let mut tmp = ViewImage::filled(img.view, rows, out_cols, 0.0);
    for i in 0..rows {
        for oj in 0..out_cols {
            let c = 2 * oj as isize;
            let mut acc = 0.0;
            for (k, w) in KERNEL_1D.iter().enumerate() {
                acc += w * img.get_clamped(i as isize, c + k as isize - 2);
            }
            tmp.set(i, oj, acc);
        }
    }
    let out = ViewImage::from_fn(img.view, out_rows, out_cols, |oi, oj| {
        let r = 2 * oi as isize;
        KERNEL_1D
            .iter()
            .enumerate()
            .map(|(k, w)| w * tmp.get_clamped(r + k as isize - 2, oj as isize))
            .sum()
    });
    Ok(out)
}

/// Zero-insertion upsampling to `target` followed by the kernel scaled by 4.
///
/// Only taps landing on even (inserted-from-source) positions contribute;
/// source coordinates beyond the edge are clamped. `target` must be `2d - 1`
/// or `2d` per axis for input dims `d`.
pub fn expand(img: &ViewImage, target: (usize, usize)) -> Result<ViewImage> {
    let (rows, cols) = img.dims();
    let ok = |t: usize, d: usize| t == 2 * d || (d > 0 && t + 1 == 2 * d);
    if !ok(target.0, rows) || !ok(target.1, cols) || target.0 == 0 || target.1 == 0 {
        return Err(Error::DimensionMismatch {
            expected: format!("{}|{} x {}|{}", 2 * rows - 1, 2 * rows, 2 * cols - 1, 2 * cols),
            found: format!("{}x{}", target.0, target.1),
        });
    }
    // taps per output phase: source index and 1D weight (doubled so each axis
    // contributes half of the factor 4)
    let taps = |o: usize| -> Vec<(isize, f64)> {
        (-2isize..=2)
            .filter(|m| (o as isize + m).rem_euclid(2) == 0)
            .map(|m| ((o as isize + m).div_euclid(2), 2.0 * KERNEL_1D[(m + 2) as usize]))
            .collect()
    };
    // horizontal pass over source rows
    let mut tmp = ViewImage::filled(img.view, rows, target.1, 0.0);
    for oj in 0..target.1 {
        let tj = taps(oj);
        for i in 0..rows {
            let v = tj.iter().map(|&(s, w)| w * img.get_clamped(i as isize, s)).sum();
            tmp.set(i, oj, v);
        }
    }
    let mut out = ViewImage::filled(img.view, target.0, target.1, 0.0);
    for oi in 0..target.0 {
        let ti = taps(oi);
        for oj in 0..target.1 {
            let v = ti.iter().map(|&(s, w)| w * tmp.get_clamped(s, oj as isize)).sum();
            out.set(oi, oj, v);
        }
    }
    Ok(out)
}

/// `[img, reduce(img), reduce²(img), ...]` with `levels` entries.
pub fn build_gaussian(img: &ViewImage, levels: usize) -> Result<Pyramid> {
    let max = max_levels(img.rows(), img.cols());
    if levels < 1 || levels > max {
        return Err(Error::InvalidLevel { requested: levels, max });
    }
    let mut out = Vec::with_capacity(levels);
    out.push(img.clone());
    for _ in 1..levels {
        let next = reduce(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(Pyramid { kind: PyramidKind::Gaussian, levels: out })
}

/// `LP_l = G_l - expand(G_{l+1})` for `l < L`, and `LP_L = G_L`.
pub fn build_laplacian(gp: &Pyramid) -> Result<Pyramid> {
    if gp.kind != PyramidKind::Gaussian || gp.is_empty() {
        return Err(Error::InvalidConfig("laplacian pyramid needs a non-empty gaussian pyramid".into()));
    }
    let g = gp.levels();
    let mut out = Vec::with_capacity(g.len());
    for l in 0..g.len() - 1 {
        let up = expand(&g[l + 1], g[l].dims())?;
        out.push(g[l].sub(&up)?);
    }
    out.push(g[g.len() - 1].clone());
    Ok(Pyramid { kind: PyramidKind::Laplacian, levels: out })
}

/// Folds a Laplacian pyramid back into its base image.
pub fn reconstruct(lp: &Pyramid) -> Result<ViewImage> {
    if lp.kind != PyramidKind::Laplacian || lp.is_empty() {
        return Err(Error::InvalidConfig("reconstruction needs a non-empty laplacian pyramid".into()));
    }
    let levels = lp.levels();
    let mut acc = levels[levels.len() - 1].clone();
    for level in levels[..levels.len() - 1].iter().rev() {
        acc = level.add(&expand(&acc, level.dims())?)?;
    }
    Ok(acc)
}

/// Builds the pyramid of the requested kind with `levels` levels.
pub fn build(img: &ViewImage, levels: usize, kind: PyramidKind) -> Result<Pyramid> {
    let gp = build_gaussian(img, levels)?;
    match kind {
        PyramidKind::Gaussian => Ok(gp),
        PyramidKind::Laplacian => build_laplacian(&gp),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::View;

    fn kernel_oracle_reduce(img: &ViewImage) -> ViewImage {
        let k = GaussianKernel::new();
        ViewImage::from_fn(img.view, img.rows().div_ceil(2), img.cols().div_ceil(2), |i, j| {
            let mut acc = 0.0;
            for m in -2isize..=2 {
                for n in -2isize..=2 {
                    acc += k.at(m, n) * img.get_clamped(2 * i as isize + m, 2 * j as isize + n);
                }
            }
            acc
        })
    }

    #[test]
    fn kernel_is_normalized_and_separable() {
        let k = GaussianKernel::new();
        let sum: f64 = k.weights.iter().flatten().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        for m in 0..5 {
            for n in 0..5 {
                assert!((k.weights[m][n] - KERNEL_1D[m] * KERNEL_1D[n]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn max_levels_examples() {
        assert_eq!(max_levels(64, 64), 6);
        assert_eq!(max_levels(63, 200), 5);
        assert_eq!(max_levels(1, 9), 0);
        assert_eq!(max_levels(2, 2), 1);
    }

    #[test]
    fn reduce_dims_and_constants() {
        let img = ViewImage::filled(View::Front, 8, 6, 3.25);
        let r = reduce(&img).unwrap();
        assert_eq!(r.dims(), (4, 3));
        assert!(r.pixels().iter().all(|&v| (v - 3.25).abs() <= 1e-12));
        assert_eq!(reduce(&ViewImage::filled(View::Front, 7, 5, 0.0)).unwrap().dims(), (4, 3));
        assert_eq!(reduce(&ViewImage::filled(View::Front, 1, 1, 0.0)), Err(Error::TooSmall { rows: 1, cols: 1 }));
    }

    #[test]
    fn reduce_matches_25_tap_oracle_on_ramp() {
        let img = ViewImage::from_fn(View::Side, 5, 5, |i, j| (3 * i + 7 * j) as f64 + 0.5 * (i * j) as f64);
        let got = reduce(&img).unwrap();
        let want = kernel_oracle_reduce(&img);
        for (a, b) in got.pixels().iter().zip(want.pixels()) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn expand_constant_and_dims() {
        let img = ViewImage::filled(View::Top, 4, 3, -1.5);
        for target in [(8, 6), (7, 5), (8, 5), (7, 6)] {
            let e = expand(&img, target).unwrap();
            assert_eq!(e.dims(), target);
            assert!(e.pixels().iter().all(|&v| (v + 1.5).abs() <= 1e-12));
        }
        assert!(expand(&img, (9, 6)).is_err());
        assert!(expand(&img, (8, 4)).is_err());
    }

    #[test]
    fn expand_impulse_stamps_scaled_kernel() {
        let mut img = ViewImage::filled(View::Front, 5, 5, 0.0);
        img.set(2, 2, 1.0);
        let e = expand(&img, (10, 10)).unwrap();
        let k = GaussianKernel::new();
        // brute force: zero-insert then convolve with 4 * kernel
        for i in 0..10isize {
            for j in 0..10isize {
                let mut want = 0.0;
                for m in -2isize..=2 {
                    for n in -2isize..=2 {
                        if (i + m, j + n) == (4, 4) {
                            want += 4.0 * k.at(m, n);
                        }
                    }
                }
                assert!((e.get(i as usize, j as usize) - want).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn laplacian_of_constant() {
        let img = ViewImage::filled(View::Front, 37, 20, 0.75);
        let lp = build(&img, 4, PyramidKind::Laplacian).unwrap();
        for l in 1..4 {
            assert!(lp.level(l).pixels().iter().all(|v| v.abs() <= 1e-12));
        }
        assert!(lp.level(4).pixels().iter().all(|v| (v - 0.75).abs() <= 1e-12));
        let back = reconstruct(&lp).unwrap();
        assert!(back.pixels().iter().all(|v| (v - 0.75).abs() <= 1e-12));
    }

    #[test]
    fn single_level_pyramids() {
        let img = ViewImage::from_fn(View::Side, 4, 4, |i, j| (i + j) as f64);
        let gp = build_gaussian(&img, 1).unwrap();
        let lp = build_laplacian(&gp).unwrap();
        assert_eq!(lp.levels(), gp.levels());
        assert_eq!(reconstruct(&lp).unwrap(), img);
    }

    #[test]
    fn level_bounds_are_enforced() {
        let img = ViewImage::filled(View::Front, 64, 64, 1.0);
        assert!(build_gaussian(&img, 6).is_ok());
        assert_eq!(build_gaussian(&img, 7), Err(Error::InvalidLevel { requested: 7, max: 6 }));
        assert!(build_gaussian(&img, 0).is_err());
        let gp = build_gaussian(&ViewImage::filled(View::Front, 45, 30, 1.0), 3).unwrap();
        let dims: Vec<_> = gp.levels().iter().map(ViewImage::dims).collect();
        assert_eq!(dims, alloc::vec![(45, 30), (23, 15), (12, 8)]);
    }
}

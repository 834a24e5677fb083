//! Brute-force reference implementations used as test oracles.
//!
//! Each one takes the slowest obvious route and shares no code with the
//! library path it checks (beyond the plain data types).

#![allow(dead_code)]

use std::f64::consts::PI;

use lpdmi_core::depth::{DepthFrame, DepthSequence, MotionPattern, SyntheticSpec};
use lpdmi_core::features::HogConfig;
use lpdmi_core::linalg::Matrix;
use lpdmi_core::projection::ProjectionConfig;
use lpdmi_core::{View, ViewImage};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed ^ 0x5eed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.range(-1.0, 1.0))
    }

    pub fn matrix_scaled(&mut self, rows: usize, cols: usize, scale: f64) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.range(-scale, scale))
    }

    pub fn image(&mut self, rows: usize, cols: usize) -> ViewImage {
        ViewImage::from_fn(View::Front, rows, cols, |_, _| self.unit())
    }
}

const KERNEL: [[f64; 5]; 5] = [
    [1.0, 4.0, 6.0, 4.0, 1.0],
    [4.0, 16.0, 24.0, 16.0, 4.0],
    [6.0, 24.0, 36.0, 24.0, 6.0],
    [4.0, 16.0, 24.0, 16.0, 4.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

fn w(m: isize, n: isize) -> f64 {
    KERNEL[(m + 2) as usize][(n + 2) as usize] / 256.0
}

fn clamp(v: isize, len: usize) -> usize {
    v.max(0).min(len as isize - 1) as usize
}

/// 25-tap weighted sum at every second pixel.
pub fn reduce(img: &ViewImage) -> ViewImage {
    let (r, c) = img.dims();
    ViewImage::from_fn(img.view, r.div_ceil(2), c.div_ceil(2), |i, j| {
        let mut acc = 0.0;
        for m in -2..=2isize {
            for n in -2..=2isize {
                let (a, b) = (clamp(2 * i as isize + m, r), clamp(2 * j as isize + n, c));
                acc += w(m, n) * img.get(a, b);
            }
        }
        acc
    })
}

/// Materializes the zero-inserted image of the edge-extended source and
/// convolves it with `4·ϖ`.
pub fn expand(img: &ViewImage, target: (usize, usize)) -> ViewImage {
    let (r, c) = img.dims();
    let pad = 4isize;
    let (ur, uc) = (2 * r as isize + 2 * pad + 2, 2 * c as isize + 2 * pad + 2);
    // upsampled grid covering coordinates -pad .. 2d + pad + 1
    let mut up = vec![vec![0.0; uc as usize]; ur as usize];
    for p in -pad..ur - pad {
        for q in -pad..uc - pad {
            if p.rem_euclid(2) == 0 && q.rem_euclid(2) == 0 {
                up[(p + pad) as usize][(q + pad) as usize] = img.get(clamp(p.div_euclid(2), r), clamp(q.div_euclid(2), c));
            }
        }
    }
    ViewImage::from_fn(img.view, target.0, target.1, |i, j| {
        let mut acc = 0.0;
        for m in -2..=2isize {
            for n in -2..=2isize {
                acc += 4.0 * w(m, n) * up[(i as isize + m + pad) as usize][(j as isize + n + pad) as usize];
            }
        }
        acc
    })
}

/// Per-frame maps evaluated cell by cell: every target cell scans the whole
/// frame for pixels that land in it.
pub fn frame_maps(frame: &DepthFrame, cfg: &ProjectionConfig) -> [Vec<Vec<f64>>; 3] {
    let (h, wd, bins) = (frame.height(), frame.width(), cfg.depth_bins);
    let scaled = |d: u32| {
        let d = d.max(cfg.depth_min).min(cfg.depth_max);
        (d - cfg.depth_min) as f64 * 255.0 / (cfg.depth_max - cfg.depth_min) as f64
    };
    let bin_of = |d: u32| {
        let d = d.max(cfg.depth_min).min(cfg.depth_max);
        let frac = (d - cfg.depth_min) as u64 * bins as u64 / (cfg.depth_max - cfg.depth_min) as u64;
        (frac as usize).min(bins - 1)
    };
    let coord = |k: usize, n: usize| if n > 1 { k as f64 * (255.0 / (n - 1) as f64) } else { 0.0 };

    let mut front = vec![vec![255.0; wd]; h];
    let mut side = vec![vec![255.0f64; bins]; h];
    let mut top = vec![vec![255.0f64; wd]; bins];
    for (i, row) in front.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let d = frame.at(i, j);
            if d > 0 {
                *cell = scaled(d);
            }
        }
    }
    for i in 0..h {
        for b in 0..bins {
            for j in 0..wd {
                let d = frame.at(i, j);
                if d > 0 && bin_of(d) == b {
                    side[i][b] = side[i][b].min(coord(j, wd));
                }
            }
        }
    }
    for b in 0..bins {
        for j in 0..wd {
            for i in 0..h {
                let d = frame.at(i, j);
                if d > 0 && bin_of(d) == b {
                    top[b][j] = top[b][j].min(coord(i, h));
                }
            }
        }
    }
    [front, side, top]
}

/// Inverted temporal minimum, tight crop, divide by max.
pub fn dmi(seq: &DepthSequence, cfg: &ProjectionConfig) -> Option<[ViewImage; 3]> {
    let maps: Vec<[Vec<Vec<f64>>; 3]> = seq.frames().iter().map(|f| frame_maps(f, cfg)).collect();
    let mut out = Vec::new();
    for (v, view) in View::ALL.iter().enumerate() {
        let rows = maps[0][v].len();
        let cols = maps[0][v][0].len();
        let inv = ViewImage::from_fn(*view, rows, cols, |i, j| {
            let mut lowest = f64::INFINITY;
            for t in &maps {
                lowest = lowest.min(t[v][i][j]);
            }
            255.0 - lowest
        });
        let nz: Vec<(usize, usize)> =
            (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).filter(|&(i, j)| inv.get(i, j) > 0.0).collect();
        if nz.is_empty() {
            return None;
        }
        let top = nz.iter().map(|p| p.0).min().unwrap();
        let bottom = nz.iter().map(|p| p.0).max().unwrap();
        let left = nz.iter().map(|p| p.1).min().unwrap();
        let right = nz.iter().map(|p| p.1).max().unwrap();
        let crop = ViewImage::from_fn(*view, bottom - top + 1, right - left + 1, |i, j| inv.get(top + i, left + j));
        let max = crop.pixels().iter().cloned().fold(0.0, f64::max);
        out.push(ViewImage::from_fn(*view, crop.rows(), crop.cols(), |i, j| crop.get(i, j) / max));
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Random sparse sequence with arbitrary depths (not a blob).
pub fn random_sequence(rng: &mut Rng, max_side: usize, max_frames: usize) -> DepthSequence {
    let w = 1 + rng.below(max_side as u64) as usize;
    let h = 1 + rng.below(max_side as u64) as usize;
    let n = 1 + rng.below(max_frames as u64) as usize;
    loop {
        let frames: Vec<DepthFrame> = (0..n)
            .map(|_| {
                let depth = (0..w * h)
                    .map(|_| if rng.unit() < 0.4 { 0 } else { 1 + rng.below(5000) as u32 })
                    .collect();
                DepthFrame::new(w, h, depth).unwrap()
            })
            .collect();
        let seq = DepthSequence::new(frames, 1, 1, 1).unwrap();
        if !seq.frames().iter().all(|f| f.is_background()) {
            return seq;
        }
    }
}

pub fn blob_spec(rng: &mut Rng, pattern: MotionPattern) -> SyntheticSpec {
    let mut spec = SyntheticSpec::new(pattern, rng.below(1 << 32));
    spec.frames = 3 + rng.below(6) as usize;
    spec.noise = rng.below(40) as u32;
    spec.jitter = (rng.below(5) as i32 - 2, rng.below(5) as i32 - 2);
    spec
}

/// HOG with every pixel voting into every bin through a triangular kernel
/// over circular orientation distance.
pub fn hog(img: &ViewImage, cfg: &HogConfig) -> Vec<f64> {
    let (rows, cols) = img.dims();
    let (cy, cx) = (rows / cfg.cell, cols / cfg.cell);
    let bw = PI / cfg.bins as f64;
    let mut cells = vec![vec![vec![0.0; cfg.bins]; cx]; cy];
    for i in 0..rows {
        for j in 0..cols {
            let at = |a: isize, b: isize| img.get(clamp(a, rows), clamp(b, cols));
            let gx = at(i as isize, j as isize + 1) - at(i as isize, j as isize - 1);
            let gy = at(i as isize + 1, j as isize) - at(i as isize - 1, j as isize);
            let mag = (gx * gx + gy * gy).sqrt();
            if mag == 0.0 {
                continue;
            }
            let mut theta = gy.atan2(gx);
            while theta < 0.0 {
                theta += PI;
            }
            while theta >= PI {
                theta -= PI;
            }
            for k in 0..cfg.bins {
                let centre = k as f64 * bw;
                let mut dist = (theta - centre).abs();
                dist = dist.min(PI - dist);
                let vote = (1.0 - dist / bw).max(0.0);
                cells[i / cfg.cell][j / cfg.cell][k] += mag * vote;
            }
        }
    }
    let step = cfg.stride / cfg.cell;
    let mut out = Vec::new();
    let mut by = 0;
    while by + cfg.block <= cy {
        let mut bx = 0;
        while bx + cfg.block <= cx {
            let mut block = Vec::new();
            for a in by..by + cfg.block {
                for b in bx..bx + cfg.block {
                    block.extend_from_slice(&cells[a][b]);
                }
            }
            let norm = (block.iter().map(|v| v * v).sum::<f64>() + cfg.l2_epsilon.powi(2)).sqrt();
            out.extend(block.iter().map(|v| v / norm));
            bx += step;
        }
        by += step;
    }
    out
}

pub fn to_na(m: &Matrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &nalgebra::DMatrix<f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Largest violation of the four Penrose conditions.
pub fn penrose_error(a: &Matrix, p: &Matrix) -> f64 {
    let (a, p) = (to_na(a), to_na(p));
    let ap = &a * &p;
    let pa = &p * &a;
    let e1 = (&ap * &a - &a).amax();
    let e2 = (&pa * &p - &p).amax();
    let e3 = (&ap - ap.transpose()).amax();
    let e4 = (&pa - pa.transpose()).amax();
    e1.max(e2).max(e3).max(e4)
}

/// Least-squares residual `‖A·X − B‖_F` from nalgebra's SVD solver,
/// discarding singular values below `rel_tol · σ_max`.
pub fn dense_lstsq_residual(a: &Matrix, b: &Matrix, rel_tol: f64) -> f64 {
    let (a, b) = (to_na(a), to_na(b));
    let svd = a.clone().svd(true, true);
    let eps = rel_tol * svd.singular_values.max();
    let x = svd.solve(&b, eps).expect("svd solve");
    (&a * x - b).norm()
}

/// nalgebra's pseudoinverse with the same relative cutoff.
pub fn dense_pinv(a: &Matrix, rel_tol: f64) -> Matrix {
    let a = to_na(a);
    let eps = rel_tol * a.singular_values().max();
    from_na(&a.pseudo_inverse(eps).expect("pseudo inverse"))
}

/// `σ_max / σ_min` over singular values kept at `rel_tol`.
pub fn kept_condition(a: &Matrix, rel_tol: f64) -> f64 {
    let sv = to_na(a).singular_values();
    let smax = sv.max();
    let smin = sv.iter().cloned().filter(|&s| s >= rel_tol * smax).fold(f64::INFINITY, f64::min);
    smax / smin
}

/// Eigenvalues of the sample covariance (1 / (n − 1)), descending.
pub fn covariance_eigenvalues(x: &Matrix) -> Vec<f64> {
    let n = x.rows();
    let a = to_na(x);
    let mean = a.row_mean();
    let mut c = a.clone();
    for mut row in c.row_iter_mut() {
        row -= &mean;
    }
    let cov = c.transpose() * &c / (n as f64 - 1.0);
    let mut ev: Vec<f64> = cov.symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

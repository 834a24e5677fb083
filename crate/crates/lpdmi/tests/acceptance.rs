//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line reaches the terminal;
//! the process fails if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use lpdmi::pipeline::{evaluate, view_dmis};
use lpdmi::synth::SynthPlan;
use lpdmi::PipelineConfig;
use lpdmi_core::depth::{synth_sequence, MotionPattern};
use lpdmi_core::elm::{self, hidden_matrix, ElmConfig};
use lpdmi_core::features::{assemble_descriptor, pca_fit, HogConfig, NormalizationSpec};
use lpdmi_core::linalg::{pinv, Matrix};
use lpdmi_core::projection::{compute_dmi, ProjectionConfig};
use lpdmi_core::pyramid::{
    build, build_gaussian, build_laplacian, expand, max_levels, reconstruct, reduce, GaussianKernel, PyramidKind,
    KERNEL_1D, KERNEL_INT,
};
use lpdmi_core::{View, ViewImage};
use oracles::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pyramid_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(101);
    let (mut worst, mut cases) = (0.0f64, 0);
    for k in 0..50 {
        // sizes span 37x61 .. 128x128, ends included
        let (rows, cols) = match k {
            0 => (37, 61),
            1 => (128, 128),
            _ => (37 + rng.below(92) as usize, 61 + rng.below(68) as usize),
        };
        let img = rng.image(rows, cols);
        for levels in 1..=max_levels(rows, cols) {
            let lp = build_laplacian(&build_gaussian(&img, levels).unwrap()).unwrap();
            worst = worst.max(max_abs(reconstruct(&lp).unwrap().pixels(), img.pixels()));
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs < 10.0,
        format!("50 images, {cases} (image, L) pairs, max error {worst:.3e} (<= 1e-6), {secs:.2} s (< 10 s)"),
    )
}

fn kernel_contract() -> Outcome {
    let k = GaussianKernel::new();
    let mut mass = 0.0;
    let mut worst = 0.0f64;
    for m in 0..5 {
        for n in 0..5 {
            let w = KERNEL_INT[m][n] as f64 / 256.0;
            mass += w;
            worst = worst.max((w - KERNEL_1D[m] * KERNEL_1D[n]).abs());
            worst = worst.max((k.at(m as isize - 2, n as isize - 2) - w).abs());
        }
    }
    let mass_err = (mass - 1.0f64).abs();
    outcome(
        mass_err <= 1e-12 && worst <= 1e-12,
        format!("|sum - 1| = {mass_err:.1e}, max |w - u u^T| = {worst:.1e} (<= 1e-12)"),
    )
}

fn constant_preservation() -> Outcome {
    let mut rng = Rng::new(102);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let (rows, cols) = (2 + rng.below(80) as usize, 2 + rng.below(80) as usize);
        let c = rng.range(-500.0, 500.0);
        let img = ViewImage::filled(View::Front, rows, cols, c);
        let r = reduce(&img).unwrap();
        let e = expand(&r, (rows, cols)).unwrap();
        for p in r.pixels().iter().chain(e.pixels()) {
            worst = worst.max((p - c).abs());
        }
    }
    outcome(worst <= 1e-12, format!("40 constant images, max deviation {worst:.1e} (<= 1e-12)"))
}

fn dmi_oracle() -> Outcome {
    let mut rng = Rng::new(103);
    let cfg = ProjectionConfig { depth_bins: 8, ..ProjectionConfig::default() };
    let mut mismatches = 0;
    for _ in 0..100 {
        let seq = oracles::random_sequence(&mut rng, 8, 4);
        let lib = compute_dmi(&seq, &cfg).ok();
        let oracle = oracles::dmi(&seq, &cfg);
        if lib != oracle {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 random sequences up to 8x8x4, {mismatches} inexact"))
}

fn descriptor_dims() -> Outcome {
    let seq = synth_sequence(&lpdmi_core::depth::SyntheticSpec::new(MotionPattern::BlobDiagonal, 5), 1, 1, 1).unwrap();
    let cfg = PipelineConfig::default();
    let dmis = view_dmis(&seq, &PipelineConfig { layers: 4, ..cfg.clone() }).unwrap();
    let mut lens = Vec::new();
    for layers in [3, 4] {
        let [f, s, t] = &dmis;
        let p = |img: &ViewImage| build(img, layers, PyramidKind::Laplacian).unwrap();
        let fv = assemble_descriptor(&[p(f), p(s), p(t)], &NormalizationSpec::default(), &HogConfig::default()).unwrap();
        lens.push(fv.values.len());
    }
    outcome(lens == [15444, 20592], format!("L=3 -> {}, L=4 -> {} (want 15444, 20592)", lens[0], lens[1]))
}

fn hog_oracle() -> Outcome {
    let mut rng = Rng::new(104);
    let cfg = HogConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let img = ViewImage::from_fn(View::Front, 100, 60, |_, _| rng.unit());
        worst = worst.max(max_abs(&lpdmi_core::features::hog(&img, &cfg).unwrap(), &oracles::hog(&img, &cfg)));
    }
    outcome(worst <= 1e-8, format!("20 random 60x100 images, max difference {worst:.3e} (<= 1e-8)"))
}

fn elm_optimality() -> Outcome {
    let mut rng = Rng::new(105);
    let (mut res_worst, mut pen_worst, mut fit_worst) = (0.0f64, 0.0f64, 0.0f64);
    let (mut res_fail, mut fit_cases, mut fit_fail) = (0, 0, 0);
    let (mut kappa_at_fail, mut pen_reference) = (0.0f64, 0.0f64);
    for p in 0..50u64 {
        let n = 3 + rng.below(28) as usize;
        let d = 1 + rng.below(10) as usize;
        let hidden = 1 + rng.below(40) as usize;
        let x = rng.matrix(n, d);
        let labels: Vec<u32> = (0..n).map(|i| (i % 3) as u32).collect();
        let cfg = ElmConfig { hidden, seed: 500 + p, ..ElmConfig::default() };
        let model = elm::train(&x, &labels, &cfg).unwrap();
        let h = hidden_matrix(&x, &model.weights, &model.biases, cfg.activation).unwrap();
        let y = model.classes.one_hot(&labels).unwrap();
        let fitted = h.matmul(&model.beta).unwrap();
        let residual = fitted.sub(&y).frobenius_norm();
        let diff = (residual - oracles::dense_lstsq_residual(&h, &y, cfg.pinv_tol)).abs();
        res_worst = res_worst.max(diff);
        if diff > 1e-8 {
            res_fail += 1;
            kappa_at_fail = kappa_at_fail.max(oracles::kept_condition(&h, cfg.pinv_tol));
        }
        let pen = oracles::penrose_error(&h, &pinv(&h, cfg.pinv_tol).unwrap());
        if pen > pen_worst {
            pen_worst = pen;
            pen_reference = oracles::penrose_error(&h, &oracles::dense_pinv(&h, cfg.pinv_tol));
        }
        if hidden >= n {
            fit_cases += 1;
            let err = fitted.max_abs_diff(&y);
            fit_worst = fit_worst.max(err);
            if err > 1e-6 {
                fit_fail += 1;
                kappa_at_fail = kappa_at_fail.max(oracles::kept_condition(&h, cfg.pinv_tol));
            }
        }
    }
    let mut detail = format!(
        "50 problems: residual gap max {res_worst:.2e} ({res_fail} > 1e-8), Penrose max {pen_worst:.2e} (<= 1e-8), \
         N >= n training error max {fit_worst:.2e} over {fit_cases} cases ({fit_fail} > 1e-6)"
    );
    if res_fail + fit_fail > 0 {
        detail.push_str(&format!("; failing cases have cond(H) up to {kappa_at_fail:.1e}"));
    }
    if pen_worst > 1e-8 {
        detail.push_str(&format!("; nalgebra's pinv of the worst H scores {pen_reference:.2e}"));
    }
    outcome(res_fail == 0 && fit_fail == 0 && pen_worst <= 1e-8, detail)
}

fn pca_criterion() -> Outcome {
    let mut rng = Rng::new(106);
    let x = rng.matrix(20, 10);
    let eig = oracles::covariance_eigenvalues(&x);
    let (mut ortho, mut var) = (0.0f64, 0.0f64);
    for k in 1..=10 {
        let model = pca_fit(&x, k).unwrap();
        let g = model.components.transpose().matmul(&model.components).unwrap();
        ortho = ortho.max(g.max_abs_diff(&Matrix::identity(model.k())));
        let captured: f64 = model.explained_variance.iter().sum();
        let top: f64 = eig[..k].iter().sum();
        var = var.max((captured - top).abs());
    }
    outcome(
        ortho <= 1e-8 && var <= 1e-8,
        format!("20x10 data, k = 1..10: |C^T C - I| max {ortho:.1e}, captured-variance gap max {var:.1e} (<= 1e-8)"),
    )
}

/// Writes the 3 x 4 x 3 synthetic set under `root` and returns the default
/// config pointing at it.
fn synth_run(root: &Path) -> PipelineConfig {
    SynthPlan { classes: 3, subjects: 4, reps: 3, seed: 7 }.write(&root.join("data")).unwrap();
    PipelineConfig::parse(&lpdmi::config::template("data", "out"), root).unwrap()
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let cfg = synth_run(dir.path());
    let first = evaluate(&cfg, 0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    first.write(&cfg.output).unwrap();
    let body = std::fs::read(cfg.output.join("report.json")).unwrap();
    let again = evaluate(&cfg, 0).unwrap();
    let identical = again.to_json().as_bytes() == body.as_slice();
    outcome(
        first.accuracy >= 0.90 && secs < 60.0 && identical,
        format!(
            "3 classes x 4 subjects x 3 reps, cross-subject: accuracy {:.4} (>= 0.90), {secs:.2} s (< 60 s), rerun {}",
            first.accuracy,
            if identical { "byte-identical" } else { "DIFFERS" }
        ),
    )
}

fn energy_compaction() -> Outcome {
    let plan = SynthPlan { classes: 4, subjects: 5, reps: 1, seed: 11 };
    let cfg = PipelineConfig::default();
    let (mut holds, mut total, mut worst_ratio) = (0, 0, 0.0f64);
    for label in 1..=4 {
        for subject in 1..=5 {
            let seq = synth_sequence(&plan.spec(label, subject, 1), subject, label, 1).unwrap();
            let dmis = view_dmis(&seq, &cfg).unwrap();
            for img in &dmis {
                let lp = build(img, cfg.layers, PyramidKind::Laplacian).unwrap();
                let g1 = img.mean_abs();
                let (sum, count) = lp.levels()[..cfg.layers - 1]
                    .iter()
                    .fold((0.0, 0usize), |(s, c), l| (s + l.mean_abs() * l.pixels().len() as f64, c + l.pixels().len()));
                let ratio = sum / count as f64 / g1;
                worst_ratio = worst_ratio.max(ratio);
                total += 1;
                if ratio < 1.0 {
                    holds += 1;
                }
            }
        }
    }
    outcome(
        holds == total,
        format!("20 synthetic sequences x 3 views: LP_1..LP_(L-1) below G_1 in {holds}/{total}, worst ratio {worst_ratio:.3}"),
    )
}

/// Runs only when `LPDMI_MSR_DIR` points at converted MSRAction3D sequences.
fn msr_optional() -> Option<Outcome> {
    let dir = PathBuf::from(std::env::var_os("LPDMI_MSR_DIR")?);
    let base = PipelineConfig { dataset: dir, ..PipelineConfig::default() };
    let run = || -> lpdmi::Result<String> {
        let default = evaluate(&base, 0)?;
        let mut table = Vec::new();
        for pyramid in [PyramidKind::Gaussian, PyramidKind::Laplacian] {
            for layers in 2..=6 {
                let r = evaluate(&PipelineConfig { layers, pyramid, ..base.clone() }, 0)?;
                table.push(format!("{}{layers} {:.2}%", lpdmi::config::pyramid_name(pyramid).to_uppercase(), 100.0 * r.accuracy));
            }
        }
        Ok(format!(
            "cross-subject accuracy {:.2}% (paper: 93.41%); layer sweep {}",
            100.0 * default.accuracy,
            table.join(", ")
        ))
    };
    Some(match run() {
        Ok(detail) => outcome(true, detail),
        Err(e) => outcome(false, e.to_string()),
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("pyramid perfect reconstruction", pyramid_reconstruction),
        ("kernel contract", kernel_contract),
        ("constant preservation", constant_preservation),
        ("DMI oracle equivalence", dmi_oracle),
        ("descriptor dimension arithmetic", descriptor_dims),
        ("HOG oracle equivalence", hog_oracle),
        ("ELM optimality", elm_optimality),
        ("PCA orthonormality and variance", pca_criterion),
        ("end-to-end synthetic benchmark", end_to_end),
        ("energy compaction", energy_compaction),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| outcome(false, "panicked".to_string()));
        println!("{} {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
        failed += usize::from(!result.pass);
    }
    match msr_optional() {
        Some(r) => println!("{} MSRAction3D (optional): {}", if r.pass { "PASS" } else { "FAIL" }, r.detail),
        None => println!("SKIP MSRAction3D (optional): set LPDMI_MSR_DIR to a converted dataset to run"),
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

//! Command-line surface.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lpdmi_core::pyramid::PyramidKind;
use lpdmi_core::View;
use rayon::prelude::*;

use crate::config::{parse_pyramid, pyramid_name, template, PipelineConfig};
use crate::error::{Error, Result};
use crate::io::msr::load_msr;
use crate::io::pgm::write_pgm;
use crate::io::raw::{load_sequence, save_sequence, SequenceFormat, EXTENSION};
use crate::io::tensor::write_with_sidecar;
use crate::io::{create_dir, write_atomic, write_json};
use crate::model::save_model;
use crate::pipeline::{
    evaluate, evaluate_descriptors, extract, labels_of, sample_name, select_rows, sequence_files, split_rows,
    view_dmis, view_pyramids, with_jobs, TrainedModel,
};
use crate::report::{sweep_table, SweepRow};
use crate::synth::SynthPlan;

#[derive(Debug, Parser)]
#[command(name = "lpdmi", version, about = "Depth-video action recognition with Laplacian-pyramid depth motion images")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Pipeline config file (key = value)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed (or seeds `synth`)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for per-sequence work; 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Overrides the output directory
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset of raw_lpdmi files plus a starter config
    Synth {
        #[arg(long, default_value_t = 3)]
        classes: u32,
        #[arg(long, default_value_t = 4)]
        subjects: u32,
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
    /// Convert MSRAction3D depth .bin files (a file or a directory) to raw_lpdmi
    Convert {
        #[arg(long)]
        input: PathBuf,
    },
    /// Dump per-view DMIs and pyramid levels as PGM images
    Dmi,
    /// Write the raw descriptor matrix as a tensor with a JSON sidecar
    Features,
    /// Fit scaler, PCA and ELM on the train side and save the model
    Train,
    /// Train, test and write the experiment report
    Eval,
    /// Evaluate a grid of layer counts and pyramid kinds
    Sweep {
        /// Comma-separated layer counts, e.g. 2,3,4,5,6
        #[arg(long, value_delimiter = ',')]
        layers: Option<Vec<usize>>,
        /// Comma-separated pyramid kinds: gp, lp
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<String>>,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Synth { classes, subjects, reps } => cmd_synth(g, *classes, *subjects, *reps),
        Command::Convert { input } => cmd_convert(g, input),
        Command::Dmi => cmd_dmi(g),
        Command::Features => cmd_features(g),
        Command::Train => cmd_train(g),
        Command::Eval => cmd_eval(g),
        Command::Sweep { layers, kinds } => cmd_sweep(g, layers.as_deref(), kinds.as_deref()),
    }
}

fn required_output(g: &GlobalArgs) -> Result<&Path> {
    g.output.as_deref().ok_or_else(|| Error::Usage("--output is required".into()))
}

/// Config from `--config` with the command-line overrides applied.
fn load_config(g: &GlobalArgs) -> Result<PipelineConfig> {
    let path = g.config.as_deref().ok_or_else(|| Error::Usage("--config is required".into()))?;
    let mut cfg = PipelineConfig::load(path)?;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &g.output {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

fn cmd_synth(g: &GlobalArgs, classes: u32, subjects: u32, reps: u32) -> Result<()> {
    let out = required_output(g)?;
    let plan = SynthPlan { classes, subjects, reps, seed: g.seed.unwrap_or(7) };
    let paths = plan.write(&out.join("data"))?;
    write_atomic(&out.join("run.cfg"), template("data", "out").as_bytes())?;
    println!("wrote {} sequences to {}", paths.len(), out.join("data").display());
    Ok(())
}

fn cmd_convert(g: &GlobalArgs, input: &Path) -> Result<()> {
    let out = required_output(g)?;
    let files: Vec<PathBuf> = if input.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(input)
            .map_err(|e| Error::io(input, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "bin"))
            .collect();
        v.sort();
        v
    } else {
        vec![input.to_path_buf()]
    };
    if files.is_empty() {
        return Err(Error::Data(format!("{}: no .bin files", input.display())));
    }
    create_dir(out)?;
    let results: Vec<Result<()>> = with_jobs(g.jobs, || {
        files
            .par_iter()
            .map(|f| {
                let seq = load_msr(f)?;
                let name = format!("a{:02}_s{:02}_e{:02}.{EXTENSION}", seq.action_label, seq.subject_id, seq.repetition);
                save_sequence(&seq, &out.join(name))
            })
            .collect()
    })?;
    results.into_iter().collect::<Result<Vec<()>>>()?;
    println!("converted {} sequences into {}", files.len(), out.display());
    Ok(())
}

fn cmd_dmi(g: &GlobalArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let files = sequence_files(&cfg.dataset)?;
    let dir = cfg.output.join("dmi");
    create_dir(&dir)?;
    let results: Vec<Result<()>> = with_jobs(g.jobs, || {
        files
            .par_iter()
            .map(|f| {
                let seq = load_sequence(f, SequenceFormat::RawLpdmi)?;
                let dmis = view_dmis(&seq, &cfg)?;
                let pyramids = view_pyramids(&dmis, &cfg)?;
                let stem = sample_name(f);
                for (pyr, view) in pyramids.iter().zip(View::ALL) {
                    for (l, level) in pyr.levels().iter().enumerate() {
                        let name = format!("{stem}_{}_{}{}.pgm", view.short_name(), pyramid_name(cfg.pyramid), l + 1);
                        write_pgm(&dir.join(name), level)?;
                    }
                }
                Ok(())
            })
            .collect()
    })?;
    results.into_iter().collect::<Result<Vec<()>>>()?;
    println!("wrote DMI pyramids of {} sequences to {}", files.len(), dir.display());
    Ok(())
}

fn cmd_features(g: &GlobalArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let desc = extract(&cfg, g.jobs)?;
    create_dir(&cfg.output)?;
    let path = cfg.output.join("features.tensor");
    write_with_sidecar(&path, &desc.values, &desc.sidecar(&cfg))?;
    println!("wrote {}x{} descriptors to {}", desc.values.rows(), desc.values.cols(), path.display());
    Ok(())
}

fn cmd_train(g: &GlobalArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let desc = extract(&cfg, g.jobs)?;
    let (train, _) = split_rows(&desc, &cfg)?;
    let model = TrainedModel::fit(&select_rows(&desc.values, &train), &labels_of(&desc, &train), &cfg)?;
    let dir = cfg.output.join("model");
    save_model(&dir, &model, &cfg)?;
    println!("trained on {} sequences; model in {}", train.len(), dir.display());
    Ok(())
}

fn cmd_eval(g: &GlobalArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let report = evaluate(&cfg, g.jobs)?;
    report.write(&cfg.output)?;
    write_atomic(&cfg.output.join("config.cfg"), cfg.to_text().as_bytes())?;
    print!("{}", report.table());
    log::info!("finished in {:.2} s", report.timings.total_s());
    Ok(())
}

fn cmd_sweep(g: &GlobalArgs, layers: Option<&[usize]>, kinds: Option<&[String]>) -> Result<()> {
    let cfg = load_config(g)?;
    if layers.is_none() && kinds.is_none() {
        return Err(Error::Usage("sweep needs --layers and/or --kinds".into()));
    }
    let layers = layers.map_or_else(|| vec![cfg.layers], <[usize]>::to_vec);
    let kinds: Vec<PyramidKind> = match kinds {
        Some(k) => k.iter().map(|s| parse_pyramid(s.trim())).collect::<std::result::Result<_, _>>().map_err(Error::Usage)?,
        None => vec![cfg.pyramid],
    };
    if layers.is_empty() || kinds.is_empty() {
        return Err(Error::Usage("sweep grid is empty".into()));
    }
    // validate every grid point before running any
    let points: Vec<PipelineConfig> = kinds
        .iter()
        .flat_map(|&kind| layers.iter().map(move |&l| (kind, l)))
        .map(|(pyramid, layers)| PipelineConfig { pyramid, layers, ..cfg.clone() })
        .collect();
    let problems: Vec<String> = points
        .iter()
        .flat_map(|p| p.violations().into_iter().map(move |m| format!("{}{}: {m}", pyramid_name(p.pyramid), p.layers)))
        .collect();
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    let mut rows = Vec::with_capacity(points.len());
    for point in &points {
        let start = Instant::now();
        let desc = extract(point, g.jobs)?;
        let report = evaluate_descriptors(&desc, point)?;
        let seconds = start.elapsed().as_secs_f64();
        report.write(&cfg.output.join(format!("{}_L{}", pyramid_name(point.pyramid), point.layers)))?;
        rows.push(SweepRow {
            pyramid: pyramid_name(point.pyramid).into(),
            layers: point.layers,
            descriptor_dims: report.descriptor_dims,
            pca_components: report.pca_components,
            accuracy: report.accuracy,
            seconds,
        });
    }
    write_json(&cfg.output.join("sweep.json"), &rows)?;
    let table = sweep_table(&rows);
    write_atomic(&cfg.output.join("sweep.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(())
}

//! Command-line surface: `evaluate`, `baseline`, `synth` and `breakdown`.
//!
//! Exit codes: 0 success, 1 success with metric-undefined warnings,
//! 2 input or configuration errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::baselines::{
    backcast_assemble, constant_position, constant_position_reranked, constant_velocity, forward_integrate,
    BaselineError, StationarityRerank,
};
use crate::io::{self, IoError};
use crate::metrics::{evaluate, EvalError};
use crate::model::{ClassProfile, EvalConfig, ForecastSet};
use crate::synth::{run_breakdown_experiment, simulate_world, ExperimentConfig, SynthError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_WARNINGS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("scene {scene}: {source}")]
    Baseline {
        scene: String,
        #[source]
        source: BaselineError,
    },
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "forecast-ap", version, about = "Joint detection and forecasting evaluation")]
pub struct Cli {
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Car,
    Pedestrian,
}

impl From<ProfileArg> for ClassProfile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Car => ClassProfile::Car,
            ProfileArg::Pedestrian => ClassProfile::Pedestrian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ConstPos,
    /// Constant position with stationary-looking detections ranked first.
    ConstPosRerank,
    ConstVel,
    Forward,
    Backcast,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a prediction file against ground truth.
    Evaluate {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value_t = ProfileArg::Car)]
        profile: ProfileArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        nuscenes_clip: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-(subclass, threshold pair) PR curves.
        #[arg(long)]
        pr_csv: Option<PathBuf>,
    },
    /// Turn a detection file into a prediction file.
    Baseline {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        dets: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
        /// Anchor gate for backcast matching, meters.
        #[arg(long)]
        max_radius: Option<f64>,
    },
    /// Generate a synthetic ground-truth and detection file pair.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Compare constant-position, constant-velocity and oracle forecasters.
    Breakdown {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_experiment(path: Option<&Path>) -> Result<ExperimentConfig, AppError> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| {
        AppError::Io(IoError::Parse {
            path: path.to_path_buf(),
            source,
        })
    })
}

/// Runs a parsed command line, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, AppError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| AppError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    let result = pool.install(|| run_command(cli.command, &mut buf));
    out.write_all(&buf)?;
    result
}

fn run_command(command: Command, out: &mut Vec<u8>) -> Result<u8, AppError> {
    match command {
        Command::Evaluate {
            gt,
            pred,
            profile,
            k,
            nuscenes_clip,
            out: report_path,
            pr_csv,
        } => {
            let gt_data = io::load_gt(&gt)?;
            let timeline = gt_data.timeline;
            let pred_data = io::load_pred(&pred, &timeline)?;
            let scenes = io::pair_scenes(gt_data, pred_data, &pred)?;
            let mut cfg = EvalConfig::for_profile(profile.into())
                .with_k(k)
                .with_timeline(timeline);
            cfg.nuscenes_clip = nuscenes_clip;
            let report = evaluate(&scenes, &cfg)?;
            out.write_all(report.to_table().as_bytes())?;
            if let Some(path) = report_path {
                io::write_json(path, &report)?;
            }
            if let Some(dir) = pr_csv {
                io::write_pr_csv(dir, &report)?;
            }
            Ok(if report.warnings.is_empty() {
                EXIT_OK
            } else {
                EXIT_WARNINGS
            })
        }
        Command::Baseline {
            gt,
            dets,
            method,
            out: pred_path,
            max_radius,
        } => {
            let gt_data = io::load_gt(&gt)?;
            let det_data = io::load_dets(&dets)?;
            if det_data.timeline != gt_data.timeline {
                return Err(AppError::Usage(format!(
                    "{}: timeline differs from {}",
                    dets.display(),
                    gt.display()
                )));
            }
            let timeline = gt_data.timeline;
            let mut discarded = 0;
            let mut scenes: Vec<(String, Vec<ForecastSet>)> = Vec::new();
            for scene in &det_data.scenes {
                let sets = match method {
                    Method::ConstPos => constant_position(&scene.detections, &timeline),
                    Method::ConstPosRerank => {
                        constant_position_reranked(&scene.detections, &timeline, &StationarityRerank::default())
                    }
                    Method::ConstVel => constant_velocity(&scene.detections, &timeline),
                    Method::Forward => {
                        let vs = scene.step_velocities.as_ref().ok_or_else(|| {
                            AppError::Usage(format!(
                                "scene {}: forward needs step_velocities on every detection",
                                scene.scene_id
                            ))
                        })?;
                        forward_integrate(&scene.detections, vs, &timeline).map_err(|source| AppError::Baseline {
                            scene: scene.scene_id.clone(),
                            source,
                        })?
                    }
                    Method::Backcast => {
                        let r = backcast_assemble(
                            &scene.detections,
                            &scene.future_detections,
                            &timeline,
                            max_radius.unwrap_or(f64::INFINITY),
                        );
                        discarded += r.discarded;
                        r.forecasts
                    }
                };
                scenes.push((scene.scene_id.clone(), sets));
            }
            io::write_json(&pred_path, &io::pred_file(&scenes))?;
            let total: usize = scenes.iter().map(|(_, s)| s.len()).sum();
            writeln!(out, "wrote {total} forecast sets to {}", pred_path.display())?;
            if discarded > 0 {
                writeln!(out, "discarded {discarded} future detections without an anchor")?;
            }
            Ok(EXIT_OK)
        }
        Command::Synth { config, seed, out_dir } => {
            let cfg = load_experiment(config.as_deref())?;
            let world = simulate_world(&cfg, seed)?;
            std::fs::create_dir_all(&out_dir)?;
            let gt_scenes: Vec<_> = world.iter().map(|s| (s.scene_id.clone(), s.gts.clone())).collect();
            io::write_json(out_dir.join("gt.json"), &io::gt_file(cfg.timeline, &gt_scenes))?;
            io::write_json(out_dir.join("dets.json"), &io::dets_file(cfg.timeline, &world))?;
            writeln!(out, "wrote {} scenes to {}", world.len(), out_dir.display())?;
            Ok(EXIT_OK)
        }
        Command::Breakdown {
            config,
            seed,
            out: table_path,
        } => {
            let cfg = load_experiment(config.as_deref())?;
            let table = run_breakdown_experiment(&cfg, seed)?;
            out.write_all(table.to_table().as_bytes())?;
            if let Some(path) = table_path {
                io::write_json(path, &table)?;
            }
            Ok(EXIT_OK)
        }
    }
}

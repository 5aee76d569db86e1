//! Command-line driver: seeded training runs, greedy policy evaluation under
//! climate perturbations, model comparisons, leaching-weight sweeps, the
//! benchmark reward table, and synthetic weather export.
//!
//! Every run resolves to one [`ExperimentConfig`] (defaults, then config
//! file, then flags) and writes a manifest before doing any work, so the run
//! can be reproduced byte for byte from its output directory alone.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agropomdp::experiment::{
    compare_models, compare_table_csv, run_eval, run_training, sweep_table_csv, sweep_w3,
    verify_rewards, ExperimentConfig, ModelKind, RunKind,
};
use agropomdp::fsutil::atomic_write;
use agropomdp::weather::save_weather_csv;
use agropomdp::{Error, Result};

#[derive(Parser)]
#[command(name = "agropomdp", version, about = "Fertilization policy toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model; writes manifest, learning curve, and model file.
    Train(RunArgs),
    /// Roll out a trained model or expert schedule with no exploration.
    Eval(RunArgs),
    /// Train the configured model list under shared seeds and tabulate.
    Compare(RunArgs),
    /// Recompute the 1999 benchmark season rewards from their outcomes.
    VerifyRewards(VerifyArgs),
    /// Retrain across leaching-weight multipliers and tabulate.
    SweepW3(RunArgs),
    /// Generate the configured weather series and save it as CSV.
    SynthWeather(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file (flat key=value lines). Flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; network and exploration seeds derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Training episodes. For eval: episodes to average instead.
    #[arg(long)]
    episodes: Option<usize>,
    /// Output directory for the manifest and result files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// mdp28 | mdp10 | pomdp28 | pomdp10 | tabular-toy | expert-1 | expert-2
    #[arg(long)]
    model: Option<String>,
    /// Model file to evaluate (eval of learned models only).
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Start from full-scale trainer defaults (6000 episodes, batch 640)
    /// instead of the desk-scale ones.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also write the report as verify.csv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Config file supplying weather.* keys (source, seed, days, perturbation).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Weather generator seed (not the master seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of days to generate.
    #[arg(long)]
    days: Option<u32>,
    /// Output CSV path.
    #[arg(long, default_value = "weather.csv")]
    out: PathBuf,
}

/// Defaults, then the config file, then flags; the subcommand must agree
/// with any `mode=` the file pins.
fn resolve(args: &RunArgs, kind: RunKind) -> Result<ExperimentConfig> {
    let base = if args.full {
        ExperimentConfig::full_scale()
    } else {
        ExperimentConfig::default()
    };
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file_with(base, path)?,
        None => base,
    };
    match config.mode {
        Some(mode) if mode != kind => {
            return Err(Error::Config(format!(
                "config file sets mode={mode} but the {kind} subcommand was invoked"
            )));
        }
        _ => config.mode = Some(kind),
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(n) = args.episodes {
        if kind == RunKind::Eval {
            config.eval_episodes = n;
        } else {
            config.agent.episodes = n;
        }
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if let Some(name) = &args.model {
        config.model = Some(ModelKind::parse(name)?);
    }
    if let Some(path) = &args.model_file {
        config.eval_model_file = Some(path.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => {
            let config = resolve(&args, RunKind::Train)?;
            let output = run_training(&config)?;
            println!("manifest: {}", output.manifest_path.display());
            println!("curve: {}", output.curve_path.display());
            if let Some(model) = &output.model_path {
                println!("model: {}", model.display());
            }
        }
        Command::Eval(args) => {
            let config = resolve(&args, RunKind::Eval)?;
            let (report, table_path) = run_eval(&config)?;
            print!("{}", report.table_csv());
            println!("results: {}", table_path.display());
        }
        Command::Compare(args) => {
            let config = resolve(&args, RunKind::Compare)?;
            let rows = compare_models(&config)?;
            print!("{}", compare_table_csv(&rows));
            println!("results: {}", config.out_dir.display());
        }
        Command::VerifyRewards(args) => {
            let report = verify_rewards();
            print!("{}", report.table_csv());
            if let Some(dir) = &args.out {
                std::fs::create_dir_all(dir)?;
                atomic_write(&dir.join("verify.csv"), report.table_csv().as_bytes())?;
            }
            if !report.all_gated_pass() {
                return Err(Error::Domain(
                    "benchmark rewards did not reconstruct within tolerance".into(),
                ));
            }
        }
        Command::SweepW3(args) => {
            let config = resolve(&args, RunKind::Sweep)?;
            let rows = sweep_w3(&config)?;
            print!("{}", sweep_table_csv(&rows));
            println!("results: {}", config.out_dir.display());
        }
        Command::SynthWeather(args) => {
            let mut config = match &args.config {
                Some(path) => ExperimentConfig::from_file(path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(seed) = args.seed {
                config.weather_seed = seed;
            }
            if let Some(days) = args.days {
                config.weather_days = days;
            }
            config.validate()?;
            let series = config.build_weather()?;
            save_weather_csv(&args.out, &series)?;
            println!("wrote {} days to {}", series.len(), args.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.category());
            ExitCode::FAILURE
        }
    }
}

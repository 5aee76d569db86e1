//! Multi-run drivers: side-by-side model comparison under identical seeds
//! and weather, and the leaching-weight sweep.

use std::path::Path;

use super::config::{ExperimentConfig, ManifestMeta, ModelKind, RunKind};
use super::training::{train_dqn, MANIFEST_FILE};
use crate::env::EpisodeSummary;
use crate::error::{Error, Result};
use crate::fsutil::atomic_write;
use crate::neural::save_model;
use crate::rl::{run_episode, RunMode};
use crate::weather::WeatherSeries;

const COMPARE_FILE: &str = "compare.csv";
const SWEEP_FILE: &str = "sweep.csv";

/// Seed-averaged outcome of one model in a comparison run.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub model: ModelKind,
    pub mean_reward: f64,
    pub mean_yield: f64,
    pub mean_nitrogen: f64,
    pub mean_leaching: f64,
}

/// Seed-averaged outcome of one leaching-weight setting.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub multiplier: f64,
    pub mean_reward: f64,
    pub mean_yield: f64,
    pub mean_nitrogen: f64,
    pub mean_leaching: f64,
    /// Fertilizer mass applied on days with nonzero rainfall (kg/ha).
    pub mean_rainy_application: f64,
}

/// Total nitrogen applied on rainy days. `schedule[i]` is the application
/// decided for weather day `planting_offset + i`.
pub fn rainy_application_mass(
    schedule: &[f64],
    weather: &WeatherSeries,
    planting_offset: usize,
) -> f64 {
    schedule
        .iter()
        .enumerate()
        .map(|(i, &n)| match weather.records().get(planting_offset + i) {
            Some(record) if record.rain > 0.0 => n,
            _ => 0.0,
        })
        .sum()
}

/// Trains one model under one master seed, persists its curve and weights
/// under `stem`, then rolls it out greedily once (the environment is
/// deterministic, so a single rollout is the exact eval outcome).
fn train_and_evaluate(
    config: &ExperimentConfig,
    model: ModelKind,
    seed: u64,
    stem: &str,
) -> Result<(EpisodeSummary, f64)> {
    let (mut agent, curve) = train_dqn(config, model, seed)?;
    atomic_write(&config.out_dir.join(format!("curve-{stem}.csv")), curve.as_bytes())?;
    save_model(&config.out_dir.join(format!("model-{stem}.bin")), &agent.to_model())?;

    let mode = model.observation_mode().expect("trained models have a mode");
    let mut env = config.build_env(mode)?;
    run_episode(&mut agent, &mut env, RunMode::Eval)?;
    let summary = env.summary().clone();
    let rainy = rainy_application_mass(
        &summary.schedule,
        &env.config().weather,
        env.config().planting_offset,
    );
    Ok((summary, rainy))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Trains every model in `compare.models` under the identical seed list and
/// weather, evaluates each greedily, and writes one seed-averaged row per
/// model to `compare.csv` (plus per-run curve and model files).
pub fn compare_models(config: &ExperimentConfig) -> Result<Vec<CompareRow>> {
    config.validate()?;
    if config.compare_models.len() < 2 {
        return Err(Error::Config(format!(
            "compare needs at least two models in compare.models, got {}",
            config.compare_models.len()
        )));
    }
    for &model in &config.compare_models {
        if !model.is_learned() {
            return Err(Error::Config(format!(
                "compare trains every entry; {model} is not trainable"
            )));
        }
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let started = std::time::Instant::now();

    let mut manifest_config = config.clone();
    manifest_config.mode = Some(RunKind::Compare);
    let mut artifacts = vec![("table".to_string(), COMPARE_FILE.to_string())];
    for &model in &config.compare_models {
        for &seed in &config.seeds {
            artifacts.push((format!("curve-{model}-s{seed}"), format!("curve-{model}-s{seed}.csv")));
            artifacts.push((format!("model-{model}-s{seed}"), format!("model-{model}-s{seed}.bin")));
        }
    }
    let mut meta = ManifestMeta::new(artifacts);
    let manifest_path = config.out_dir.join(MANIFEST_FILE);
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;

    let mut rows = Vec::with_capacity(config.compare_models.len());
    for &model in &config.compare_models {
        let mut rewards = Vec::new();
        let mut yields = Vec::new();
        let mut nitrogen = Vec::new();
        let mut leaching = Vec::new();
        for &seed in &config.seeds {
            let (summary, _) = train_and_evaluate(config, model, seed, &format!("{model}-s{seed}"))?;
            rewards.push(summary.cumulative_reward);
            yields.push(summary.yield_kg_ha);
            nitrogen.push(summary.nitrogen_input);
            leaching.push(summary.leaching_total);
        }
        rows.push(CompareRow {
            model,
            mean_reward: mean(&rewards),
            mean_yield: mean(&yields),
            mean_nitrogen: mean(&nitrogen),
            mean_leaching: mean(&leaching),
        });
    }
    write_compare_table(&config.out_dir, &rows)?;

    meta.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;
    Ok(rows)
}

/// The `compare.csv` table as a string (header plus one row per model).
pub fn compare_table_csv(rows: &[CompareRow]) -> String {
    let mut table = String::from("model,mean_reward,mean_yield,mean_nitrogen,mean_leaching\n");
    for row in rows {
        table.push_str(&format!(
            "{},{},{},{},{}\n",
            row.model, row.mean_reward, row.mean_yield, row.mean_nitrogen, row.mean_leaching
        ));
    }
    table
}

fn write_compare_table(out_dir: &Path, rows: &[CompareRow]) -> Result<()> {
    atomic_write(&out_dir.join(COMPARE_FILE), compare_table_csv(rows).as_bytes())
}

/// Retrains the configured model once per leaching-weight multiplier (times
/// the seed list) and reports seed-averaged totals per multiplier, including
/// how much fertilizer lands on rainy days. Writes `sweep.csv`.
pub fn sweep_w3(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let model = config.require_model()?;
    if !model.is_learned() {
        return Err(Error::Config(format!(
            "the leaching-weight sweep retrains the model; {model} is not trainable"
        )));
    }
    if config.sweep_multipliers.is_empty() {
        return Err(Error::Config("sweep.multipliers must list at least one value".into()));
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let started = std::time::Instant::now();

    let mut manifest_config = config.clone();
    manifest_config.mode = Some(RunKind::Sweep);
    let mut artifacts = vec![("table".to_string(), SWEEP_FILE.to_string())];
    for &multiplier in &config.sweep_multipliers {
        for &seed in &config.seeds {
            let stem = format!("w3x{multiplier}-s{seed}");
            artifacts.push((format!("curve-{stem}"), format!("curve-{stem}.csv")));
            artifacts.push((format!("model-{stem}"), format!("model-{stem}.bin")));
        }
    }
    let mut meta = ManifestMeta::new(artifacts);
    let manifest_path = config.out_dir.join(MANIFEST_FILE);
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;

    let mut rows = Vec::with_capacity(config.sweep_multipliers.len());
    for &multiplier in &config.sweep_multipliers {
        let mut run_config = config.clone();
        run_config.w3_multiplier = multiplier;
        let mut rewards = Vec::new();
        let mut yields = Vec::new();
        let mut nitrogen = Vec::new();
        let mut leaching = Vec::new();
        let mut rainy = Vec::new();
        for &seed in &config.seeds {
            let stem = format!("w3x{multiplier}-s{seed}");
            let (summary, rainy_mass) = train_and_evaluate(&run_config, model, seed, &stem)?;
            rewards.push(summary.cumulative_reward);
            yields.push(summary.yield_kg_ha);
            nitrogen.push(summary.nitrogen_input);
            leaching.push(summary.leaching_total);
            rainy.push(rainy_mass);
        }
        rows.push(SweepRow {
            multiplier,
            mean_reward: mean(&rewards),
            mean_yield: mean(&yields),
            mean_nitrogen: mean(&nitrogen),
            mean_leaching: mean(&leaching),
            mean_rainy_application: mean(&rainy),
        });
    }
    atomic_write(&config.out_dir.join(SWEEP_FILE), sweep_table_csv(&rows).as_bytes())?;

    meta.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;
    Ok(rows)
}

/// The `sweep.csv` table as a string (header plus one row per multiplier).
pub fn sweep_table_csv(rows: &[SweepRow]) -> String {
    let mut table = String::from(
        "multiplier,mean_reward,mean_yield,mean_nitrogen,mean_leaching,mean_rainy_application\n",
    );
    for row in rows {
        table.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.multiplier,
            row.mean_reward,
            row.mean_yield,
            row.mean_nitrogen,
            row.mean_leaching,
            row.mean_rainy_application
        ));
    }
    table
}

//! Greedy policy evaluation: fixed fertilization schedules and saved model
//! files, rolled out at ε = 0 against a configured (possibly perturbed)
//! season.

use std::path::PathBuf;
use std::time::Instant;

use super::config::{ExperimentConfig, ManifestMeta, ModelKind, RunKind};
use super::training::MANIFEST_FILE;
use super::{derive_seed, STREAM_AGENT};
use crate::env::{expert_schedule, EpisodeSummary, ObservationMode, ACTION_COUNT};
use crate::error::{Error, Result};
use crate::fsutil::atomic_write;
use crate::neural::load_model;
use crate::rl::{run_episode, QAgent, QNetwork, RunMode};

const EVAL_FILE: &str = "eval.csv";
const SCHEDULE_FILE: &str = "schedule.csv";

/// Statistics over n greedy rollouts plus the first episode's per-day
/// application schedule.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub model: ModelKind,
    pub episodes: usize,
    /// Cumulative reward of every episode. The environment is deterministic,
    /// so these are identical; keeping them all makes that checkable.
    pub rewards: Vec<f64>,
    pub mean_reward: f64,
    pub mean_yield: f64,
    pub mean_nitrogen: f64,
    pub mean_leaching: f64,
    /// Nitrogen applied on each day of episode 1 (kg/ha).
    pub schedule: Vec<f64>,
}

impl EvalReport {
    fn from_summaries(model: ModelKind, summaries: &[EpisodeSummary]) -> EvalReport {
        let n = summaries.len() as f64;
        let mean = |f: fn(&EpisodeSummary) -> f64| summaries.iter().map(f).sum::<f64>() / n;
        EvalReport {
            model,
            episodes: summaries.len(),
            rewards: summaries.iter().map(|s| s.cumulative_reward).collect(),
            mean_reward: mean(|s| s.cumulative_reward),
            mean_yield: mean(|s| s.yield_kg_ha),
            mean_nitrogen: mean(|s| s.nitrogen_input),
            mean_leaching: mean(|s| s.leaching_total),
            schedule: summaries[0].schedule.clone(),
        }
    }

    pub fn table_csv(&self) -> String {
        format!(
            "model,episodes,mean_reward,mean_yield,mean_nitrogen,mean_leaching\n{},{},{},{},{},{}\n",
            self.model,
            self.episodes,
            self.mean_reward,
            self.mean_yield,
            self.mean_nitrogen,
            self.mean_leaching
        )
    }

    /// Day-by-day applications of episode 1, days numbered from 1.
    pub fn schedule_csv(&self) -> String {
        let mut out = String::from("day,applied_n\n");
        for (i, n) in self.schedule.iter().enumerate() {
            out.push_str(&format!("{},{n}\n", i + 1));
        }
        out
    }
}

/// Rolls the configured policy out greedily for `eval.episodes` episodes.
///
/// Fixed schedules run as-is; learned models load from `eval.model_file` and
/// must match the configured observation mode in architecture, input width,
/// and action count (a mismatch is a configuration error). Pure compute; use
/// [`run_eval`] for the file-writing variant.
pub fn evaluate_policy(config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let model = config.require_model()?;
    let summaries = match model {
        ModelKind::TabularToy => {
            return Err(Error::Config(
                "the tabular chain demo has no crop policy to evaluate".into(),
            ));
        }
        ModelKind::Expert1 | ModelKind::Expert2 => {
            let plan = expert_schedule(model.expert_variant().unwrap())?;
            // Schedules never read observations; any mode works.
            let mut env = config.build_env(ObservationMode::Mdp10)?;
            (0..config.eval_episodes)
                .map(|_| env.run_plan(&plan))
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            let mode = model.observation_mode().expect("learned models have a mode");
            let path = config.eval_model_file.as_ref().ok_or_else(|| {
                Error::Config(format!(
                    "eval of learned model {model} requires eval.model_file=<path>"
                ))
            })?;
            let stored = load_model(path)?;
            if stored.is_recurrent() != mode.uses_window() {
                return Err(Error::Config(format!(
                    "model file {} is {} but mode {} expects a {} network",
                    path.display(),
                    if stored.is_recurrent() { "recurrent" } else { "feedforward" },
                    mode.name(),
                    if mode.uses_window() { "recurrent" } else { "feedforward" },
                )));
            }
            if stored.input_dim() != mode.variable_count() {
                return Err(Error::Config(format!(
                    "model file {} takes {} inputs but mode {} emits {}",
                    path.display(),
                    stored.input_dim(),
                    mode.name(),
                    mode.variable_count()
                )));
            }
            if stored.output_dim() != ACTION_COUNT {
                return Err(Error::Config(format!(
                    "model file {} produces {} outputs but the environment has {} actions",
                    path.display(),
                    stored.output_dim(),
                    ACTION_COUNT
                )));
            }
            let mut env = config.build_env(mode)?;
            let mut agent = QAgent::new(
                QNetwork::from_model(stored),
                config.resolved_agent_for(mode),
                derive_seed(config.master_seed, STREAM_AGENT),
            )?;
            let mut summaries = Vec::with_capacity(config.eval_episodes);
            for _ in 0..config.eval_episodes {
                run_episode(&mut agent, &mut env, RunMode::Eval)?;
                summaries.push(env.summary().clone());
            }
            summaries
        }
    };
    Ok(EvalReport::from_summaries(model, &summaries))
}

/// [`evaluate_policy`] plus artifacts: writes the manifest, the one-row
/// statistics table, and the episode-1 schedule into `out_dir`.
pub fn run_eval(config: &ExperimentConfig) -> Result<(EvalReport, PathBuf)> {
    config.validate()?;
    config.require_model()?;
    std::fs::create_dir_all(&config.out_dir)?;
    let started = Instant::now();

    let mut manifest_config = config.clone();
    manifest_config.mode = Some(RunKind::Eval);
    let mut meta = ManifestMeta::new(vec![
        ("eval".to_string(), EVAL_FILE.to_string()),
        ("schedule".to_string(), SCHEDULE_FILE.to_string()),
    ]);
    let manifest_path = config.out_dir.join(MANIFEST_FILE);
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;

    let report = evaluate_policy(config)?;
    let table_path = config.out_dir.join(EVAL_FILE);
    atomic_write(&table_path, report.table_csv().as_bytes())?;
    atomic_write(&config.out_dir.join(SCHEDULE_FILE), report.schedule_csv().as_bytes())?;

    meta.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;
    Ok((report, table_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::training::build_network;
    use crate::neural::save_model;

    fn eval_config(model: ModelKind) -> ExperimentConfig {
        let mut config = ExperimentConfig::default();
        config.model = Some(model);
        config.eval_episodes = 3;
        config
    }

    #[test]
    fn expert_2_applies_exactly_224_kg() {
        let report = evaluate_policy(&eval_config(ModelKind::Expert2)).unwrap();
        assert_eq!(report.mean_nitrogen, 224.0);
        assert_eq!(report.schedule.iter().sum::<f64>(), 224.0);
        assert!(report.mean_yield > 3000.0, "yield {}", report.mean_yield);
    }

    #[test]
    fn expert_1_applies_exactly_56_kg() {
        let report = evaluate_policy(&eval_config(ModelKind::Expert1)).unwrap();
        assert_eq!(report.mean_nitrogen, 56.0);
    }

    #[test]
    fn deterministic_rollouts_have_zero_variance() {
        let report = evaluate_policy(&eval_config(ModelKind::Expert2)).unwrap();
        assert_eq!(report.rewards.len(), 3);
        assert!(report.rewards.windows(2).all(|w| w[0] == w[1]), "{:?}", report.rewards);
    }

    #[test]
    fn hotter_season_lowers_expert_yield() {
        let baseline = evaluate_policy(&eval_config(ModelKind::Expert2)).unwrap();
        let mut shifted_config = eval_config(ModelKind::Expert2);
        shifted_config.perturbation.temp_shift = 5.0;
        let shifted = evaluate_policy(&shifted_config).unwrap();
        assert!(
            shifted.mean_yield < baseline.mean_yield,
            "baseline {} vs +5C {}",
            baseline.mean_yield,
            shifted.mean_yield
        );
    }

    #[test]
    fn learned_model_requires_a_file() {
        let err = evaluate_policy(&eval_config(ModelKind::Mdp10)).unwrap_err();
        assert_eq!(err.category(), "config");
        assert!(err.to_string().contains("eval.model_file"), "{err}");
    }

    #[test]
    fn untrained_model_file_evaluates_greedily() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = eval_config(ModelKind::Mdp10);
        config.network.head_hidden = vec![8];
        let network = build_network(&config, ModelKind::Mdp10, 3).unwrap();
        let path = dir.path().join("model.bin");
        save_model(&path, &network.into_model()).unwrap();
        config.eval_model_file = Some(path);
        let report = evaluate_policy(&config).unwrap();
        assert_eq!(report.episodes, 3);
        assert!(report.rewards.windows(2).all(|w| w[0] == w[1]));
        assert!(!report.schedule.is_empty());
    }

    #[test]
    fn architecture_mode_mismatches_are_config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = eval_config(ModelKind::Mdp10);
        config.network.head_hidden = vec![4];

        // Feedforward file offered to a windowed mode.
        let ff = build_network(&config, ModelKind::Mdp10, 0).unwrap();
        let ff_path = dir.path().join("ff.bin");
        save_model(&ff_path, &ff.into_model()).unwrap();
        let mut pomdp = eval_config(ModelKind::Pomdp10);
        pomdp.eval_model_file = Some(ff_path.clone());
        let err = evaluate_policy(&pomdp).unwrap_err();
        assert_eq!(err.category(), "config");
        assert!(err.to_string().contains("recurrent"), "{err}");

        // Input width mismatch: a 28-input file against the 10-variable mode.
        let wide = build_network(&config, ModelKind::Mdp28, 0).unwrap();
        let wide_path = dir.path().join("wide.bin");
        save_model(&wide_path, &wide.into_model()).unwrap();
        let mut narrow = eval_config(ModelKind::Mdp10);
        narrow.eval_model_file = Some(wide_path);
        let err = evaluate_policy(&narrow).unwrap_err();
        assert_eq!(err.category(), "config");
        assert!(err.to_string().contains("inputs"), "{err}");
    }

    #[test]
    fn toy_model_cannot_be_evaluated() {
        let err = evaluate_policy(&eval_config(ModelKind::TabularToy)).unwrap_err();
        assert_eq!(err.category(), "config");
    }

    #[test]
    fn run_eval_writes_table_schedule_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = eval_config(ModelKind::Expert2);
        config.out_dir = dir.path().to_path_buf();
        let (report, table_path) = run_eval(&config).unwrap();
        let table = std::fs::read_to_string(&table_path).unwrap();
        assert!(table.starts_with("model,episodes,"));
        assert!(table.contains("expert-2"));
        let schedule = std::fs::read_to_string(dir.path().join("schedule.csv")).unwrap();
        assert_eq!(schedule.lines().count(), report.schedule.len() + 1);
        // Day-40 application from the two-shot schedule shows up on row 40.
        assert!(schedule.lines().any(|l| l == "40,112"), "{schedule}");
        let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("mode=eval"));
    }
}

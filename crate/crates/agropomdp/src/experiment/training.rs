//! Training drivers: the deep Q-learning loop against the crop environment
//! and the small tabular chain demo, both wrapped in manifest/artifact
//! bookkeeping.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, ManifestMeta, ModelKind, RunKind};
use super::{derive_seed, STREAM_AGENT, STREAM_NETWORK};
use crate::env::ACTION_COUNT;
use crate::error::{Error, Result};
use crate::fsutil::atomic_write;
use crate::neural::{save_model, MlpNetwork, MlpSpec, RecurrentQNetwork, RecurrentSpec};
use crate::rl::{chain_mdp, run_episode, value_iteration, QAgent, QNetwork, RunMode, TabularQ};

pub(crate) const MANIFEST_FILE: &str = "manifest.txt";
const CURVE_FILE: &str = "curve.csv";
const MODEL_FILE: &str = "model.bin";
/// One-line header of every training-curve CSV; one row per episode follows.
pub const CURVE_HEADER: &str = "episode,reward,steps,mean_loss,epsilon";

/// Paths of the files a training run wrote.
#[derive(Debug, Clone)]
pub struct TrainingOutput {
    pub manifest_path: PathBuf,
    pub curve_path: PathBuf,
    /// Absent for the tabular demo, which has no network to persist.
    pub model_path: Option<PathBuf>,
}

/// Trains the configured model and writes manifest, per-episode curve, and
/// the final model file into `out_dir`. The manifest lands before any
/// compute starts and is finalized with the wall clock afterwards; reruns
/// with the same config produce byte-identical curve and model files.
pub fn run_training(config: &ExperimentConfig) -> Result<TrainingOutput> {
    config.validate()?;
    let model = config.require_model()?;
    if model.expert_variant().is_some() {
        return Err(Error::Config(format!(
            "model {model} is a fixed schedule with nothing to train; use eval"
        )));
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let started = Instant::now();

    let mut manifest_config = config.clone();
    manifest_config.mode = Some(RunKind::Train);
    let mut artifacts = vec![("curve".to_string(), CURVE_FILE.to_string())];
    if model != ModelKind::TabularToy {
        artifacts.push(("model".to_string(), MODEL_FILE.to_string()));
    }
    let mut meta = ManifestMeta::new(artifacts);
    let manifest_path = config.out_dir.join(MANIFEST_FILE);
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;

    let curve_path = config.out_dir.join(CURVE_FILE);
    let model_path = if model == ModelKind::TabularToy {
        let curve = tabular_toy_curve(config.master_seed)?;
        atomic_write(&curve_path, curve.as_bytes())?;
        None
    } else {
        let (agent, curve) = train_dqn(config, model, config.master_seed)?;
        atomic_write(&curve_path, curve.as_bytes())?;
        let path = config.out_dir.join(MODEL_FILE);
        save_model(&path, &agent.to_model())?;
        Some(path)
    };

    meta.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
    atomic_write(&manifest_path, manifest_config.manifest_text(&meta).as_bytes())?;
    Ok(TrainingOutput { manifest_path, curve_path, model_path })
}

/// Builds a fresh Q-network for the model's observation mode: recurrent for
/// windowed modes, feedforward otherwise, both sized by the config.
pub(crate) fn build_network(
    config: &ExperimentConfig,
    model: ModelKind,
    seed: u64,
) -> Result<QNetwork> {
    let mode = model
        .observation_mode()
        .ok_or_else(|| Error::Config(format!("model {model} has no trainable network")))?;
    let input = mode.variable_count();
    if mode.uses_window() {
        let spec = RecurrentSpec {
            input,
            gru_hidden: config.network.gru_hidden,
            head_hidden: config.network.head_hidden.clone(),
            outputs: ACTION_COUNT,
        };
        Ok(QNetwork::Recurrent(RecurrentQNetwork::init(&spec, seed)?))
    } else {
        let spec = MlpSpec::new(input, config.network.head_hidden.clone(), ACTION_COUNT);
        Ok(QNetwork::Feedforward(MlpNetwork::init(&spec, seed)?))
    }
}

/// Full training loop for one learned model under one master seed. Returns
/// the trained agent and the per-episode curve CSV (header plus one row per
/// episode: reward, steps, mean loss once training has started, and ε).
pub(crate) fn train_dqn(
    config: &ExperimentConfig,
    model: ModelKind,
    master_seed: u64,
) -> Result<(QAgent, String)> {
    let mode = model
        .observation_mode()
        .ok_or_else(|| Error::Config(format!("model {model} has no trainable network")))?;
    let mut env = config.build_env(mode)?;
    let network = build_network(config, model, derive_seed(master_seed, STREAM_NETWORK))?;
    let agent_config = config.resolved_agent_for(mode);
    let schedule = agent_config.clone();
    let mut agent = QAgent::new(network, agent_config, derive_seed(master_seed, STREAM_AGENT))?;

    let mut curve = String::from(CURVE_HEADER);
    curve.push('\n');
    for episode in 0..schedule.episodes {
        let epsilon = schedule.epsilon_for_episode(episode);
        let trace = run_episode(&mut agent, &mut env, RunMode::Train { epsilon })?;
        let loss = trace.mean_loss().map(|l| l.to_string()).unwrap_or_default();
        curve.push_str(&format!(
            "{episode},{},{},{loss},{epsilon}\n",
            trace.total_reward(),
            trace.steps()
        ));
    }
    Ok((agent, curve))
}

/// Chain-walk demo: Q-learning under a uniform-random behavior policy against
/// the planning solution, checkpointing the max-norm distance every 1000
/// updates. Fixed recipe (4-state chain, slip 0.05, goal reward 0.05,
/// discount 0.7, per-pair harmonic step sizes); only the walk seed varies.
fn tabular_toy_curve(seed: u64) -> Result<String> {
    const TOTAL_UPDATES: usize = 50_000;
    const CHECKPOINT_EVERY: usize = 1_000;
    let gamma = 0.7;
    let mdp = chain_mdp(0.05, 0.05);
    let oracle = value_iteration(&mdp, gamma, 1e-12, 10_000)?;

    let mut table = TabularQ::new(mdp.states(), mdp.actions())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visits = vec![0u32; mdp.states() * mdp.actions()];
    let mut s = 0usize;
    let mut curve = String::from("updates,max_norm_distance\n");
    for step in 1..=TOTAL_UPDATES {
        let a = rng.random_range(0..mdp.actions());
        let (next, reward) = mdp.sample(s, a, &mut rng)?;
        let n = &mut visits[s * mdp.actions() + a];
        *n += 1;
        let alpha = 4.0 / (4.0 + *n as f64);
        table.update(s, a, reward, next, false, alpha, gamma)?;
        s = next;
        if step % CHECKPOINT_EVERY == 0 {
            curve.push_str(&format!("{step},{}\n", table.max_norm_distance(&oracle)?));
        }
    }
    Ok(curve)
}

//! Run configuration: a flat `key=value` text format, the resolved
//! [`ExperimentConfig`], and manifest serialization.
//!
//! The format is deliberately plain so manifests diff cleanly: one `key=value`
//! per line, `#` starts a full-line comment, blank lines are skipped, and
//! dotted prefixes group related keys (`agent.gamma=0.99`). Unknown and
//! duplicate keys are rejected; `manifest.*` keys are metadata written by
//! completed runs and are ignored on load, which is what makes a manifest
//! directly reusable as a config file.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::env::{
    CropEnv, EnvConfig, ObservationMode, RewardWeights, DEFAULT_EPISODE_DAYS,
    DEFAULT_W3_MULTIPLIER,
};
use crate::error::{Error, Result};
use crate::rl::AgentConfig;
use crate::weather::{
    load_weather_csv, synthesize_weather, ClimateParams, PerturbationSpec, WeatherSeries,
};

/// What a run does. Stored in manifests so a rerun dispatches identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Train,
    Eval,
    Compare,
    VerifyRewards,
    Sweep,
}

impl RunKind {
    pub fn name(&self) -> &'static str {
        match self {
            RunKind::Train => "train",
            RunKind::Eval => "eval",
            RunKind::Compare => "compare",
            RunKind::VerifyRewards => "verify-rewards",
            RunKind::Sweep => "sweep",
        }
    }

    pub fn parse(text: &str) -> Result<RunKind> {
        match text.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(RunKind::Train),
            "eval" => Ok(RunKind::Eval),
            "compare" => Ok(RunKind::Compare),
            "verify-rewards" | "verify_rewards" => Ok(RunKind::VerifyRewards),
            "sweep" | "sweep-w3" | "sweep_w3" => Ok(RunKind::Sweep),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected train, eval, compare, verify-rewards, or sweep)"
            ))),
        }
    }
}

impl std::fmt::Display for RunKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A policy family: the four learned observation-mode variants, the small
/// tabular chain demo, and the two fixed fertilization schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Mdp28,
    Mdp10,
    Pomdp28,
    Pomdp10,
    TabularToy,
    Expert1,
    Expert2,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Mdp28 => "mdp28",
            ModelKind::Mdp10 => "mdp10",
            ModelKind::Pomdp28 => "pomdp28",
            ModelKind::Pomdp10 => "pomdp10",
            ModelKind::TabularToy => "tabular-toy",
            ModelKind::Expert1 => "expert-1",
            ModelKind::Expert2 => "expert-2",
        }
    }

    /// Accepts any case plus optional `-`/`_` separators (`MDP-28`, `mdp_28`).
    pub fn parse(text: &str) -> Result<ModelKind> {
        let folded: String = text
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect();
        match folded.as_str() {
            "mdp28" => Ok(ModelKind::Mdp28),
            "mdp10" => Ok(ModelKind::Mdp10),
            "pomdp28" => Ok(ModelKind::Pomdp28),
            "pomdp10" => Ok(ModelKind::Pomdp10),
            "tabulartoy" => Ok(ModelKind::TabularToy),
            "expert1" => Ok(ModelKind::Expert1),
            "expert2" => Ok(ModelKind::Expert2),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }

    /// Observation mode for the learned variants; the toy and the fixed
    /// schedules do not read observations.
    pub fn observation_mode(&self) -> Option<ObservationMode> {
        match self {
            ModelKind::Mdp28 => Some(ObservationMode::Mdp28),
            ModelKind::Mdp10 => Some(ObservationMode::Mdp10),
            ModelKind::Pomdp28 => Some(ObservationMode::Pomdp28),
            ModelKind::Pomdp10 => Some(ObservationMode::Pomdp10),
            _ => None,
        }
    }

    pub fn is_learned(&self) -> bool {
        self.observation_mode().is_some()
    }

    /// Schedule variant number for the fixed expert policies.
    pub fn expert_variant(&self) -> Option<u8> {
        match self {
            ModelKind::Expert1 => Some(1),
            ModelKind::Expert2 => Some(2),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where daily weather comes from: the seeded generator or a CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeatherSourceKind {
    Synth,
    Csv,
}

impl WeatherSourceKind {
    pub fn name(&self) -> &'static str {
        match self {
            WeatherSourceKind::Synth => "synth",
            WeatherSourceKind::Csv => "csv",
        }
    }

    pub fn parse(text: &str) -> Result<WeatherSourceKind> {
        match text.trim().to_ascii_lowercase().as_str() {
            "synth" => Ok(WeatherSourceKind::Synth),
            "csv" => Ok(WeatherSourceKind::Csv),
            other => Err(Error::Config(format!(
                "unknown weather source `{other}` (expected synth or csv)"
            ))),
        }
    }
}

/// Q-network shape. `head_hidden` is the dense stack: the whole network for
/// feedforward models, the layers after the recurrent cell for windowed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkShape {
    pub gru_hidden: usize,
    pub head_hidden: Vec<usize>,
}

impl Default for NetworkShape {
    fn default() -> Self {
        Self { gru_hidden: 32, head_hidden: vec![64] }
    }
}

/// Fully resolved run configuration. Field defaults are the desk-scale
/// training recipe; see the module docs for the text format.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Operation this config describes; set by the CLI subcommand when the
    /// file omits it, checked for consistency when it does not.
    pub mode: Option<RunKind>,
    /// Policy family for train/eval/sweep runs.
    pub model: Option<ModelKind>,
    /// Master seed; per-component seeds derive from it.
    pub master_seed: u64,
    /// Seed list for the multi-seed operations (compare, sweep).
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub weather_source: WeatherSourceKind,
    pub weather_csv: Option<PathBuf>,
    pub weather_seed: u64,
    pub weather_days: u32,
    pub perturbation: PerturbationSpec,
    /// Leaching penalty as a multiple of the nitrogen price w2.
    pub w3_multiplier: f64,
    pub planting_offset: usize,
    pub episode_days: usize,
    pub agent: AgentConfig,
    pub network: NetworkShape,
    pub eval_episodes: usize,
    pub eval_model_file: Option<PathBuf>,
    pub compare_models: Vec<ModelKind>,
    pub sweep_multipliers: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: None,
            model: None,
            master_seed: 0,
            seeds: vec![11, 23, 47],
            out_dir: PathBuf::from("out"),
            weather_source: WeatherSourceKind::Synth,
            weather_csv: None,
            weather_seed: 1999,
            weather_days: 210,
            perturbation: PerturbationSpec::default(),
            w3_multiplier: DEFAULT_W3_MULTIPLIER,
            planting_offset: 0,
            episode_days: DEFAULT_EPISODE_DAYS,
            agent: desk_scale_agent(),
            network: NetworkShape::default(),
            eval_episodes: 5,
            eval_model_file: None,
            compare_models: Vec::new(),
            sweep_multipliers: vec![0.0, 5.0, 50.0],
        }
    }
}

impl ExperimentConfig {
    /// Defaults with the full-scale trainer (6000 episodes, batch 640) in
    /// place of the desk-scale one. Base for the CLI's `--full` flag.
    pub fn full_scale() -> ExperimentConfig {
        ExperimentConfig {
            agent: AgentConfig::default(),
            ..ExperimentConfig::default()
        }
    }
}

/// Training hyperparameters sized for minutes-long runs on one core: 600
/// episodes instead of 6000, small batches, and a learning rate to match.
/// The full-scale values remain reachable through `agent.*` overrides.
fn desk_scale_agent() -> AgentConfig {
    AgentConfig {
        learning_rate: 1e-3,
        batch_size: 32,
        warmup: 2_000,
        episodes: 600,
        ..AgentConfig::default()
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| {
        Error::Config(format!(
            "invalid value `{value}` for key `{key}` (expected {})",
            std::any::type_name::<T>()
        ))
    })
}

fn parse_list<T>(key: &str, value: &str, elem: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let trimmed = value.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            elem(part.trim()).map_err(|e| {
                Error::Config(format!("in list value for key `{key}`: {e}"))
            })
        })
        .collect()
}

impl ExperimentConfig {
    /// Parses a config file. Missing file is a configuration error, not io.
    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        Self::from_file_with(ExperimentConfig::default(), path)
    }

    /// Like [`from_file`](Self::from_file) but layered on a caller-chosen base.
    pub fn from_file_with(base: ExperimentConfig, path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::from_text_with(base, &text)
    }

    /// Parses config text on top of the defaults and validates the result.
    pub fn from_text(text: &str) -> Result<ExperimentConfig> {
        Self::from_text_with(ExperimentConfig::default(), text)
    }

    /// Parses config text on top of `base`. File keys win over base values.
    pub fn from_text_with(base: ExperimentConfig, text: &str) -> Result<ExperimentConfig> {
        let mut config = base;
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.starts_with("manifest.") {
                continue; // metadata written by a completed run
            }
            if seen.iter().any(|s| s == key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
            config.apply_kv(key, value).map_err(|e| {
                Error::Config(format!("line {}: {e}", lineno + 1))
            })?;
            seen.push(key.to_string());
        }
        config.validate()?;
        Ok(config)
    }

    /// Applies one key=value pair. Used by the parser and by CLI overrides.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "mode" => self.mode = Some(RunKind::parse(value)?),
            "model" => self.model = Some(ModelKind::parse(value)?),
            "seed" => self.master_seed = parse_scalar(key, value)?,
            "seeds" => self.seeds = parse_list(key, value, |v| parse_scalar::<u64>(key, v))?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "weather.source" => self.weather_source = WeatherSourceKind::parse(value)?,
            "weather.csv" => self.weather_csv = Some(PathBuf::from(value)),
            "weather.seed" => self.weather_seed = parse_scalar(key, value)?,
            "weather.days" => self.weather_days = parse_scalar(key, value)?,
            "weather.temp_shift" => self.perturbation.temp_shift = parse_scalar(key, value)?,
            "weather.rain_factor" => self.perturbation.rain_factor = parse_scalar(key, value)?,
            "env.w3_multiplier" => self.w3_multiplier = parse_scalar(key, value)?,
            "env.planting_offset" => self.planting_offset = parse_scalar(key, value)?,
            "env.episode_days" => self.episode_days = parse_scalar(key, value)?,
            "agent.gamma" => self.agent.gamma = parse_scalar(key, value)?,
            "agent.learning_rate" => self.agent.learning_rate = parse_scalar(key, value)?,
            "agent.batch_size" => self.agent.batch_size = parse_scalar(key, value)?,
            "agent.window_len" => self.agent.window_len = parse_scalar(key, value)?,
            "agent.eps_start" => self.agent.eps_start = parse_scalar(key, value)?,
            "agent.eps_end" => self.agent.eps_end = parse_scalar(key, value)?,
            "agent.eps_decay_fraction" => {
                self.agent.eps_decay_fraction = parse_scalar(key, value)?
            }
            "agent.tau" => self.agent.tau = parse_scalar(key, value)?,
            "agent.warmup" => self.agent.warmup = parse_scalar(key, value)?,
            "agent.episodes" => self.agent.episodes = parse_scalar(key, value)?,
            "agent.steps_per_episode" => {
                self.agent.steps_per_episode = parse_scalar(key, value)?
            }
            "agent.replay_capacity" => self.agent.replay_capacity = parse_scalar(key, value)?,
            "network.gru_hidden" => self.network.gru_hidden = parse_scalar(key, value)?,
            "network.head_hidden" => {
                self.network.head_hidden =
                    parse_list(key, value, |v| parse_scalar::<usize>(key, v))?
            }
            "eval.episodes" => self.eval_episodes = parse_scalar(key, value)?,
            "eval.model_file" => self.eval_model_file = Some(PathBuf::from(value)),
            "compare.models" => {
                self.compare_models = parse_list(key, value, ModelKind::parse)?
            }
            "sweep.multipliers" => {
                self.sweep_multipliers =
                    parse_list(key, value, |v| parse_scalar::<f64>(key, v))?
            }
            other => return Err(Error::Config(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Cross-field checks shared by every operation.
    pub fn validate(&self) -> Result<()> {
        match self.weather_source {
            WeatherSourceKind::Csv if self.weather_csv.is_none() => {
                return Err(Error::Config(
                    "weather.source=csv requires weather.csv=<path>".into(),
                ));
            }
            WeatherSourceKind::Synth if self.weather_csv.is_some() => {
                return Err(Error::Config(
                    "weather.csv given but weather.source is synth".into(),
                ));
            }
            _ => {}
        }
        if self.weather_days == 0 {
            return Err(Error::Config("weather.days must be at least 1".into()));
        }
        self.perturbation.validate()?;
        self.agent.validate()?;
        if !self.w3_multiplier.is_finite() || self.w3_multiplier < 0.0 {
            return Err(Error::Config(format!(
                "env.w3_multiplier must be nonnegative, got {}",
                self.w3_multiplier
            )));
        }
        if self.episode_days == 0 {
            return Err(Error::Config("env.episode_days must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must list at least one seed".into()));
        }
        if self.eval_episodes == 0 {
            return Err(Error::Config("eval.episodes must be at least 1".into()));
        }
        if self.network.gru_hidden == 0 {
            return Err(Error::Config("network.gru_hidden must be at least 1".into()));
        }
        for &m in &self.sweep_multipliers {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::Config(format!(
                    "sweep.multipliers must be nonnegative, got {m}"
                )));
            }
        }
        Ok(())
    }

    /// The model field, required by train/eval/sweep.
    pub fn require_model(&self) -> Result<ModelKind> {
        self.model
            .ok_or_else(|| Error::Config("config must set model=<name> for this operation".into()))
    }

    /// Loads or synthesizes the weather series and applies the perturbation.
    pub fn build_weather(&self) -> Result<WeatherSeries> {
        let base = match self.weather_source {
            WeatherSourceKind::Synth => synthesize_weather(
                self.weather_seed,
                self.weather_days,
                &ClimateParams::default(),
            )?,
            WeatherSourceKind::Csv => {
                let path = self.weather_csv.as_ref().ok_or_else(|| {
                    Error::Config("weather.source=csv requires weather.csv=<path>".into())
                })?;
                load_weather_csv(path)?
            }
        };
        self.perturbation.apply(&base)
    }

    /// Builds the crop environment for the given observation mode.
    pub fn build_env(&self, mode: ObservationMode) -> Result<CropEnv> {
        let weather = self.build_weather()?;
        let mut env = EnvConfig::baseline(weather, mode);
        env.weights = RewardWeights::season_1999().with_w3_multiplier(self.w3_multiplier);
        env.planting_offset = self.planting_offset;
        env.episode_days = self.episode_days;
        CropEnv::new(env)
    }

    /// Agent config with the window collapsed to a single observation for
    /// modes that feed only the current state vector.
    pub fn resolved_agent_for(&self, mode: ObservationMode) -> AgentConfig {
        let mut agent = self.agent.clone();
        if !mode.uses_window() {
            agent.window_len = 1;
        }
        agent
    }

    /// Serializes the resolved config plus run metadata. The key order is
    /// fixed so reruns produce identical snapshots; metadata lives under
    /// `manifest.*`, which the parser skips.
    pub fn manifest_text(&self, meta: &ManifestMeta) -> String {
        let mut out = String::new();
        out.push_str("# run manifest: resolved configuration snapshot; reusable as a config\n");
        if let Some(mode) = self.mode {
            out.push_str(&format!("mode={mode}\n"));
        }
        if let Some(model) = self.model {
            out.push_str(&format!("model={model}\n"));
        }
        out.push_str(&format!("seed={}\n", self.master_seed));
        out.push_str(&format!("seeds={}\n", join(&self.seeds)));
        out.push_str(&format!("out_dir={}\n", self.out_dir.display()));
        out.push_str(&format!("weather.source={}\n", self.weather_source.name()));
        if let Some(csv) = &self.weather_csv {
            out.push_str(&format!("weather.csv={}\n", csv.display()));
        }
        out.push_str(&format!("weather.seed={}\n", self.weather_seed));
        out.push_str(&format!("weather.days={}\n", self.weather_days));
        out.push_str(&format!("weather.temp_shift={}\n", self.perturbation.temp_shift));
        out.push_str(&format!("weather.rain_factor={}\n", self.perturbation.rain_factor));
        out.push_str(&format!("env.w3_multiplier={}\n", self.w3_multiplier));
        out.push_str(&format!("env.planting_offset={}\n", self.planting_offset));
        out.push_str(&format!("env.episode_days={}\n", self.episode_days));
        out.push_str(&format!("agent.gamma={}\n", self.agent.gamma));
        out.push_str(&format!("agent.learning_rate={}\n", self.agent.learning_rate));
        out.push_str(&format!("agent.batch_size={}\n", self.agent.batch_size));
        out.push_str(&format!("agent.window_len={}\n", self.agent.window_len));
        out.push_str(&format!("agent.eps_start={}\n", self.agent.eps_start));
        out.push_str(&format!("agent.eps_end={}\n", self.agent.eps_end));
        out.push_str(&format!(
            "agent.eps_decay_fraction={}\n",
            self.agent.eps_decay_fraction
        ));
        out.push_str(&format!("agent.tau={}\n", self.agent.tau));
        out.push_str(&format!("agent.warmup={}\n", self.agent.warmup));
        out.push_str(&format!("agent.episodes={}\n", self.agent.episodes));
        out.push_str(&format!(
            "agent.steps_per_episode={}\n",
            self.agent.steps_per_episode
        ));
        out.push_str(&format!("agent.replay_capacity={}\n", self.agent.replay_capacity));
        out.push_str(&format!("network.gru_hidden={}\n", self.network.gru_hidden));
        out.push_str(&format!("network.head_hidden={}\n", join(&self.network.head_hidden)));
        out.push_str(&format!("eval.episodes={}\n", self.eval_episodes));
        if let Some(file) = &self.eval_model_file {
            out.push_str(&format!("eval.model_file={}\n", file.display()));
        }
        if !self.compare_models.is_empty() {
            out.push_str(&format!("compare.models={}\n", join(&self.compare_models)));
        }
        out.push_str(&format!("sweep.multipliers={}\n", join(&self.sweep_multipliers)));
        out.push_str(&format!("manifest.toolkit_version={}\n", meta.toolkit_version));
        out.push_str(&format!("manifest.created_unix={}\n", meta.created_unix));
        out.push_str(&format!(
            "manifest.seed_network={}\n",
            super::derive_seed(self.master_seed, super::STREAM_NETWORK)
        ));
        out.push_str(&format!(
            "manifest.seed_agent={}\n",
            super::derive_seed(self.master_seed, super::STREAM_AGENT)
        ));
        for (label, path) in &meta.artifacts {
            out.push_str(&format!("manifest.artifact.{label}={path}\n"));
        }
        if let Some(secs) = meta.wall_clock_seconds {
            out.push_str(&format!("manifest.wall_clock_seconds={secs}\n"));
        }
        out
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// Run metadata recorded alongside the config snapshot in a manifest.
#[derive(Debug, Clone)]
pub struct ManifestMeta {
    pub toolkit_version: String,
    pub created_unix: u64,
    /// Label and out_dir-relative path of each file the run writes.
    pub artifacts: Vec<(String, String)>,
    /// Filled in when the run completes; absent in the pre-run snapshot.
    pub wall_clock_seconds: Option<f64>,
}

impl ManifestMeta {
    pub fn new(artifacts: Vec<(String, String)>) -> ManifestMeta {
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ManifestMeta {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix,
            artifacts,
            wall_clock_seconds: None,
        }
    }
}

/// Drops `manifest.*` lines, leaving only the reusable config snapshot.
/// Reruns differ only in this metadata, so tests compare stripped text.
pub fn strip_manifest_metadata(text: &str) -> String {
    text.lines()
        .filter(|line| !line.trim_start().starts_with("manifest."))
        .map(|line| format!("{line}\n"))
        .collect()
}

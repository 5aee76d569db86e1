//! Value-based reinforcement learning: tabular Q-learning, deep Q-learning
//! with target networks and soft updates, a recurrent variant over
//! observation windows, ε-greedy exploration, and replay memory.

mod agent;
mod delayed_cue;
mod episode;
mod replay;
mod tabular;
mod window;

pub use agent::{bellman_target, QAgent, QNetwork};
pub use delayed_cue::{DelayedCueEnv, DELAYED_CUE_OPTIMAL_RETURN, DELAYED_CUE_STEPS};
pub use episode::{run_episode, Environment, EpisodeTrace, RunMode, StepOutcome};
pub use replay::{Experience, ReplayBuffer};
pub use tabular::{chain_mdp, value_iteration, FiniteMdp, TabularQ};
pub use window::ObservationWindow;

use crate::error::{Error, Result};

/// Agent hyperparameters. Defaults are the full-scale training settings;
/// desk-scale runs override them through experiment configs.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    /// Discount factor γ.
    pub gamma: f64,
    /// Adam learning rate.
    pub learning_rate: f64,
    /// Experiences per training step.
    pub batch_size: usize,
    /// Observations per window for recurrent agents.
    pub window_len: usize,
    /// ε at episode 0.
    pub eps_start: f64,
    /// ε after the decay phase.
    pub eps_end: f64,
    /// Fraction of episodes over which ε decays linearly.
    pub eps_decay_fraction: f64,
    /// Soft-update rate τ, applied after every training step.
    pub tau: f64,
    /// Minimum replay size before training starts.
    pub warmup: usize,
    /// Training episodes.
    pub episodes: usize,
    /// Step cap per episode.
    pub steps_per_episode: usize,
    /// Replay buffer capacity.
    pub replay_capacity: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            learning_rate: 1e-5,
            batch_size: 640,
            window_len: 5,
            eps_start: 1.0,
            eps_end: 0.05,
            eps_decay_fraction: 0.6,
            tau: 0.005,
            warmup: 2_000,
            episodes: 6_000,
            steps_per_episode: 180,
            replay_capacity: 100_000,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(format!("gamma must be in [0, 1], got {}", self.gamma)));
        }
        for (name, eps) in [("eps_start", self.eps_start), ("eps_end", self.eps_end)] {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {eps}")));
            }
        }
        if !(0.0..=1.0).contains(&self.eps_decay_fraction) {
            return Err(Error::Config(format!(
                "eps_decay_fraction must be in [0, 1], got {}",
                self.eps_decay_fraction
            )));
        }
        if !(0.0 < self.tau && self.tau <= 1.0) {
            return Err(Error::Config(format!("tau must be in (0, 1], got {}", self.tau)));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        let counts = [
            ("batch_size", self.batch_size),
            ("window_len", self.window_len),
            ("warmup", self.warmup),
            ("episodes", self.episodes),
            ("steps_per_episode", self.steps_per_episode),
            ("replay_capacity", self.replay_capacity),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Linear ε decay: from `eps_start` at episode 0 down to `eps_end` at
    /// `eps_decay_fraction * episodes`, flat afterwards.
    pub fn epsilon_for_episode(&self, episode: usize) -> f64 {
        let decay_span = (self.episodes as f64 * self.eps_decay_fraction).max(1.0);
        let progress = episode as f64 / decay_span;
        if progress >= 1.0 {
            return self.eps_end;
        }
        self.eps_start + (self.eps_end - self.eps_start) * progress
    }
}

/// Σ_t γ^t r_t over a finite episode.
pub fn discounted_return(rewards: &[f64], gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Config(format!("gamma must be in [0, 1], got {gamma}")));
    }
    let mut factor = 1.0;
    let mut total = 0.0;
    for r in rewards {
        total += factor * r;
        factor *= gamma;
    }
    Ok(total)
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

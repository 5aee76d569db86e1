//! Deep Q-learning agent: evaluation and target networks, replay, Adam, and
//! the TD(0) training step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::replay::{Experience, ReplayBuffer};
use super::{argmax_lowest, AgentConfig};
use crate::error::{Error, Result};
use crate::neural::{
    soft_update, AdamHyper, AdamState, GradientBundle, MlpNetwork, Parameterized, QNetworkModel,
    RecurrentQNetwork,
};

/// Action-value network of either architecture, evaluated on observation
/// windows. Feedforward networks read only the newest observation, so they
/// see exactly the current state; recurrent networks consume the window.
#[derive(Debug, Clone, PartialEq)]
pub enum QNetwork {
    Feedforward(MlpNetwork),
    Recurrent(RecurrentQNetwork),
}

impl QNetwork {
    pub fn observation_dim(&self) -> usize {
        match self {
            QNetwork::Feedforward(n) => n.input_dim(),
            QNetwork::Recurrent(n) => n.input_dim(),
        }
    }

    pub fn action_count(&self) -> usize {
        match self {
            QNetwork::Feedforward(n) => n.output_dim(),
            QNetwork::Recurrent(n) => n.output_dim(),
        }
    }

    pub fn is_recurrent(&self) -> bool {
        matches!(self, QNetwork::Recurrent(_))
    }

    /// Q values for a chronological window (oldest first, nonempty).
    pub fn q_values(&self, window: &[Vec<f64>]) -> Result<Vec<f64>> {
        match self {
            QNetwork::Feedforward(n) => {
                let obs = window
                    .last()
                    .ok_or_else(|| Error::Shape("observation window is empty".into()))?;
                n.forward(obs)
            }
            QNetwork::Recurrent(n) => n.forward_window(window),
        }
    }

    pub fn into_model(self) -> QNetworkModel {
        match self {
            QNetwork::Feedforward(n) => QNetworkModel::Feedforward(n),
            QNetwork::Recurrent(n) => QNetworkModel::Recurrent(n),
        }
    }

    pub fn from_model(model: QNetworkModel) -> Self {
        match model {
            QNetworkModel::Feedforward(n) => QNetwork::Feedforward(n),
            QNetworkModel::Recurrent(n) => QNetwork::Recurrent(n),
        }
    }
}

impl Parameterized for QNetwork {
    fn tensor_count(&self) -> usize {
        match self {
            QNetwork::Feedforward(n) => n.tensor_count(),
            QNetwork::Recurrent(n) => n.tensor_count(),
        }
    }

    fn tensor(&self, idx: usize) -> &[f64] {
        match self {
            QNetwork::Feedforward(n) => n.tensor(idx),
            QNetwork::Recurrent(n) => n.tensor(idx),
        }
    }

    fn tensor_mut(&mut self, idx: usize) -> &mut [f64] {
        match self {
            QNetwork::Feedforward(n) => n.tensor_mut(idx),
            QNetwork::Recurrent(n) => n.tensor_mut(idx),
        }
    }
}

/// TD target: the reward alone on terminal transitions, otherwise reward
/// plus the discounted best next-state value from the target network.
pub fn bellman_target(reward: f64, terminal: bool, q_next: &[f64], gamma: f64) -> f64 {
    if terminal {
        return reward;
    }
    debug_assert!(!q_next.is_empty(), "bootstrap needs at least one action value");
    let best = q_next.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    reward + gamma * best
}

/// Deep Q-learning agent. The evaluation network is trained; the target
/// network changes only through soft updates.
#[derive(Debug, Clone)]
pub struct QAgent {
    eval_net: QNetwork,
    target_net: QNetwork,
    adam: AdamState,
    replay: ReplayBuffer,
    config: AgentConfig,
    rng: ChaCha8Rng,
}

impl QAgent {
    /// Builds an agent around an initialized network. The target starts as
    /// an exact copy of the evaluation network. `seed` drives exploration
    /// and batch sampling only.
    pub fn new(network: QNetwork, config: AgentConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let adam = AdamState::new(
            &network,
            AdamHyper::with_learning_rate(config.learning_rate),
        )?;
        let replay = ReplayBuffer::new(config.replay_capacity)?;
        Ok(Self {
            target_net: network.clone(),
            eval_net: network,
            adam,
            replay,
            config,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn eval_network(&self) -> &QNetwork {
        &self.eval_net
    }

    pub fn target_network(&self) -> &QNetwork {
        &self.target_net
    }

    pub fn replay_len(&self) -> usize {
        self.replay.len()
    }

    pub fn action_count(&self) -> usize {
        self.eval_net.action_count()
    }

    pub fn observation_dim(&self) -> usize {
        self.eval_net.observation_dim()
    }

    /// Window length this agent conditions on: the configured length for
    /// recurrent networks, one observation for feedforward.
    pub fn window_len(&self) -> usize {
        if self.eval_net.is_recurrent() {
            self.config.window_len
        } else {
            1
        }
    }

    /// Snapshot of the evaluation network in serializable form.
    pub fn to_model(&self) -> QNetworkModel {
        self.eval_net.clone().into_model()
    }

    /// ε-greedy action selection on the evaluation network. Ties in the
    /// greedy case go to the lowest action index.
    pub fn select_action(&mut self, window: &[Vec<f64>], epsilon: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Config(format!("epsilon must be in [0, 1], got {epsilon}")));
        }
        self.check_window(window)?;
        if epsilon > 0.0 && self.rng.random::<f64>() < epsilon {
            return Ok(self.rng.random_range(0..self.action_count()));
        }
        let q = self.eval_net.q_values(window)?;
        Ok(argmax_lowest(&q))
    }

    /// Greedy Q values for diagnostics and greedy rollouts.
    pub fn q_values(&self, window: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_window(window)?;
        self.eval_net.q_values(window)
    }

    fn check_window(&self, window: &[Vec<f64>]) -> Result<()> {
        if window.len() != self.window_len() {
            return Err(Error::Shape(format!(
                "window has {} observations, agent expects {}",
                window.len(),
                self.window_len()
            )));
        }
        for obs in window {
            if obs.len() != self.observation_dim() {
                return Err(Error::Shape(format!(
                    "observation has {} entries, network expects {}",
                    obs.len(),
                    self.observation_dim()
                )));
            }
        }
        Ok(())
    }

    /// Stores a transition, validating its shape against this agent.
    pub fn push_experience(&mut self, experience: Experience) -> Result<()> {
        self.check_window(&experience.window_t)?;
        self.check_window(&experience.window_next)?;
        if experience.action >= self.action_count() {
            return Err(Error::Index(format!(
                "action {} out of range for {} actions",
                experience.action,
                self.action_count()
            )));
        }
        self.replay.push(experience)
    }

    pub fn warm(&self) -> bool {
        self.replay.len() >= self.config.warmup
    }

    /// Samples a batch from replay and runs one training step on it.
    pub fn train_from_replay(&mut self) -> Result<f64> {
        if !self.warm() {
            return Err(Error::State(format!(
                "replay holds {} experiences, warmup requires {}",
                self.replay.len(),
                self.config.warmup
            )));
        }
        let batch = self.replay.sample(self.config.batch_size, &mut self.rng)?;
        self.train_step(&batch)
    }

    /// One TD(0) step on an explicit batch: targets from the target network,
    /// mean squared TD error minimized by one Adam update on the evaluation
    /// network. The target network is not touched.
    pub fn train_step(&mut self, batch: &[Experience]) -> Result<f64> {
        if !self.warm() {
            return Err(Error::State(format!(
                "replay holds {} experiences, warmup requires {}",
                self.replay.len(),
                self.config.warmup
            )));
        }
        if batch.is_empty() {
            return Err(Error::State("cannot train on an empty batch".into()));
        }

        let gamma = self.config.gamma;
        let n = batch.len() as f64;
        let mut grads = GradientBundle::zeros_like(&self.eval_net);
        let mut loss_sum = 0.0;

        for e in batch {
            self.check_window(&e.window_t)?;
            self.check_window(&e.window_next)?;
            if e.action >= self.action_count() {
                return Err(Error::Index(format!("action {} out of range", e.action)));
            }
            let q_next = self.target_net.q_values(&e.window_next)?;
            let target = bellman_target(e.reward, e.terminal, &q_next, gamma);

            // d(mean squared TD error)/dq[a] = 2 (q[a] - target) / n.
            match &self.eval_net {
                QNetwork::Feedforward(net) => {
                    let obs = e.window_t.last().expect("validated nonempty");
                    let (q, trace) = net.forward_trace(obs)?;
                    let td = q[e.action] - target;
                    loss_sum += td * td;
                    let mut grad_out = vec![0.0; q.len()];
                    grad_out[e.action] = 2.0 * td / n;
                    let (sample_grads, _) = net.backward(&trace, &grad_out)?;
                    grads.add_scaled(&sample_grads, 1.0)?;
                }
                QNetwork::Recurrent(net) => {
                    let (q, trace) = net.forward_window_trace(&e.window_t)?;
                    let td = q[e.action] - target;
                    loss_sum += td * td;
                    let mut grad_out = vec![0.0; q.len()];
                    grad_out[e.action] = 2.0 * td / n;
                    let sample_grads = net.backward(&trace, &grad_out)?;
                    grads.add_scaled(&sample_grads, 1.0)?;
                }
            }
        }

        self.adam.step(&mut self.eval_net, &grads)?;
        Ok(loss_sum / n)
    }

    /// Nudges the target network toward the evaluation network by τ.
    pub fn soft_update_target(&mut self) -> Result<()> {
        soft_update(&mut self.target_net, &self.eval_net, self.config.tau)
    }
}

//! Delayed-cue task: a minimal environment separating agents with memory
//! from agents without it.
//!
//! Each episode lasts five steps. The observation is [cue, t/4] where the
//! cue (+1 or -1) is visible only at t = 0 and zeroed afterwards. Every
//! action is free except the last: the fifth action earns reward 1 if it
//! matches the cue (action 1 for +1, action 0 for -1), else 0. An agent that
//! reads only the current observation cannot beat an expected return of 0.5;
//! an agent whose window spans the episode can reach 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::episode::{Environment, StepOutcome};
use crate::error::{Error, Result};

pub const DELAYED_CUE_STEPS: usize = 5;
pub const DELAYED_CUE_OPTIMAL_RETURN: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct DelayedCueEnv {
    rng: ChaCha8Rng,
    cue: f64,
    t: usize,
    done: bool,
    started: bool,
}

impl DelayedCueEnv {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), cue: 1.0, t: 0, done: false, started: false }
    }

    fn observation(&self) -> Vec<f64> {
        let cue = if self.t == 0 { self.cue } else { 0.0 };
        vec![cue, self.t as f64 / (DELAYED_CUE_STEPS - 1) as f64]
    }

    /// The action the current episode pays for.
    pub fn rewarded_action(&self) -> usize {
        if self.cue > 0.0 {
            1
        } else {
            0
        }
    }
}

impl Environment for DelayedCueEnv {
    fn observation_dim(&self) -> usize {
        2
    }

    fn action_count(&self) -> usize {
        2
    }

    fn reset(&mut self) -> Result<Vec<f64>> {
        self.cue = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
        self.t = 0;
        self.done = false;
        self.started = true;
        Ok(self.observation())
    }

    fn step(&mut self, action: usize) -> Result<StepOutcome> {
        if !self.started {
            return Err(Error::State("environment must be reset before stepping".into()));
        }
        if self.done {
            return Err(Error::State("step after episode end".into()));
        }
        if action >= 2 {
            return Err(Error::Index(format!("action {action} out of range for 2 actions")));
        }
        self.t += 1;
        let done = self.t >= DELAYED_CUE_STEPS;
        let reward = if done && action == self.rewarded_action() { 1.0 } else { 0.0 };
        self.done = done;
        Ok(StepOutcome { observation: self.observation(), reward, done })
    }
}

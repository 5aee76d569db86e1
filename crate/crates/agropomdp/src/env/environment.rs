use super::dynamics::advance_crop;
use super::state::CropState;
use super::{compute_reward, decode_action, EnvConfig, RewardWeights, ACTION_COUNT};
use crate::error::{Error, Result};
use crate::rl::{Environment, StepOutcome};

/// Season totals and per-day schedule for one finished (or running) episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    /// Grain yield at harvest (kg/ha); zero until the episode finishes.
    pub yield_kg_ha: f64,
    /// Total fertilizer nitrogen applied (kg/ha).
    pub nitrogen_input: f64,
    /// Total nitrate leached (kg/ha).
    pub leaching_total: f64,
    /// Undiscounted sum of per-day rewards.
    pub cumulative_reward: f64,
    /// Nitrogen applied on each day, in order (kg/ha).
    pub schedule: Vec<f64>,
    /// Days simulated so far.
    pub days: usize,
    /// Whether the episode has reached harvest.
    pub harvested: bool,
}

impl EpisodeSummary {
    fn empty() -> EpisodeSummary {
        EpisodeSummary {
            yield_kg_ha: 0.0,
            nitrogen_input: 0.0,
            leaching_total: 0.0,
            cumulative_reward: 0.0,
            schedule: Vec::new(),
            days: 0,
            harvested: false,
        }
    }

    /// Difference between the season identity `w1*Y - w2*sum(N) - w3*sum(L)`
    /// and the accumulated per-day rewards. Zero up to float rounding.
    pub fn reward_identity_residual(&self, weights: &RewardWeights) -> f64 {
        let identity = weights.w1 * self.yield_kg_ha
            - weights.w2 * self.nitrogen_input
            - weights.w3 * self.leaching_total;
        identity - self.cumulative_reward
    }
}

/// One growing season as a sequential decision task: each step the agent
/// picks a fertilizer amount for the coming day, the surrogate advances a
/// day, and the episode ends at physiological maturity or the day cap,
/// whichever comes first.
///
/// The observation shows the pending day's weather (a morning forecast), so
/// rain-aware policies are learnable; flow variables describe the previous
/// completed day. Given the same config and action sequence the trajectory
/// is fully deterministic.
#[derive(Debug, Clone)]
pub struct CropEnv {
    config: EnvConfig,
    state: Option<CropState>,
    done: bool,
    summary: EpisodeSummary,
}

impl CropEnv {
    pub fn new(config: EnvConfig) -> Result<CropEnv> {
        config.validate()?;
        Ok(CropEnv { config, state: None, done: false, summary: EpisodeSummary::empty() })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    /// Current simulator state; None before the first reset.
    pub fn state(&self) -> Option<&CropState> {
        self.state.as_ref()
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Totals for the episode in progress (or just finished).
    pub fn summary(&self) -> &EpisodeSummary {
        &self.summary
    }

    /// Applies an arbitrary (not necessarily gridded) nitrogen amount for
    /// the coming day. Fixed baseline plans use this directly; the discrete
    /// action path goes through `decode_action`.
    pub fn step_nitrogen(&mut self, applied_n: f64) -> Result<StepOutcome> {
        let state = self.state.as_ref().ok_or_else(|| {
            Error::State("step called before reset".into())
        })?;
        if self.done {
            return Err(Error::State("step called after the episode finished".into()));
        }

        let day_index = self.config.planting_offset + state.dap as usize;
        let record = &self.config.weather.records()[day_index];
        let (mut next, outcome) =
            advance_crop(state, record, applied_n, &self.config.soil, &self.config.crop)?;

        let done = next.gdd >= self.config.crop.maturity_gdd
            || next.dap as usize >= self.config.episode_days;
        if done {
            next.grnwt = self.config.crop.harvest_index * next.biomass;
        }
        let harvest_yield = done.then_some(next.grnwt);
        let reward = compute_reward(applied_n, outcome.leached, harvest_yield, &self.config.weights)?;

        self.summary.schedule.push(applied_n);
        self.summary.nitrogen_input += applied_n;
        self.summary.leaching_total += outcome.leached;
        self.summary.cumulative_reward += reward;
        self.summary.days += 1;
        if done {
            self.summary.yield_kg_ha = next.grnwt;
            self.summary.harvested = true;
        } else {
            // Load the next day's forecast for the upcoming decision.
            let upcoming = &self.config.weather.records()
                [self.config.planting_offset + next.dap as usize];
            next.rain = upcoming.rain;
            next.srad = upcoming.srad;
            next.tmax = upcoming.tmax;
            next.tmin = upcoming.tmin;
        }

        let observation = next.observe(self.config.mode, &self.config.scaling);
        self.state = Some(next);
        self.done = done;
        Ok(StepOutcome { observation, reward, done })
    }

    /// Runs one full episode applying `plan` amounts on their scheduled
    /// days (1-based day after planting) and zero elsewhere. Plan entries
    /// falling after an early harvest are skipped.
    pub fn run_plan(&mut self, plan: &[(u32, f64)]) -> Result<EpisodeSummary> {
        self.reset()?;
        while !self.done {
            let pending_day = self.state.as_ref().map(|s| s.dap + 1).unwrap_or(1);
            let amount: f64 =
                plan.iter().filter(|(d, _)| *d == pending_day).map(|(_, n)| n).sum();
            self.step_nitrogen(amount)?;
        }
        Ok(self.summary.clone())
    }
}

impl Environment for CropEnv {
    fn observation_dim(&self) -> usize {
        self.config.mode.variable_count()
    }

    fn action_count(&self) -> usize {
        ACTION_COUNT
    }

    fn reset(&mut self) -> Result<Vec<f64>> {
        self.config.validate()?;
        let mut state = CropState::at_planting(&self.config);
        // First decision sees the first managed day's forecast.
        let first = &self.config.weather.records()[self.config.planting_offset];
        state.rain = first.rain;
        state.srad = first.srad;
        state.tmax = first.tmax;
        state.tmin = first.tmin;
        let observation = state.observe(self.config.mode, &self.config.scaling);
        self.state = Some(state);
        self.done = false;
        self.summary = EpisodeSummary::empty();
        Ok(observation)
    }

    fn step(&mut self, action: usize) -> Result<StepOutcome> {
        let applied = decode_action(action)?;
        self.step_nitrogen(applied)
    }
}

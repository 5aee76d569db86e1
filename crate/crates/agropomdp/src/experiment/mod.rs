//! Experiment orchestration: run configuration and manifests, training
//! drivers, policy evaluation, model comparison, the leaching-weight sweep,
//! and the reward identity check.
//!
//! Every run follows the same shape: resolve an [`ExperimentConfig`], write a
//! manifest into the output directory before any compute starts, produce CSV
//! artifacts, then finalize the manifest with the elapsed wall clock. A
//! manifest is itself a valid config file, so any run can be reproduced from
//! its manifest alone.

mod compare;
mod config;
mod evaluate;
mod training;
mod verify;

pub use compare::{
    compare_models, compare_table_csv, rainy_application_mass, sweep_table_csv, sweep_w3,
    CompareRow, SweepRow,
};
pub use config::{
    strip_manifest_metadata, ExperimentConfig, ManifestMeta, ModelKind, NetworkShape, RunKind,
    WeatherSourceKind,
};
pub use evaluate::{evaluate_policy, run_eval, EvalReport};
pub use training::{run_training, TrainingOutput};
pub use verify::{verify_rewards, RewardCheckReport, RewardCheckRow, REWARD_TOLERANCE};

/// Derives an independent per-component seed from the run's master seed.
///
/// Streams keep the network initialization, the agent's exploration rng, and
/// future consumers decorrelated while staying reproducible from one number.
/// SplitMix64 finalizer; distinct streams of the same master never collide in
/// practice.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed stream for network weight initialization.
pub(crate) const STREAM_NETWORK: u64 = 1;
/// Seed stream for the agent's action/batch sampling rng.
pub(crate) const STREAM_AGENT: u64 = 2;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_across_streams_and_masters() {
        assert_ne!(derive_seed(0, STREAM_NETWORK), derive_seed(0, STREAM_AGENT));
        assert_ne!(derive_seed(0, STREAM_NETWORK), derive_seed(1, STREAM_NETWORK));
        // Stable across calls.
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
    }
}

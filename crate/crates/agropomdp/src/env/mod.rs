//! Surrogate daily-timestep maize environment: a rain-fed nitrogen-management
//! task with declared soil/crop dynamics, four observation modes, a
//! discretized fertilizer action set, and a yield-minus-cost reward.

use crate::error::{Error, Result};
use crate::weather::WeatherSeries;

mod dynamics;
mod environment;
mod state;

pub use dynamics::{advance_crop, temperature_response, DayOutcome};
pub use environment::{CropEnv, EpisodeSummary};
pub use state::{CropState, STATE_VARIABLE_NAMES};

/// Number of state variables exposed by the full observation modes.
pub const FULL_OBS_DIM: usize = 28;
/// Number of state variables exposed by the reduced observation modes.
pub const REDUCED_OBS_DIM: usize = 10;
/// Number of discrete fertilizer actions (0, 10, ..., 200 kg/ha).
pub const ACTION_COUNT: usize = 21;

/// How the environment is presented to the agent: full (28-variable) or
/// reduced (10-variable) state, consumed either as a single current vector
/// or as a recent-history window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservationMode {
    Mdp28,
    Mdp10,
    Pomdp28,
    Pomdp10,
}

impl ObservationMode {
    /// Length of the per-day observation vector.
    pub fn variable_count(&self) -> usize {
        match self {
            ObservationMode::Mdp28 | ObservationMode::Pomdp28 => FULL_OBS_DIM,
            ObservationMode::Mdp10 | ObservationMode::Pomdp10 => REDUCED_OBS_DIM,
        }
    }

    /// Window modes feed a recent-history window to a recurrent network;
    /// the others feed only the current vector to a feedforward network.
    pub fn uses_window(&self) -> bool {
        matches!(self, ObservationMode::Pomdp28 | ObservationMode::Pomdp10)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ObservationMode::Mdp28 => "mdp28",
            ObservationMode::Mdp10 => "mdp10",
            ObservationMode::Pomdp28 => "pomdp28",
            ObservationMode::Pomdp10 => "pomdp10",
        }
    }

    /// Parses a mode name; accepts any case and an optional hyphen
    /// (`MDP-10` and `mdp10` both work).
    pub fn parse(text: &str) -> Result<ObservationMode> {
        let canon: String = text
            .trim()
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        match canon.as_str() {
            "mdp28" => Ok(ObservationMode::Mdp28),
            "mdp10" => Ok(ObservationMode::Mdp10),
            "pomdp28" => Ok(ObservationMode::Pomdp28),
            "pomdp10" => Ok(ObservationMode::Pomdp10),
            _ => Err(Error::Config(format!(
                "unknown observation mode {text:?} (expected mdp28, mdp10, pomdp28, or pomdp10)"
            ))),
        }
    }
}

impl std::fmt::Display for ObservationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Reward coefficients: w1 prices yield, w2 prices applied nitrogen, and w3
/// prices leached nitrate. The default penalizes leaching at five times the
/// fertilizer price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

/// Leaching-penalty multiplier applied to w2 when none is given explicitly.
pub const DEFAULT_W3_MULTIPLIER: f64 = 5.0;

impl RewardWeights {
    /// Builds weights with the default leaching multiplier w3 = 5 * w2.
    pub fn new(w1: f64, w2: f64) -> RewardWeights {
        RewardWeights { w1, w2, w3: DEFAULT_W3_MULTIPLIER * w2 }
    }

    /// The 1999-season price set used throughout the reported experiments.
    pub fn season_1999() -> RewardWeights {
        RewardWeights::new(0.07087, 0.39)
    }

    /// Replaces w3 with `multiplier * w2`.
    pub fn with_w3_multiplier(mut self, multiplier: f64) -> RewardWeights {
        self.w3 = multiplier * self.w2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("w1", self.w1), ("w2", self.w2), ("w3", self.w3)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "reward weight {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for RewardWeights {
    fn default() -> RewardWeights {
        RewardWeights::season_1999()
    }
}

/// Decodes a discrete action index into a nitrogen application in kg/ha.
/// Index 0 is the explicit no-application action; indices 1..=20 apply
/// 10 * index.
pub fn decode_action(index: usize) -> Result<f64> {
    if index >= ACTION_COUNT {
        return Err(Error::Index(format!(
            "action index {index} out of range 0..{ACTION_COUNT}"
        )));
    }
    Ok(10.0 * index as f64)
}

/// Daily reward: fertilizer and leaching costs every day, plus the yield
/// revenue term on the harvest day.
pub fn compute_reward(
    applied_n: f64,
    leached_today: f64,
    yield_at_harvest: Option<f64>,
    weights: &RewardWeights,
) -> Result<f64> {
    weights.validate()?;
    for (name, v) in [("applied nitrogen", applied_n), ("leached nitrate", leached_today)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    let mut reward = -weights.w2 * applied_n - weights.w3 * leached_today;
    if let Some(y) = yield_at_harvest {
        if !y.is_finite() || y < 0.0 {
            return Err(Error::Domain(format!(
                "yield must be finite and non-negative, got {y}"
            )));
        }
        reward += weights.w1 * y;
    }
    Ok(reward)
}

/// Fixed fertilization plans used as non-learned baselines, as
/// (day-after-planting, kg/ha) pairs. Variant 1 applies 56 kg/ha once at
/// planting; variant 2 splits 224 kg/ha into 112 at planting and 112 at
/// day 40. Only the season totals are externally anchored; the timings are
/// this toolkit's choice.
pub fn expert_schedule(variant: u8) -> Result<Vec<(u32, f64)>> {
    match variant {
        1 => Ok(vec![(1, 56.0)]),
        2 => Ok(vec![(1, 112.0), (40, 112.0)]),
        _ => Err(Error::Config(format!("unknown expert variant {variant} (expected 1 or 2)"))),
    }
}

/// Soil water and nitrogen parameters for the surrogate dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct SoilParams {
    /// Plant-available water the bucket can hold (mm); excess runs off.
    pub water_capacity_mm: f64,
    /// Water content at planting (mm).
    pub initial_water_mm: f64,
    /// Water level below which transpiration and growth are reduced (mm).
    pub stress_water_mm: f64,
    /// Mineral nitrogen available at planting (kg/ha).
    pub initial_nitrogen: f64,
    /// Fraction of soil nitrogen leachable per day at saturating rain.
    pub leach_coefficient: f64,
    /// Rain depth at which the leaching response reaches half strength (mm).
    pub leach_rain_half: f64,
    /// Fraction of soil nitrogen denitrified per day in waterlogged soil.
    pub denit_coefficient: f64,
    /// Fraction of water capacity above which denitrification ramps in.
    pub denit_onset_fraction: f64,
    /// Soil nitrogen at which uptake reaches half of crop demand (kg/ha).
    pub uptake_n_half: f64,
    /// Potential evapotranspiration per unit solar radiation (mm per MJ/m2).
    pub et_coefficient: f64,
}

impl Default for SoilParams {
    fn default() -> SoilParams {
        SoilParams {
            water_capacity_mm: 150.0,
            initial_water_mm: 120.0,
            stress_water_mm: 90.0,
            initial_nitrogen: 50.0,
            leach_coefficient: 0.08,
            leach_rain_half: 15.0,
            denit_coefficient: 0.02,
            denit_onset_fraction: 0.8,
            uptake_n_half: 25.0,
            et_coefficient: 0.22,
        }
    }
}

impl SoilParams {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("soil.water_capacity_mm", self.water_capacity_mm),
            ("soil.stress_water_mm", self.stress_water_mm),
            ("soil.leach_rain_half", self.leach_rain_half),
            ("soil.uptake_n_half", self.uptake_n_half),
            ("soil.et_coefficient", self.et_coefficient),
        ];
        for (name, v) in positives {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let non_negatives = [
            ("soil.initial_water_mm", self.initial_water_mm),
            ("soil.initial_nitrogen", self.initial_nitrogen),
        ];
        for (name, v) in non_negatives {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        let fractions = [
            ("soil.leach_coefficient", self.leach_coefficient),
            ("soil.denit_coefficient", self.denit_coefficient),
            ("soil.denit_onset_fraction", self.denit_onset_fraction),
        ];
        for (name, v) in fractions {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.initial_water_mm > self.water_capacity_mm {
            return Err(Error::Config(format!(
                "soil.initial_water_mm {} exceeds capacity {}",
                self.initial_water_mm, self.water_capacity_mm
            )));
        }
        Ok(())
    }
}

/// Crop phenology and growth parameters for the surrogate dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct CropParams {
    /// Base temperature for thermal-time accumulation (deg C).
    pub base_temp: f64,
    /// Trapezoidal growth response: zero at or below this temperature.
    pub temp_low: f64,
    /// Lower edge of the optimal temperature plateau.
    pub temp_opt_low: f64,
    /// Upper edge of the optimal temperature plateau.
    pub temp_opt_high: f64,
    /// Zero growth at or above this temperature.
    pub temp_high: f64,
    /// Radiation-use efficiency (g biomass per MJ intercepted).
    pub rue: f64,
    /// Canopy light-extinction coefficient.
    pub k_ext: f64,
    /// Fraction of final biomass recovered as grain.
    pub harvest_index: f64,
    /// Plant population (plants/m2).
    pub plant_population: f64,
    /// Cumulative thermal-time boundaries between successive growth stages;
    /// stage index is 1 plus the number of boundaries passed.
    pub stage_thresholds_gdd: Vec<f64>,
    /// Thermal time at physiological maturity; reaching it ends the season.
    pub maturity_gdd: f64,
    /// Thermal time per emitted leaf (deg C d per leaf tip).
    pub gdd_per_leaf: f64,
    /// Leaf count at which the canopy stops adding leaves.
    pub max_leaves: f64,
    /// Leaf-area index of the closed canopy.
    pub max_lai: f64,
    /// Nitrogen demand per unit thermal time for each growth stage
    /// (kg/ha per deg C d, one entry per stage). Tying demand to thermal
    /// development keeps a stage's total demand independent of how many
    /// calendar days it spans.
    pub n_demand_by_stage: Vec<f64>,
    /// Grain nitrogen concentration under no stress (mass fraction).
    pub grain_n_fraction: f64,
    /// Rooting-front depth at planting (cm).
    pub root_depth_init_cm: f64,
    /// Root deepening per unit thermal time (cm per deg C d).
    pub root_depth_per_gdd: f64,
    /// Maximum rooting depth (cm).
    pub root_depth_max_cm: f64,
    /// Water-table depth; constant in this rain-fed surrogate (cm).
    pub water_table_cm: f64,
}

impl Default for CropParams {
    fn default() -> CropParams {
        CropParams {
            base_temp: 10.0,
            temp_low: 8.0,
            temp_opt_low: 18.0,
            temp_opt_high: 26.0,
            temp_high: 40.0,
            rue: 1.6,
            k_ext: 0.6,
            harvest_index: 0.52,
            plant_population: 7.2,
            stage_thresholds_gdd: vec![100.0, 250.0, 450.0, 700.0, 950.0, 1200.0, 1400.0, 1600.0],
            maturity_gdd: 1600.0,
            gdd_per_leaf: 35.0,
            max_leaves: 20.0,
            max_lai: 5.0,
            n_demand_by_stage: vec![0.04, 0.08, 0.22, 0.30, 0.30, 0.22, 0.12, 0.05, 0.0],
            grain_n_fraction: 0.0125,
            root_depth_init_cm: 5.0,
            root_depth_per_gdd: 0.1,
            root_depth_max_cm: 150.0,
            water_table_cm: 200.0,
        }
    }
}

impl CropParams {
    /// Number of growth stages implied by the threshold list.
    pub fn stage_count(&self) -> usize {
        self.stage_thresholds_gdd.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("crop.rue", self.rue),
            ("crop.k_ext", self.k_ext),
            ("crop.plant_population", self.plant_population),
            ("crop.maturity_gdd", self.maturity_gdd),
            ("crop.gdd_per_leaf", self.gdd_per_leaf),
            ("crop.max_leaves", self.max_leaves),
            ("crop.max_lai", self.max_lai),
            ("crop.root_depth_max_cm", self.root_depth_max_cm),
            ("crop.water_table_cm", self.water_table_cm),
        ];
        for (name, v) in positives {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if !self.base_temp.is_finite() {
            return Err(Error::Config("crop.base_temp must be finite".into()));
        }
        if !(self.temp_low < self.temp_opt_low
            && self.temp_opt_low <= self.temp_opt_high
            && self.temp_opt_high < self.temp_high)
        {
            return Err(Error::Config(format!(
                "temperature response must be ordered low < opt_low <= opt_high < high, got \
                 {} / {} / {} / {}",
                self.temp_low, self.temp_opt_low, self.temp_opt_high, self.temp_high
            )));
        }
        if !(0.0..=1.0).contains(&self.harvest_index) {
            return Err(Error::Config(format!(
                "crop.harvest_index must lie in [0, 1], got {}",
                self.harvest_index
            )));
        }
        if self.stage_thresholds_gdd.is_empty()
            || self.stage_thresholds_gdd.windows(2).any(|w| w[0] >= w[1])
            || self.stage_thresholds_gdd.iter().any(|t| !t.is_finite() || *t <= 0.0)
        {
            return Err(Error::Config(
                "crop.stage_thresholds_gdd must be positive and strictly increasing".into(),
            ));
        }
        if self.n_demand_by_stage.len() != self.stage_count() {
            return Err(Error::Config(format!(
                "crop.n_demand_by_stage has {} entries for {} stages",
                self.n_demand_by_stage.len(),
                self.stage_count()
            )));
        }
        if self.n_demand_by_stage.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Config(
                "crop.n_demand_by_stage entries must be finite and non-negative".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.grain_n_fraction) {
            return Err(Error::Config(format!(
                "crop.grain_n_fraction must lie in [0, 1], got {}",
                self.grain_n_fraction
            )));
        }
        for (name, v) in [
            ("crop.root_depth_init_cm", self.root_depth_init_cm),
            ("crop.root_depth_per_gdd", self.root_depth_per_gdd),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-variable divisors applied to observations before they reach the
/// agent, in state-variable order. Raw magnitudes span five orders of
/// magnitude, which trains poorly.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationScaling {
    pub divisors: [f64; FULL_OBS_DIM],
}

impl Default for ObservationScaling {
    fn default() -> ObservationScaling {
        ObservationScaling {
            divisors: [
                200.0,     // cumsumfert
                180.0,     // dap
                9.0,       // istage
                10.0,      // pltpop
                50.0,      // rain
                0.5,       // sw
                40.0,      // tmax
                40.0,      // tmin
                20.0,      // vstage
                5.0,       // xlai
                20.0,      // cleach
                10.0,      // cnox
                20.0,      // dtt
                8.0,       // es
                10_000.0,  // grnwt
                1.0,       // nstres
                0.02,      // pcngrn
                150.0,     // rtdep
                50.0,      // runoff
                30.0,      // srad
                1.0,       // swfac
                5.0,       // tleachd
                2.0,       // tnoxd
                20_000.0,  // topwt
                1.0,       // totir
                5.0,       // trnu
                300.0,     // wtdep
                300.0,     // wtnup
            ],
        }
    }
}

impl ObservationScaling {
    /// Divisors of 1 everywhere: observations equal raw state values.
    pub fn identity() -> ObservationScaling {
        ObservationScaling { divisors: [1.0; FULL_OBS_DIM] }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, d) in self.divisors.iter().enumerate() {
            if !d.is_finite() || *d <= 0.0 {
                return Err(Error::Config(format!(
                    "observation divisor for {} must be finite and positive, got {d}",
                    STATE_VARIABLE_NAMES[i]
                )));
            }
        }
        Ok(())
    }
}

/// Everything needed to run one growing season: the weather to replay, the
/// reward prices, where in the series planting happens, the episode cap, and
/// the surrogate's soil/crop parameters.
#[derive(Debug, Clone)]
pub struct EnvConfig {
    pub weather: WeatherSeries,
    pub weights: RewardWeights,
    pub mode: ObservationMode,
    /// Index into the weather series of the first day after planting.
    pub planting_offset: usize,
    /// Hard episode cap in days; harvest happens here if maturity never hits.
    pub episode_days: usize,
    pub soil: SoilParams,
    pub crop: CropParams,
    pub scaling: ObservationScaling,
}

/// Default episode length in days.
pub const DEFAULT_EPISODE_DAYS: usize = 180;

impl EnvConfig {
    /// Baseline configuration: default parameters, given weather and mode.
    pub fn baseline(weather: WeatherSeries, mode: ObservationMode) -> EnvConfig {
        EnvConfig {
            weather,
            weights: RewardWeights::default(),
            mode,
            planting_offset: 0,
            episode_days: DEFAULT_EPISODE_DAYS,
            soil: SoilParams::default(),
            crop: CropParams::default(),
            scaling: ObservationScaling::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        self.soil.validate()?;
        self.crop.validate()?;
        self.scaling.validate()?;
        if self.episode_days == 0 {
            return Err(Error::Config("episode_days must be at least 1".into()));
        }
        let needed = self.planting_offset + self.episode_days;
        if self.weather.len() < needed {
            return Err(Error::Data(format!(
                "weather series {:?} has {} records but planting offset {} plus {} episode days \
                 needs {needed}",
                self.weather.label(),
                self.weather.len(),
                self.planting_offset,
                self.episode_days
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weather::{synthesize_weather, ClimateParams};

    fn test_weather(days: u32) -> WeatherSeries {
        synthesize_weather(11, days, &ClimateParams::default()).unwrap()
    }

    #[test]
    fn decode_action_maps_index_to_ten_kilograms_each() {
        assert_eq!(decode_action(0).unwrap(), 0.0);
        assert_eq!(decode_action(1).unwrap(), 10.0);
        assert_eq!(decode_action(20).unwrap(), 200.0);
    }

    #[test]
    fn decode_action_rejects_out_of_range_index() {
        let err = decode_action(21).unwrap_err();
        assert_eq!(err.category(), "index");
    }

    #[test]
    fn reward_on_harvest_day_includes_yield_revenue() {
        let w = RewardWeights::season_1999();
        let r = compute_reward(0.0, 0.0, Some(9243.0), &w).unwrap();
        assert_eq!(r, 0.07087 * 9243.0);
        assert!((r - 655.05).abs() < 2e-3);
    }

    #[test]
    fn reward_on_ordinary_day_charges_fertilizer_and_leaching() {
        let w = RewardWeights::season_1999();
        let r = compute_reward(20.0, 0.1, None, &w).unwrap();
        assert!((r - (-7.995)).abs() < 1e-12);
    }

    #[test]
    fn season_total_reconstruction_matches_reported_scale() {
        // Whole-season identity at the reported outcome scale.
        let w = RewardWeights::season_1999();
        let total = w.w1 * 9243.0 - w.w2 * 180.0 - w.w3 * 0.12;
        assert!((total - 584.0).abs() <= 2.0, "got {total}");
    }

    #[test]
    fn reward_rejects_negative_inputs() {
        let w = RewardWeights::season_1999();
        assert_eq!(compute_reward(-1.0, 0.0, None, &w).unwrap_err().category(), "domain");
        assert_eq!(compute_reward(0.0, -0.5, None, &w).unwrap_err().category(), "domain");
        assert_eq!(compute_reward(0.0, 0.0, Some(-3.0), &w).unwrap_err().category(), "domain");
    }

    #[test]
    fn default_weights_use_five_to_one_leaching_multiplier() {
        let w = RewardWeights::season_1999();
        assert_eq!(w.w1, 0.07087);
        assert_eq!(w.w2, 0.39);
        assert_eq!(w.w3, 5.0 * 0.39);
        let w0 = w.with_w3_multiplier(0.0);
        assert_eq!(w0.w3, 0.0);
    }

    #[test]
    fn expert_plans_hit_their_season_totals() {
        let plan1 = expert_schedule(1).unwrap();
        assert_eq!(plan1.iter().map(|(_, n)| n).sum::<f64>(), 56.0);
        let plan2 = expert_schedule(2).unwrap();
        assert_eq!(plan2.iter().map(|(_, n)| n).sum::<f64>(), 224.0);
        let day_40: Vec<_> = plan2.iter().filter(|(d, _)| *d == 40).collect();
        assert_eq!(day_40, vec![&(40u32, 112.0)]);
        assert_eq!(expert_schedule(3).unwrap_err().category(), "config");
    }

    #[test]
    fn mode_parsing_accepts_hyphens_and_case() {
        assert_eq!(ObservationMode::parse("MDP-28").unwrap(), ObservationMode::Mdp28);
        assert_eq!(ObservationMode::parse("pomdp10").unwrap(), ObservationMode::Pomdp10);
        assert_eq!(ObservationMode::parse("POMDP_28").unwrap(), ObservationMode::Pomdp28);
        assert!(ObservationMode::parse("mdp12").is_err());
    }

    #[test]
    fn mode_dimensions_and_windowing() {
        assert_eq!(ObservationMode::Mdp28.variable_count(), 28);
        assert_eq!(ObservationMode::Pomdp10.variable_count(), 10);
        assert!(ObservationMode::Pomdp28.uses_window());
        assert!(!ObservationMode::Mdp10.uses_window());
    }

    #[test]
    fn config_requires_weather_to_cover_the_season() {
        let short = EnvConfig::baseline(test_weather(120), ObservationMode::Mdp10);
        assert_eq!(short.validate().unwrap_err().category(), "data");

        let mut offset = EnvConfig::baseline(test_weather(200), ObservationMode::Mdp10);
        offset.planting_offset = 30;
        assert_eq!(offset.validate().unwrap_err().category(), "data");
        offset.planting_offset = 20;
        offset.validate().unwrap();
    }

    #[test]
    fn config_rejects_bad_parameters() {
        let mut cfg = EnvConfig::baseline(test_weather(200), ObservationMode::Mdp10);
        cfg.soil.leach_coefficient = 1.5;
        assert_eq!(cfg.validate().unwrap_err().category(), "config");

        let mut cfg = EnvConfig::baseline(test_weather(200), ObservationMode::Mdp10);
        cfg.crop.n_demand_by_stage.pop();
        assert_eq!(cfg.validate().unwrap_err().category(), "config");

        let mut cfg = EnvConfig::baseline(test_weather(200), ObservationMode::Mdp10);
        cfg.scaling.divisors[3] = 0.0;
        assert_eq!(cfg.validate().unwrap_err().category(), "config");
    }
}

use super::state::{volumetric_water, CropState};
use super::{CropParams, SoilParams};
use crate::error::{Error, Result};
use crate::weather::WeatherRecord;

/// Stage index at which grain fill begins and grain nitrogen concentration
/// becomes meaningful.
const GRAIN_FILL_STAGE: u8 = 6;

/// Per-day byproducts of `advance_crop`, useful for diagnostics; all values
/// also land in the returned state's flow fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayOutcome {
    pub leached: f64,
    pub denitrified: f64,
    pub uptake: f64,
    pub growth: f64,
}

/// Trapezoidal temperature response gating daily growth: zero at or below
/// `temp_low`, rising linearly to 1 at `temp_opt_low`, flat across the
/// optimal band, falling linearly to zero at `temp_high`.
pub fn temperature_response(mean_temp: f64, crop: &CropParams) -> f64 {
    if mean_temp <= crop.temp_low || mean_temp >= crop.temp_high {
        0.0
    } else if mean_temp < crop.temp_opt_low {
        (mean_temp - crop.temp_low) / (crop.temp_opt_low - crop.temp_low)
    } else if mean_temp <= crop.temp_opt_high {
        1.0
    } else {
        (crop.temp_high - mean_temp) / (crop.temp_high - crop.temp_opt_high)
    }
}

fn stage_for(gdd: f64, crop: &CropParams) -> u8 {
    let passed = crop.stage_thresholds_gdd.iter().take_while(|t| gdd >= **t).count();
    (1 + passed) as u8
}

/// Advances the crop and soil by one day under the given weather and
/// fertilizer application, returning the next state.
///
/// Update order: phenology from thermal time; the water bucket (rain in,
/// runoff past capacity, radiation-driven evapotranspiration out); the
/// nitrogen pool (fertilizer in, then leaching, denitrification, and crop
/// uptake drawn sequentially, each capped by what remains so nitrogen is
/// never created); then radiation-driven growth gated by the scarcest of
/// water and nitrogen and by the temperature response.
pub fn advance_crop(
    state: &CropState,
    weather: &WeatherRecord,
    applied_n: f64,
    soil: &SoilParams,
    crop: &CropParams,
) -> Result<(CropState, DayOutcome)> {
    weather.validate().map_err(|e| Error::Data(format!("weather for day {}: {e}", weather.day)))?;
    if !applied_n.is_finite() || applied_n < 0.0 {
        return Err(Error::Domain(format!(
            "applied nitrogen must be finite and non-negative, got {applied_n}"
        )));
    }

    let mut s = state.clone();
    s.dap = state.dap + 1;
    s.rain = weather.rain;
    s.srad = weather.srad;
    s.tmax = weather.tmax;
    s.tmin = weather.tmin;

    // Phenology: thermal time drives stage, leaf count, canopy, and roots.
    let mean_temp = weather.mean_temp();
    s.dtt = (mean_temp - crop.base_temp).max(0.0);
    s.gdd = state.gdd + s.dtt;
    s.istage = stage_for(s.gdd, crop);
    s.vstage = (s.gdd / crop.gdd_per_leaf).min(crop.max_leaves);
    s.xlai = crop.max_lai * s.vstage / crop.max_leaves;
    s.rtdep =
        (crop.root_depth_init_cm + crop.root_depth_per_gdd * s.gdd).min(crop.root_depth_max_cm);

    // Water bucket.
    let after_rain = state.soil_water + weather.rain;
    s.runoff = (after_rain - soil.water_capacity_mm).max(0.0);
    let held = after_rain - s.runoff;
    let potential_et = soil.et_coefficient * weather.srad;
    let et = (potential_et * (held / soil.stress_water_mm).min(1.0)).min(held);
    s.soil_water = held - et;
    // Reported soil evaporation is the bare-soil share of the day's ET.
    s.es = et * (-crop.k_ext * s.xlai).exp();
    s.sw = volumetric_water(s.soil_water, soil.water_capacity_mm);
    s.swfac = (s.soil_water / soil.stress_water_mm).min(1.0);

    // Nitrogen pool with sequential, capped outflows.
    let mut pool = state.soil_nitrogen + applied_n;
    s.cumsumfert = state.cumsumfert + applied_n;
    let leach_fraction =
        soil.leach_coefficient * weather.rain / (weather.rain + soil.leach_rain_half);
    s.tleachd = (leach_fraction * pool).min(pool);
    pool -= s.tleachd;
    let wetness = ((held / soil.water_capacity_mm - soil.denit_onset_fraction)
        / (1.0 - soil.denit_onset_fraction).max(f64::EPSILON))
    .clamp(0.0, 1.0);
    s.tnoxd = (soil.denit_coefficient * wetness * pool).min(pool);
    pool -= s.tnoxd;
    let demand = crop.n_demand_by_stage[s.istage as usize - 1] * s.dtt;
    let uptake = (demand * (pool / soil.uptake_n_half).min(1.0)).min(pool);
    s.trnu = uptake;
    pool -= uptake;
    s.soil_nitrogen = pool;
    s.nstres = if demand > 0.0 { (s.trnu / demand).min(1.0) } else { 1.0 };
    s.cleach = state.cleach + s.tleachd;
    s.cnox = state.cnox + s.tnoxd;
    s.wtnup = state.wtnup + s.trnu;

    // Growth. The factor 10 converts g/m2 to kg/ha.
    let light = 1.0 - (-crop.k_ext * s.xlai).exp();
    let stress = s.swfac.min(s.nstres);
    let growth =
        10.0 * crop.rue * weather.srad * light * stress * temperature_response(mean_temp, crop);
    s.biomass = state.biomass + growth;
    s.topwt = s.biomass;
    s.pcngrn = if s.istage >= GRAIN_FILL_STAGE {
        crop.grain_n_fraction * (0.6 + 0.4 * s.nstres)
    } else {
        0.0
    };

    let outcome =
        DayOutcome { leached: s.tleachd, denitrified: s.tnoxd, uptake: s.trnu, growth };
    Ok((s, outcome))
}

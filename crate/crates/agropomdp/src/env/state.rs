use super::{EnvConfig, ObservationMode, ObservationScaling, FULL_OBS_DIM, REDUCED_OBS_DIM};

/// Exposed state-variable names, in the fixed order used by every
/// observation projection. The reduced modes take the first ten.
pub const STATE_VARIABLE_NAMES: [&str; FULL_OBS_DIM] = [
    "cumsumfert",
    "dap",
    "istage",
    "pltpop",
    "rain",
    "sw",
    "tmax",
    "tmin",
    "vstage",
    "xlai",
    "cleach",
    "cnox",
    "dtt",
    "es",
    "grnwt",
    "nstres",
    "pcngrn",
    "rtdep",
    "runoff",
    "srad",
    "swfac",
    "tleachd",
    "tnoxd",
    "topwt",
    "totir",
    "trnu",
    "wtdep",
    "wtnup",
];

/// Full simulator state: the 28 exposed variables plus the hidden pools the
/// surrogate integrates. Stock variables (cumsumfert, cleach, cnox, wtnup)
/// are running totals; flow variables (rain, dtt, es, runoff, tleachd,
/// tnoxd, trnu) describe a single day.
#[derive(Debug, Clone, PartialEq)]
pub struct CropState {
    /// Cumulative applied fertilizer nitrogen (kg/ha).
    pub cumsumfert: f64,
    /// Days after planting.
    pub dap: u32,
    /// Growth stage index, 1-based.
    pub istage: u8,
    /// Plant population (plants/m2); constant over an episode.
    pub pltpop: f64,
    /// Rain for the day the agent is about to manage (mm).
    pub rain: f64,
    /// Volumetric soil water content (cm3/cm3).
    pub sw: f64,
    /// Daily maximum air temperature (deg C).
    pub tmax: f64,
    /// Daily minimum air temperature (deg C).
    pub tmin: f64,
    /// Vegetative stage (emitted leaf tips).
    pub vstage: f64,
    /// Leaf-area index.
    pub xlai: f64,
    /// Cumulative nitrate leached (kg/ha).
    pub cleach: f64,
    /// Cumulative nitrogen lost to denitrification (kg/ha).
    pub cnox: f64,
    /// Thermal time accumulated on the last completed day (deg C d).
    pub dtt: f64,
    /// Soil evaporation on the last completed day (mm).
    pub es: f64,
    /// Grain weight; zero until harvest (kg/ha).
    pub grnwt: f64,
    /// Nitrogen-stress factor in [0, 1]; 1 means unstressed.
    pub nstres: f64,
    /// Grain nitrogen concentration (mass fraction).
    pub pcngrn: f64,
    /// Rooting-front depth (cm).
    pub rtdep: f64,
    /// Surface runoff on the last completed day (mm).
    pub runoff: f64,
    /// Solar radiation for the managed day (MJ/m2).
    pub srad: f64,
    /// Water-stress factor in [0, 1]; 1 means unstressed.
    pub swfac: f64,
    /// Nitrate leached on the last completed day (kg/ha).
    pub tleachd: f64,
    /// Denitrification loss on the last completed day (kg/ha).
    pub tnoxd: f64,
    /// Above-ground biomass (kg/ha).
    pub topwt: f64,
    /// Cumulative irrigation; always zero in this rain-fed surrogate (mm).
    pub totir: f64,
    /// Nitrogen taken up by the crop on the last completed day (kg/ha).
    pub trnu: f64,
    /// Water-table depth (cm).
    pub wtdep: f64,
    /// Cumulative crop nitrogen uptake (kg/ha).
    pub wtnup: f64,

    // Hidden pools: integrated by the dynamics, never observed directly.
    /// Plant-available soil water (mm).
    pub soil_water: f64,
    /// Mineral soil nitrogen (kg/ha).
    pub soil_nitrogen: f64,
    /// Total biomass pool (kg/ha); topwt mirrors it.
    pub biomass: f64,
    /// Accumulated thermal time since planting (deg C d).
    pub gdd: f64,
}

impl CropState {
    /// State at planting: stage 1, all totals zero, soil pools at their
    /// configured initial levels. Weather fields are filled separately.
    pub fn at_planting(config: &EnvConfig) -> CropState {
        let soil = &config.soil;
        let crop = &config.crop;
        CropState {
            cumsumfert: 0.0,
            dap: 0,
            istage: 1,
            pltpop: crop.plant_population,
            rain: 0.0,
            sw: volumetric_water(soil.initial_water_mm, soil.water_capacity_mm),
            tmax: 0.0,
            tmin: 0.0,
            vstage: 0.0,
            xlai: 0.0,
            cleach: 0.0,
            cnox: 0.0,
            dtt: 0.0,
            es: 0.0,
            grnwt: 0.0,
            nstres: 1.0,
            pcngrn: 0.0,
            rtdep: crop.root_depth_init_cm,
            runoff: 0.0,
            srad: 0.0,
            swfac: 1.0,
            tleachd: 0.0,
            tnoxd: 0.0,
            topwt: 0.0,
            totir: 0.0,
            trnu: 0.0,
            wtdep: crop.water_table_cm,
            wtnup: 0.0,
            soil_water: soil.initial_water_mm,
            soil_nitrogen: soil.initial_nitrogen,
            biomass: 0.0,
            gdd: 0.0,
        }
    }

    /// The 28 exposed variables in projection order.
    pub fn full_vector(&self) -> [f64; FULL_OBS_DIM] {
        [
            self.cumsumfert,
            self.dap as f64,
            self.istage as f64,
            self.pltpop,
            self.rain,
            self.sw,
            self.tmax,
            self.tmin,
            self.vstage,
            self.xlai,
            self.cleach,
            self.cnox,
            self.dtt,
            self.es,
            self.grnwt,
            self.nstres,
            self.pcngrn,
            self.rtdep,
            self.runoff,
            self.srad,
            self.swfac,
            self.tleachd,
            self.tnoxd,
            self.topwt,
            self.totir,
            self.trnu,
            self.wtdep,
            self.wtnup,
        ]
    }

    /// Projects the state into the given mode's observation vector, scaling
    /// each component by the configured per-variable divisor.
    pub fn observe(&self, mode: ObservationMode, scaling: &ObservationScaling) -> Vec<f64> {
        let full = self.full_vector();
        let take = match mode.variable_count() {
            REDUCED_OBS_DIM => REDUCED_OBS_DIM,
            _ => FULL_OBS_DIM,
        };
        full.iter()
            .zip(scaling.divisors.iter())
            .take(take)
            .map(|(v, d)| v / d)
            .collect()
    }
}

/// Volumetric water content for the reporting fields: the surrogate's bucket
/// is nominally 500 mm of profile, so capacity water reads as capacity/500.
pub(crate) fn volumetric_water(water_mm: f64, _capacity_mm: f64) -> f64 {
    water_mm / 500.0
}

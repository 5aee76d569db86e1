//! Daily weather series: ingestion, climate transforms, synthesis, and
//! monthly summaries.

mod csv;
mod synth;

pub use csv::{load_weather_csv, parse_weather_csv, save_weather_csv, weather_csv_text};
pub use synth::{synthesize_weather, ClimateParams};

use crate::error::{Error, Result};

/// One day of weather: shortwave radiation (MJ/m²/d), temperature extremes
/// (°C), rainfall (mm/d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherRecord {
    pub day: u32,
    pub srad: f64,
    pub tmax: f64,
    pub tmin: f64,
    pub rain: f64,
}

impl WeatherRecord {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("srad", self.srad), ("tmax", self.tmax), ("tmin", self.tmin), ("rain", self.rain)] {
            if !v.is_finite() {
                return Err(Error::Data(format!("day {}: {name} is not finite", self.day)));
            }
        }
        if self.tmax < self.tmin {
            return Err(Error::Data(format!(
                "day {}: tmax {} is below tmin {}",
                self.day, self.tmax, self.tmin
            )));
        }
        if self.srad < 0.0 {
            return Err(Error::Data(format!("day {}: negative srad {}", self.day, self.srad)));
        }
        if self.rain < 0.0 {
            return Err(Error::Data(format!("day {}: negative rain {}", self.day, self.rain)));
        }
        Ok(())
    }

    /// Daily mean temperature, (tmax + tmin) / 2.
    pub fn mean_temp(&self) -> f64 {
        0.5 * (self.tmax + self.tmin)
    }
}

/// Contiguous run of daily records plus a human-readable label. Immutable
/// after construction; transforms return new series.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherSeries {
    label: String,
    records: Vec<WeatherRecord>,
}

impl WeatherSeries {
    pub fn new(label: impl Into<String>, records: Vec<WeatherRecord>) -> Result<Self> {
        for r in &records {
            r.validate()?;
        }
        for pair in records.windows(2) {
            if pair[1].day != pair[0].day + 1 {
                return Err(Error::Data(format!(
                    "day gap: {} is followed by {}",
                    pair[0].day, pair[1].day
                )));
            }
        }
        Ok(Self { label: label.into(), records })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn records(&self) -> &[WeatherRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_day(&self) -> Option<u32> {
        self.records.first().map(|r| r.day)
    }

    /// Record for the i-th day of the series (0-based position).
    pub fn get(&self, idx: usize) -> Option<&WeatherRecord> {
        self.records.get(idx)
    }

    /// Adds ΔT to every tmax and tmin; srad and rain untouched. The daily
    /// spread tmax - tmin and the zero-rain day set are preserved. ΔT = 0
    /// returns an identical series, label included.
    pub fn shift_temperature(&self, delta_t: f64) -> WeatherSeries {
        assert!(delta_t.is_finite(), "temperature shift must be finite");
        if delta_t == 0.0 {
            return self.clone();
        }
        let records = self
            .records
            .iter()
            .map(|r| WeatherRecord { tmax: r.tmax + delta_t, tmin: r.tmin + delta_t, ..*r })
            .collect();
        WeatherSeries { label: format!("{}{:+}C", self.label, delta_t), records }
    }

    /// Multiplies every rain amount by `factor`; temperatures and srad are
    /// untouched. Only reductions are allowed, so factor must lie in [0, 1].
    pub fn scale_rainfall(&self, factor: f64) -> Result<WeatherSeries> {
        if !(0.0..=1.0).contains(&factor) {
            return Err(Error::Config(format!(
                "rain scale factor must be in [0, 1], got {factor}"
            )));
        }
        if factor == 1.0 {
            return Ok(self.clone());
        }
        let records = self
            .records
            .iter()
            .map(|r| WeatherRecord { rain: r.rain * factor, ..*r })
            .collect();
        Ok(WeatherSeries { label: format!("{} rain x{factor}", self.label), records })
    }
}

/// Uniform climate perturbation: a temperature shift applied to both daily
/// extremes and a rainfall reduction factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub temp_shift: f64,
    pub rain_factor: f64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self { temp_shift: 0.0, rain_factor: 1.0 }
    }
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.temp_shift.is_finite() {
            return Err(Error::Config("temperature shift must be finite".into()));
        }
        if !(0.0..=1.0).contains(&self.rain_factor) {
            return Err(Error::Config(format!(
                "rain scale factor must be in [0, 1], got {}",
                self.rain_factor
            )));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.temp_shift == 0.0 && self.rain_factor == 1.0
    }

    pub fn apply(&self, series: &WeatherSeries) -> Result<WeatherSeries> {
        self.validate()?;
        series.shift_temperature(self.temp_shift).scale_rainfall(self.rain_factor)
    }
}

/// Mean temperature and total rainfall over one 30-day bucket. The final
/// bucket may cover fewer days.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonthlySummary {
    pub month: u32,
    pub mean_temp: f64,
    pub total_rain: f64,
}

/// 30-day bucket summaries, months numbered from 1.
pub fn monthly_summary(series: &WeatherSeries) -> Result<Vec<MonthlySummary>> {
    if series.is_empty() {
        return Err(Error::Data("cannot summarize an empty weather series".into()));
    }
    Ok(series
        .records()
        .chunks(30)
        .enumerate()
        .map(|(i, chunk)| MonthlySummary {
            month: i as u32 + 1,
            mean_temp: chunk.iter().map(WeatherRecord::mean_temp).sum::<f64>() / chunk.len() as f64,
            total_rain: chunk.iter().map(|r| r.rain).sum(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(day: u32, srad: f64, tmax: f64, tmin: f64, rain: f64) -> WeatherRecord {
        WeatherRecord { day, srad, tmax, tmin, rain }
    }

    fn small_series() -> WeatherSeries {
        WeatherSeries::new(
            "unit",
            vec![
                rec(1, 20.5, 25.0, 12.0, 0.0),
                rec(2, 18.0, 22.5, 10.5, 10.0),
                rec(3, 15.25, 19.0, 9.0, 3.5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn record_invariants_are_enforced() {
        assert!(rec(1, 20.0, 25.0, 12.0, 0.0).validate().is_ok());
        assert!(rec(1, 20.0, 10.0, 15.0, 0.0).validate().is_err());
        assert!(rec(1, -1.0, 25.0, 12.0, 0.0).validate().is_err());
        assert!(rec(1, 20.0, 25.0, 12.0, -0.5).validate().is_err());
        assert!(rec(1, 20.0, f64::NAN, 12.0, 0.0).validate().is_err());
    }

    #[test]
    fn series_rejects_day_gaps() {
        let err = WeatherSeries::new(
            "gap",
            vec![rec(1, 1.0, 5.0, 1.0, 0.0), rec(2, 1.0, 5.0, 1.0, 0.0), rec(4, 1.0, 5.0, 1.0, 0.0)],
        )
        .unwrap_err();
        assert!(err.to_string().contains("gap"), "{err}");
    }

    #[test]
    fn shift_adds_to_both_extremes_only() {
        let shifted = small_series().shift_temperature(0.5);
        let r = shifted.records()[0];
        assert_eq!((r.tmax, r.tmin), (25.5, 12.5));
        assert_eq!((r.srad, r.rain), (20.5, 0.0));
        assert!(shifted.label().contains("+0.5C"));
    }

    #[test]
    fn zero_shift_is_identity() {
        let s = small_series();
        assert_eq!(s.shift_temperature(0.0), s);
    }

    #[test]
    fn shift_moves_mean_temperature_exactly() {
        let s = small_series();
        let shifted = s.shift_temperature(2.0);
        for (a, b) in s.records().iter().zip(shifted.records()) {
            assert_eq!(b.mean_temp(), a.mean_temp() + 2.0);
        }
    }

    #[test]
    fn rain_scaling_examples() {
        let s = small_series();
        let scaled = s.scale_rainfall(0.8).unwrap();
        assert_eq!(scaled.records()[1].rain, 8.0);
        assert_eq!(scaled.records()[0].rain, 0.0);
        assert_eq!(scaled.records()[1].tmax, 22.5);
        assert_eq!(s.scale_rainfall(1.0).unwrap(), s);
        assert!(s.scale_rainfall(1.2).is_err());
        assert!(s.scale_rainfall(-0.1).is_err());
    }

    #[test]
    fn perturbation_spec_validates_and_applies() {
        let s = small_series();
        let spec = PerturbationSpec { temp_shift: 2.0, rain_factor: 0.5 };
        let out = spec.apply(&s).unwrap();
        assert_eq!(out.records()[1].tmax, 24.5);
        assert_eq!(out.records()[1].rain, 5.0);
        assert!(PerturbationSpec { temp_shift: f64::NAN, rain_factor: 1.0 }.validate().is_err());
        assert!(PerturbationSpec { temp_shift: 0.0, rain_factor: 2.0 }.validate().is_err());
        assert!(PerturbationSpec::default().is_identity());
    }

    #[test]
    fn monthly_summary_constant_series() {
        let records: Vec<WeatherRecord> =
            (1..=60).map(|d| rec(d, 10.0, 20.0, 10.0, 1.0)).collect();
        let s = WeatherSeries::new("const", records).unwrap();
        let summary = monthly_summary(&s).unwrap();
        assert_eq!(summary.len(), 2);
        for m in &summary {
            assert_eq!(m.mean_temp, 15.0);
            assert_eq!(m.total_rain, 30.0);
        }
        assert_eq!(summary[0].month, 1);
        assert_eq!(summary[1].month, 2);
    }

    #[test]
    fn monthly_summary_is_linear_in_shift() {
        let s = small_series();
        let base = monthly_summary(&s).unwrap();
        let shifted = monthly_summary(&s.shift_temperature(2.0)).unwrap();
        for (a, b) in base.iter().zip(&shifted) {
            assert_eq!(b.mean_temp, a.mean_temp + 2.0);
            assert_eq!(b.total_rain, a.total_rain);
        }
    }

    #[test]
    fn monthly_summary_rejects_empty_series() {
        let s = WeatherSeries::new("empty", vec![]).unwrap();
        assert!(monthly_summary(&s).is_err());
    }

    /// Dyadic-valued series so float addition in the transforms is exact.
    fn dyadic_series() -> impl Strategy<Value = WeatherSeries> {
        (1u32..200, proptest::collection::vec((0i32..160, 0i32..60, 0i32..120, prop_oneof![Just(0i32), 1i32..2400]), 1..80))
            .prop_map(|(start, rows)| {
                let records = rows
                    .into_iter()
                    .enumerate()
                    .map(|(i, (tmin_q, spread_q, srad_q, rain_q))| {
                        let tmin = tmin_q as f64 * 0.25 - 20.0;
                        WeatherRecord {
                            day: start + i as u32,
                            srad: srad_q as f64 * 0.25,
                            tmax: tmin + spread_q as f64 * 0.25,
                            tmin,
                            rain: rain_q as f64 * 0.125,
                        }
                    })
                    .collect();
                WeatherSeries::new("prop", records).unwrap()
            })
    }

    proptest! {
        #[test]
        fn transforms_commute(series in dyadic_series(), dt_q in -40i32..40, f_q in 0u32..=8) {
            let dt = dt_q as f64 * 0.25;
            let factor = f_q as f64 / 8.0;
            let a = series.shift_temperature(dt).scale_rainfall(factor).unwrap();
            let b = series.scale_rainfall(factor).unwrap().shift_temperature(dt);
            prop_assert_eq!(a.records(), b.records());
        }

        #[test]
        fn positive_scaling_preserves_zero_rain_days_exactly(series in dyadic_series(), f_q in 1u32..=8) {
            let factor = f_q as f64 / 8.0;
            let scaled = series.scale_rainfall(factor).unwrap();
            for (a, b) in series.records().iter().zip(scaled.records()) {
                prop_assert_eq!(a.rain == 0.0, b.rain == 0.0);
            }
        }

        #[test]
        fn zero_factor_removes_all_rain(series in dyadic_series()) {
            let scaled = series.scale_rainfall(0.0).unwrap();
            prop_assert!(scaled.records().iter().all(|r| r.rain == 0.0));
        }

        #[test]
        fn shift_preserves_daily_spread_exactly(series in dyadic_series(), dt_q in -40i32..40) {
            let dt = dt_q as f64 * 0.25;
            let shifted = series.shift_temperature(dt);
            for (a, b) in series.records().iter().zip(shifted.records()) {
                prop_assert_eq!(a.tmax - a.tmin, b.tmax - b.tmin);
                prop_assert_eq!(a.srad, b.srad);
                prop_assert_eq!(a.rain, b.rain);
            }
        }

        #[test]
        fn transforms_never_mutate_the_original(series in dyadic_series()) {
            let copy = series.clone();
            let _ = series.shift_temperature(3.0);
            let _ = series.scale_rainfall(0.5).unwrap();
            prop_assert_eq!(series, copy);
        }
    }
}

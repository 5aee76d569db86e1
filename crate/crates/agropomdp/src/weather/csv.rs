//! Weather CSV format: `day,srad,tmax,tmin,rain` header, one record per
//! line, decimal points, UTF-8. Errors carry 1-based file line numbers.

use std::path::Path;

use super::{WeatherRecord, WeatherSeries};
use crate::error::{Error, Result};
use crate::fsutil::atomic_write;

const CSV_HEADER: &str = "day,srad,tmax,tmin,rain";
const COLUMNS: [&str; 5] = ["day", "srad", "tmax", "tmin", "rain"];

pub fn load_weather_csv(path: &Path) -> Result<WeatherSeries> {
    let text = std::fs::read_to_string(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "weather".to_string());
    parse_weather_csv(&text, &label).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_weather_csv(text: &str, label: &str) -> Result<WeatherSeries> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Data("empty file, expected a header line".into()));
    };
    if header.trim_end_matches('\r') != CSV_HEADER {
        return Err(Error::Data(format!(
            "line 1: header {header:?} does not match {CSV_HEADER:?}"
        )));
    }

    let mut records: Vec<WeatherRecord> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS.len() {
            return Err(Error::Data(format!(
                "line {line_no}: expected {} columns, found {}",
                COLUMNS.len(),
                fields.len()
            )));
        }
        let day: u32 = fields[0].trim().parse().map_err(|_| {
            Error::Data(format!("line {line_no}: day {:?} is not a whole number", fields[0]))
        })?;
        let mut nums = [0.0f64; 4];
        for (slot, (field, name)) in nums.iter_mut().zip(fields[1..].iter().zip(&COLUMNS[1..])) {
            *slot = field.trim().parse().map_err(|_| {
                Error::Data(format!("line {line_no}: {name} {field:?} is not a number"))
            })?;
        }
        let record = WeatherRecord { day, srad: nums[0], tmax: nums[1], tmin: nums[2], rain: nums[3] };
        record
            .validate()
            .map_err(|e| Error::Data(format!("line {line_no}: {e}")))?;
        if let Some(prev) = records.last() {
            if day != prev.day + 1 {
                return Err(Error::Data(format!(
                    "line {line_no}: day gap: {} is followed by {day}",
                    prev.day
                )));
            }
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::Data("no data rows after the header".into()));
    }
    WeatherSeries::new(label, records)
}

/// Serializes with `{}` float formatting, which round-trips f64 exactly.
pub fn weather_csv_text(series: &WeatherSeries) -> String {
    let mut out = String::with_capacity(series.len() * 24 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in series.records() {
        out.push_str(&format!("{},{},{},{},{}\n", r.day, r.srad, r.tmax, r.tmin, r.rain));
    }
    out
}

pub fn save_weather_csv(path: &Path, series: &WeatherSeries) -> Result<()> {
    atomic_write(path, weather_csv_text(series).as_bytes())
}

//! Ingest of sampled trajectories: a two-column CSV with header `t,f`, or a
//! JSON array of `[t, f]` pairs.

use std::io::Read;
use std::path::Path;

use super::TrajectoryError;

pub fn parse_samples_csv(reader: impl Read) -> Result<Vec<(f64, f64)>, TrajectoryError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| TrajectoryError::InvalidSamples(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "f" {
        return Err(TrajectoryError::InvalidSamples(format!(
            "expected CSV header `t,f`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| TrajectoryError::InvalidSamples(e.to_string()))?;
        let parse = |k: usize| -> Result<f64, TrajectoryError> {
            record
                .get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| TrajectoryError::InvalidSamples(format!("row {}: bad number", line + 2)))
        };
        out.push((parse(0)?, parse(1)?));
    }
    Ok(out)
}

pub fn parse_samples_json(text: &str) -> Result<Vec<(f64, f64)>, TrajectoryError> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| TrajectoryError::InvalidSamples(format!("JSON: {e}")))?;
    Ok(pairs.into_iter().map(|[t, f]| (t, f)).collect())
}

/// Read samples from `path`; `.json` files are parsed as JSON, anything else as CSV.
pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>, TrajectoryError> {
    let io_err = |e: std::io::Error| TrajectoryError::Io { path: path.display().to_string(), message: e.to_string() };
    let is_json = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    if is_json {
        let text = std::fs::read_to_string(path).map_err(io_err)?;
        parse_samples_json(&text)
    } else {
        let file = std::fs::File::open(path).map_err(io_err)?;
        parse_samples_csv(file)
    }
}

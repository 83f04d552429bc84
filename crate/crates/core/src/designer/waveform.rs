//! The sampled coupling waveform and its CSV/JSON exchange formats.
//!
//! CSV header: `t,lambda,eta,f_target,S_predicted`. `lambda` at row `i` is
//! the coupling held on `[tᵢ, tᵢ₊₁)`; the last row repeats the final hold
//! value. `eta` is the accumulated pulse area. The two target columns are
//! empty for waveforms that were not produced by the designer.
//!
//! JSON: `{"params": <DesignRecord or null>, "samples": [{"t", "lambda",
//! "eta", "f_target", "S_predicted"}, ...]}`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{fmt_sig, round_sig};
use crate::trajectory::TrajectoryDescriptor;

pub const WAVEFORM_CSV_HEADER: [&str; 5] = ["t", "lambda", "eta", "f_target", "S_predicted"];
/// Relative deviation allowed between an ingested grid and the ideal uniform grid.
const GRID_TOLERANCE: f64 = 1e-9;
/// Allowed mismatch between an ingested `eta` column and the re-accumulated pulse area.
const ETA_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum WaveformError {
    #[error("invalid waveform: {0}")]
    Invalid(String),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Parameters that produced a designed waveform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRecord {
    pub trajectory: TrajectoryDescriptor,
    pub q: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub lambda0: f64,
    pub n_steps: usize,
}

/// Target `f(tᵢ)` and ansatz-predicted entropy `S(f(tᵢ); q)` per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetColumns {
    pub f_target: Vec<f64>,
    pub s_predicted: Vec<f64>,
}

/// Sample-and-hold coupling `λ(t)` on a uniform grid over `[0, t_final]`,
/// with pulse area `η(tᵢ) = Σ_{j<i} λⱼ Δt`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingWaveform {
    times: Vec<f64>,
    lambda: Vec<f64>,
    eta: Vec<f64>,
    targets: Option<TargetColumns>,
    record: Option<DesignRecord>,
}

#[derive(Serialize, Deserialize)]
struct JsonSample {
    t: f64,
    lambda: f64,
    eta: f64,
    f_target: Option<f64>,
    #[serde(rename = "S_predicted")]
    s_predicted: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonWaveform {
    params: Option<DesignRecord>,
    samples: Vec<JsonSample>,
}

fn uniform_times(t_final: f64, n_steps: usize) -> Vec<f64> {
    (0..=n_steps).map(|k| t_final * k as f64 / n_steps as f64).collect()
}

fn accumulate(lambda: &[f64], dt: f64) -> Vec<f64> {
    let mut eta = Vec::with_capacity(lambda.len());
    let mut acc = 0.0;
    eta.push(acc);
    for &l in &lambda[..lambda.len() - 1] {
        acc += l * dt;
        eta.push(acc);
    }
    eta
}

impl CouplingWaveform {
    pub(crate) fn assemble(
        t_final: f64,
        lambda: Vec<f64>,
        targets: Option<TargetColumns>,
        record: Option<DesignRecord>,
    ) -> Self {
        let n_steps = lambda.len() - 1;
        let times = uniform_times(t_final, n_steps);
        let eta = accumulate(&lambda, t_final / n_steps as f64);
        Self { times, lambda, eta, targets, record }
    }

    /// Waveform from hold values `λᵢ` (one per grid point, `n_steps + 1` in total).
    pub fn from_hold(t_final: f64, lambda: Vec<f64>) -> Result<Self, WaveformError> {
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(WaveformError::Invalid(format!("t_final = {t_final} must be finite and > 0")));
        }
        if lambda.len() < 2 {
            return Err(WaveformError::Invalid("need at least two grid points".into()));
        }
        if let Some(k) = lambda.iter().position(|l| !l.is_finite()) {
            return Err(WaveformError::Invalid(format!("lambda[{k}] is not finite")));
        }
        Ok(Self::assemble(t_final, lambda, None, None))
    }

    /// Constant coupling on `n_steps` cells.
    pub fn constant(value: f64, t_final: f64, n_steps: usize) -> Result<Self, WaveformError> {
        Self::from_hold(t_final, vec![value; n_steps + 1])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn t_final(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn dt(&self) -> f64 {
        self.t_final() / self.n_steps() as f64
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn targets(&self) -> Option<&TargetColumns> {
        self.targets.as_ref()
    }

    pub fn record(&self) -> Option<&DesignRecord> {
        self.record.as_ref()
    }

    pub fn final_eta(&self) -> f64 {
        self.eta[self.eta.len() - 1]
    }

    pub fn max_abs_lambda(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), WaveformError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(WAVEFORM_CSV_HEADER)?;
        for k in 0..self.len() {
            let (f, s) = match &self.targets {
                Some(c) => (fmt_sig(c.f_target[k]), fmt_sig(c.s_predicted[k])),
                None => (String::new(), String::new()),
            };
            w.write_record([fmt_sig(self.times[k]), fmt_sig(self.lambda[k]), fmt_sig(self.eta[k]), f, s])?;
        }
        w.flush().map_err(|e| WaveformError::Io { path: "<csv>".into(), source: e })?;
        Ok(())
    }

    pub fn write_json(&self, out: impl Write) -> Result<(), WaveformError> {
        let samples = (0..self.len())
            .map(|k| JsonSample {
                t: round_sig(self.times[k]),
                lambda: round_sig(self.lambda[k]),
                eta: round_sig(self.eta[k]),
                f_target: self.targets.as_ref().map(|c| round_sig(c.f_target[k])),
                s_predicted: self.targets.as_ref().map(|c| round_sig(c.s_predicted[k])),
            })
            .collect();
        let doc = JsonWaveform { params: self.record.clone(), samples };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }

    /// Rebuild from exchanged columns; the grid must be uniform and `eta`
    /// consistent with the hold values.
    fn from_columns(
        times: Vec<f64>,
        lambda: Vec<f64>,
        eta: Vec<f64>,
        targets: Option<TargetColumns>,
        record: Option<DesignRecord>,
    ) -> Result<Self, WaveformError> {
        if times.len() < 2 {
            return Err(WaveformError::Invalid("need at least two rows".into()));
        }
        let t_final = times[times.len() - 1];
        let mut w = Self::from_hold(t_final, lambda)?;
        if times[0] != 0.0 {
            return Err(WaveformError::Invalid(format!("first time is {}, expected 0", times[0])));
        }
        for (k, (&t, &ideal)) in times.iter().zip(&w.times).enumerate() {
            if (t - ideal).abs() > GRID_TOLERANCE * t_final {
                return Err(WaveformError::Invalid(format!("row {k}: t = {t} is off the uniform grid")));
            }
        }
        for (k, (&e, &acc)) in eta.iter().zip(&w.eta).enumerate() {
            if !((e - acc).abs() <= ETA_TOLERANCE * (1.0 + acc.abs())) {
                return Err(WaveformError::Invalid(format!(
                    "row {k}: eta = {e} disagrees with accumulated area {acc}"
                )));
            }
        }
        w.targets = targets;
        w.record = record;
        Ok(w)
    }

    pub fn read_csv(input: impl Read) -> Result<Self, WaveformError> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().ne(WAVEFORM_CSV_HEADER.iter().copied()) {
            return Err(WaveformError::Invalid(format!(
                "expected header `{}`",
                WAVEFORM_CSV_HEADER.join(",")
            )));
        }
        let (mut times, mut lambda, mut eta) = (Vec::new(), Vec::new(), Vec::new());
        let (mut f_target, mut s_predicted) = (Vec::new(), Vec::new());
        let mut has_targets = true;
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let num = |k: usize| -> Result<f64, WaveformError> {
                record[k]
                    .trim()
                    .parse()
                    .map_err(|_| WaveformError::Invalid(format!("row {}: column {} is not a number", row + 2, k + 1)))
            };
            times.push(num(0)?);
            lambda.push(num(1)?);
            eta.push(num(2)?);
            if record[3].trim().is_empty() || record[4].trim().is_empty() {
                has_targets = false;
            } else {
                f_target.push(num(3)?);
                s_predicted.push(num(4)?);
            }
        }
        let targets = has_targets.then_some(TargetColumns { f_target, s_predicted });
        Self::from_columns(times, lambda, eta, targets, None)
    }

    pub fn read_json(text: &str) -> Result<Self, WaveformError> {
        let doc: JsonWaveform = serde_json::from_str(text)?;
        let has_targets = doc.samples.iter().all(|s| s.f_target.is_some() && s.s_predicted.is_some());
        let targets = has_targets.then(|| TargetColumns {
            f_target: doc.samples.iter().filter_map(|s| s.f_target).collect(),
            s_predicted: doc.samples.iter().filter_map(|s| s.s_predicted).collect(),
        });
        Self::from_columns(
            doc.samples.iter().map(|s| s.t).collect(),
            doc.samples.iter().map(|s| s.lambda).collect(),
            doc.samples.iter().map(|s| s.eta).collect(),
            targets,
            doc.params,
        )
    }

    /// Read a waveform file; `.json` selects JSON, anything else CSV.
    pub fn read(path: &Path) -> Result<Self, WaveformError> {
        let io = |source| WaveformError::Io { path: path.display().to_string(), source };
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::read_json(&std::fs::read_to_string(path).map_err(io)?)
        } else {
            Self::read_csv(std::fs::File::open(path).map_err(io)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hold_accumulation() {
        let w = CouplingWaveform::from_hold(4.0, vec![1.0, 2.0, -1.0, 0.5, 0.5]).unwrap();
        assert_eq!(w.times(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(w.eta(), &[0.0, 1.0, 3.0, 2.0, 2.5]);
        assert_eq!(w.max_abs_lambda(), 2.0);
    }

    #[test]
    fn rejects_nonfinite_coupling() {
        assert!(CouplingWaveform::from_hold(1.0, vec![0.0, f64::INFINITY]).is_err());
        assert!(CouplingWaveform::from_hold(0.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn csv_without_targets_round_trips() {
        let w = CouplingWaveform::from_hold(2.0, vec![0.3, 0.1, 0.2, 0.2]).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,lambda,eta,f_target,S_predicted\n"));
        let back = CouplingWaveform::read_csv(buf.as_slice()).unwrap();
        assert!(back.targets().is_none());
        for (a, b) in back.lambda().iter().zip(w.lambda()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ingest_rejects_inconsistent_eta() {
        let csv = "t,lambda,eta,f_target,S_predicted\n0,1,0,,\n1,1,0.5,,\n";
        assert!(CouplingWaveform::read_csv(csv.as_bytes()).is_err());
    }

    #[test]
    fn ingest_rejects_nonuniform_grid() {
        let csv = "t,lambda,eta,f_target,S_predicted\n0,1,0,,\n0.4,1,0.5,,\n1,1,1,,\n";
        assert!(CouplingWaveform::read_csv(csv.as_bytes()).is_err());
    }
}

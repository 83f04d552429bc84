//! CSV and JSON renderings of an [`EvolutionResult`].

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::format::{fmt_sig, round_sig};

use super::EvolutionResult;

pub const EVOLUTION_CSV_HEADER: [&str; 5] = ["t", "S", "S_L", "C", "EoF"];
pub const DENSITY_BASIS: [&str; 4] = ["00", "01", "10", "11"];

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
struct Sample {
    t: f64,
    #[serde(rename = "S")]
    entropy: f64,
    #[serde(rename = "S_L")]
    linear_entropy: f64,
    #[serde(rename = "C")]
    concurrence: f64,
    #[serde(rename = "EoF")]
    eof: f64,
}

#[derive(Serialize)]
struct Series {
    samples: Vec<Sample>,
}

#[derive(Serialize)]
struct DensityDump {
    basis: [&'static str; 4],
    times: Vec<f64>,
    /// `states[k][r][c] = [re, im]`.
    states: Vec<[[[f64; 2]; 4]; 4]>,
}

impl EvolutionResult {
    pub fn write_csv(&self, out: impl Write) -> Result<(), ExportError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(EVOLUTION_CSV_HEADER)?;
        for (t, m) in self.times.iter().zip(&self.measures) {
            w.write_record([t, &m.entropy, &m.linear_entropy, &m.concurrence, &m.eof].map(|x| fmt_sig(*x)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, out: impl Write) -> Result<(), ExportError> {
        let samples = self
            .times
            .iter()
            .zip(&self.measures)
            .map(|(&t, m)| Sample {
                t: round_sig(t),
                entropy: round_sig(m.entropy),
                linear_entropy: round_sig(m.linear_entropy),
                concurrence: round_sig(m.concurrence),
                eof: round_sig(m.eof),
            })
            .collect();
        serde_json::to_writer_pretty(out, &Series { samples })?;
        Ok(())
    }

    /// Every recorded density matrix as `[re, im]` pairs in the fixed basis order.
    pub fn write_states_json(&self, out: impl Write) -> Result<(), ExportError> {
        let states = (0..self.states.len())
            .map(|k| {
                let rho = self.states.density(k);
                let mut entries = [[[0.0; 2]; 4]; 4];
                for (r, row) in entries.iter_mut().enumerate() {
                    for (c, e) in row.iter_mut().enumerate() {
                        let z = rho.entry(r, c);
                        *e = [round_sig(z.re), round_sig(z.im)];
                    }
                }
                entries
            })
            .collect();
        let dump = DensityDump { basis: DENSITY_BASIS, times: self.times.iter().copied().map(round_sig).collect(), states };
        serde_json::to_writer(out, &dump)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::designer::CouplingWaveform;
    use crate::dynamics::{evolve_lindblad, ChannelSpec};

    #[test]
    fn csv_and_state_dump_shapes() {
        let w = CouplingWaveform::constant(0.5, 1.0, 4).unwrap();
        let r = evolve_lindblad(&w, ChannelSpec::phase_damping(0.1).unwrap()).unwrap();
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("t,S,S_L,C,EoF\n"));

        let mut dump = Vec::new();
        r.write_states_json(&mut dump).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&dump).unwrap();
        assert_eq!(v["basis"][1], "01");
        assert_eq!(v["states"].as_array().unwrap().len(), 5);
        assert_eq!(v["states"][0][1][1][0], 1.0);
    }
}

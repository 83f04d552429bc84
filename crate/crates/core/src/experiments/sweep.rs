//! Final entanglement along the path family `f(t; p) = (κt/10)^p` under noise.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::designer::{synthesize, AnsatzParams, CouplingWaveform, RenormalizationParams, DEFAULT_STEPS};
use crate::dynamics::{evolve_lindblad_with, ChannelKind, ChannelSpec, Recording, Rk4Config};
use crate::format::fmt_sig;
use crate::trajectory::TargetTrajectory;

use super::ExperimentError;

pub const SWEEP_CSV_HEADER: [&str; 5] = ["log10_p", "p", "gamma_over_kappa", "final_eof", "diagnostic"];
/// Calibrated bound on `|EoF(p) − EoF(1/p)|` under amplitude damping.
pub const AD_DEGENERACY_TOLERANCE: f64 = 0.02;
/// `Γ/κ` row at which phase damping is compared across `p ↔ 1/p`.
pub const PD_ASYMMETRY_GAMMA: f64 = 0.05;
/// Lowest acceptable final EoF on the noiseless row.
pub const UNITARY_FLOOR: f64 = 0.98;
/// Allowed increase of final EoF with `Γ` before monotone decay counts as broken.
pub const MONOTONE_DECAY_TOLERANCE: f64 = 1e-3;
/// Axis values closer than this to a requested coordinate are taken to hit it.
const AXIS_MATCH: f64 = 1e-9;

/// Uniform axis of `points` values from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self, ExperimentError> {
        let axis = Self { lo, hi, points };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && match self.points {
                0 => false,
                1 => self.lo == self.hi,
                _ => self.hi > self.lo,
            };
        if ok {
            Ok(())
        } else {
            Err(ExperimentError::InvalidGrid(format!(
                "axis [{}, {}] with {} points is not strictly increasing",
                self.lo, self.hi, self.points
            )))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        (0..self.points)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.points - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub log10_p: GridAxis,
    pub gamma_over_kappa: GridAxis,
    pub kappa: f64,
    pub n_steps: usize,
    pub ansatz: AnsatzParams,
    pub renorm: RenormalizationParams,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            log10_p: GridAxis { lo: -1.0, hi: 1.0, points: 41 },
            gamma_over_kappa: GridAxis { lo: 0.0, hi: 0.25, points: 26 },
            kappa: 1.0,
            n_steps: DEFAULT_STEPS,
            ansatz: AnsatzParams::default(),
            renorm: RenormalizationParams::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.log10_p.validate()?;
        self.gamma_over_kappa.validate()?;
        if self.gamma_over_kappa.lo < 0.0 {
            return Err(ExperimentError::InvalidGrid("gamma_over_kappa must be ≥ 0".into()));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(ExperimentError::InvalidGrid(format!("kappa = {} must be finite and > 0", self.kappa)));
        }
        Ok(())
    }
}

/// Final EoF of one `(Γ/κ, p)` cell, or why it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub final_eof: Option<f64>,
    pub diagnostic: Option<String>,
}

/// Cells are stored row-major: one row per `Γ/κ`, one column per `log₁₀ p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub channel: ChannelKind,
    pub log10_p: Vec<f64>,
    pub gamma_over_kappa: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

/// Qualitative properties of a finished sweep; `None` where the grid cannot answer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFindings {
    /// `max |EoF(p) − EoF(1/p)|` over mirrored columns and all rows.
    pub max_mirror_gap: Option<f64>,
    /// `min_{p>1} EoF(p) − EoF(1/p)` on the `Γ/κ = 0.05` row.
    pub min_asymmetry_margin: Option<f64>,
    /// Smallest final EoF on the `Γ = 0` row.
    pub unitary_row_min: Option<f64>,
    /// Largest increase of final EoF between consecutive `Γ` in any column.
    pub max_decay_increase: Option<f64>,
    pub missing_cells: usize,
}

impl SweepGrid {
    pub fn eof(&self, gamma_index: usize, p_index: usize) -> Option<f64> {
        self.cells[gamma_index * self.log10_p.len() + p_index].final_eof
    }

    fn row_of(&self, gamma_over_kappa: f64) -> Option<usize> {
        self.gamma_over_kappa.iter().position(|g| (g - gamma_over_kappa).abs() < AXIS_MATCH)
    }

    /// Column index mirrored through `log₁₀ p = 0`, if the axis contains it.
    fn mirror(&self, p_index: usize) -> Option<usize> {
        let target = -self.log10_p[p_index];
        self.log10_p.iter().position(|x| (x - target).abs() < AXIS_MATCH)
    }

    pub fn findings(&self) -> SweepFindings {
        let np = self.log10_p.len();
        let mut mirror_gap: Option<f64> = None;
        for ig in 0..self.gamma_over_kappa.len() {
            for ip in 0..np {
                if let (Some(jp), Some(a)) = (self.mirror(ip), self.eof(ig, ip)) {
                    if let Some(b) = self.eof(ig, jp) {
                        mirror_gap = Some(mirror_gap.unwrap_or(0.0).max((a - b).abs()));
                    }
                }
            }
        }
        let min_asymmetry_margin = self.row_of(PD_ASYMMETRY_GAMMA).and_then(|ig| {
            (0..np)
                .filter(|&ip| self.log10_p[ip] > AXIS_MATCH)
                .filter_map(|ip| Some(self.eof(ig, ip)? - self.eof(ig, self.mirror(ip)?)?))
                .reduce(f64::min)
        });
        let unitary_row_min =
            self.row_of(0.0).and_then(|ig| (0..np).filter_map(|ip| self.eof(ig, ip)).reduce(f64::min));
        let max_decay_increase = (0..np)
            .flat_map(|ip| {
                (1..self.gamma_over_kappa.len())
                    .filter_map(move |ig| Some(self.eof(ig, ip)? - self.eof(ig - 1, ip)?))
            })
            .reduce(f64::max);
        SweepFindings {
            max_mirror_gap: mirror_gap,
            min_asymmetry_margin,
            unitary_row_min,
            max_decay_increase,
            missing_cells: self.cells.iter().filter(|c| c.final_eof.is_none()).count(),
        }
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_CSV_HEADER)?;
        for (ig, &g) in self.gamma_over_kappa.iter().enumerate() {
            for (ip, &lp) in self.log10_p.iter().enumerate() {
                let cell = &self.cells[ig * self.log10_p.len() + ip];
                w.write_record([
                    fmt_sig(lp),
                    fmt_sig(10f64.powf(lp)),
                    fmt_sig(g),
                    cell.final_eof.map(fmt_sig).unwrap_or_default(),
                    cell.diagnostic.clone().unwrap_or_default(),
                ])?;
            }
        }
        w.flush().map_err(crate::dynamics::ExportError::Io)?;
        Ok(())
    }
}

/// Final EoF at `t_final = 10/κ` over the `(Γ/κ, log₁₀ p)` grid.
///
/// Cells run in parallel on the current rayon pool; the result does not
/// depend on scheduling. A cell whose design or integration fails keeps
/// its diagnostic and leaves `final_eof` empty.
pub fn run_sweep(channel: ChannelKind, spec: &SweepSpec) -> Result<SweepGrid, ExperimentError> {
    if channel == ChannelKind::None {
        return Err(ExperimentError::InvalidGrid("the sweep needs a noise channel".into()));
    }
    spec.validate()?;
    let log10_p = spec.log10_p.values();
    let gamma_over_kappa = spec.gamma_over_kappa.values();

    let waveforms: Vec<Result<CouplingWaveform, String>> = log10_p
        .par_iter()
        .map(|&lp| {
            let traj = TargetTrajectory::power_path_full(spec.kappa, 10f64.powf(lp)).map_err(|e| e.to_string())?;
            synthesize(&traj, spec.ansatz, spec.renorm, spec.n_steps).map_err(|e| format!("design: {e}"))
        })
        .collect();

    let config = Rk4Config { recording: Recording::FinalOnly, ..Rk4Config::default() };
    let np = log10_p.len();
    let cells = (0..gamma_over_kappa.len() * np)
        .into_par_iter()
        .map(|k| {
            let (ig, ip) = (k / np, k % np);
            let outcome = waveforms[ip].as_ref().map_err(Clone::clone).and_then(|w| {
                let channel = ChannelSpec::new(channel, gamma_over_kappa[ig] * spec.kappa).map_err(|e| e.to_string())?;
                evolve_lindblad_with(w, channel, &config)
                    .map(|r| r.final_measures().eof)
                    .map_err(|e| format!("dynamics: {e}"))
            });
            match outcome {
                Ok(eof) => SweepCell { final_eof: Some(eof), diagnostic: None },
                Err(d) => SweepCell { final_eof: None, diagnostic: Some(d) },
            }
        })
        .collect();
    Ok(SweepGrid { channel, log10_p, gamma_over_kappa, cells })
}

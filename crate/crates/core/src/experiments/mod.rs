//! Scripted reference studies that emit plot-ready tables.
//!
//! | study | function | CSV header |
//! |---|---|---|
//! | distance curve | [`reproduce_distance_curve`] | `q,d` |
//! | entropy linearization | [`reproduce_entropy_curve`] | `f,S,S_linear_target` |
//! | design examples | [`reproduce_design_example`] | `t,f_target,S,lambda,eta` |
//! | path-family sweep | [`run_sweep`] | `log10_p,p,gamma_over_kappa,final_eof,diagnostic` |

mod checks;
mod sweep;

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::designer::{
    designed_entropy, distance, optimize_q, synthesize, AnsatzParams, CouplingWaveform, DesignError, QOptimum,
    RenormalizationParams, WaveformError, DEFAULT_Q_BRACKET, DEFAULT_STEPS,
};
use crate::dynamics::{evolve_schrodinger, DynamicsError, EvolutionResult, ExportError};
use crate::format::fmt_sig;
use crate::quantum::QuantumError;
use crate::trajectory::{TargetTrajectory, TrajectoryError};

pub use checks::{sample_x_states, self_check, CheckOutcome};
pub use sweep::{
    run_sweep, GridAxis, SweepCell, SweepFindings, SweepGrid, SweepSpec, AD_DEGENERACY_TOLERANCE,
    MONOTONE_DECAY_TOLERANCE, PD_ASYMMETRY_GAMMA, SWEEP_CSV_HEADER, UNITARY_FLOOR,
};

pub const DISTANCE_CURVE_RANGE: [f64; 2] = [0.5, 2.5];
pub const DISTANCE_CURVE_POINTS: usize = 201;
pub const ENTROPY_CURVE_POINTS: usize = 1001;
/// κ and κ t_final of the design examples.
pub const EXAMPLE_KAPPA: f64 = 1.0;
pub const EXAMPLE_T_FINAL: f64 = 10.0;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl From<csv::Error> for ExperimentError {
    fn from(e: csv::Error) -> Self {
        Self::Export(ExportError::Csv(e))
    }
}

fn write_table<const N: usize>(out: impl Write, header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.map(fmt_sig))?;
    }
    w.flush().map_err(ExportError::Io)?;
    Ok(())
}

/// Record of one run: every parameter, the files written and headline results.
///
/// Runs are fully deterministic, so `seeds` is always `null`; no timestamps
/// are recorded, keeping manifests byte-stable across re-runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: serde_json::Value,
    pub seeds: Option<u64>,
    pub outputs: Vec<String>,
    pub results: serde_json::Value,
}

impl Manifest {
    pub fn new(command: impl Into<String>, parameters: serde_json::Value) -> Self {
        Self {
            tool: "entdesign",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            parameters,
            seeds: None,
            outputs: Vec::new(),
            results: serde_json::Value::Object(Default::default()),
        }
    }

    pub fn write_json(&self, out: impl Write) -> Result<(), ExperimentError> {
        serde_json::to_writer_pretty(out, self).map_err(ExportError::Json)?;
        Ok(())
    }
}

/// `d(q)` sampled on a uniform grid, together with the optimized exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceCurve {
    pub points: Vec<(f64, f64)>,
    pub optimum: QOptimum,
}

impl DistanceCurve {
    pub fn write_csv(&self, out: impl Write) -> Result<(), ExperimentError> {
        write_table(out, ["q", "d"], self.points.iter().map(|&(q, d)| [q, d]))
    }

    /// Strictly decreasing then strictly increasing, turning at the sample nearest `q*`.
    pub fn is_single_dipped(&self) -> bool {
        let turn = self
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let falls = self.points[..=turn].windows(2).all(|w| w[1].1 < w[0].1);
        let rises = self.points[turn..].windows(2).all(|w| w[1].1 > w[0].1);
        falls && rises
    }
}

pub fn reproduce_distance_curve() -> Result<DistanceCurve, ExperimentError> {
    let [lo, hi] = DISTANCE_CURVE_RANGE;
    let n = DISTANCE_CURVE_POINTS;
    let points = (0..n)
        .map(|k| {
            let q = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            distance(q).map(|d| (q, d))
        })
        .collect::<Result<_, _>>()?;
    Ok(DistanceCurve { points, optimum: optimize_q(DEFAULT_Q_BRACKET)? })
}

/// `S(f; q)` against the ideal straight line `S = f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub q: f64,
    pub points: Vec<(f64, f64)>,
}

impl EntropyCurve {
    pub fn write_csv(&self, out: impl Write) -> Result<(), ExperimentError> {
        write_table(out, ["f", "S", "S_linear_target"], self.points.iter().map(|&(f, s)| [f, s, f]))
    }

    pub fn max_deviation(&self) -> f64 {
        self.points.iter().map(|(f, s)| (s - f).abs()).fold(0.0, f64::max)
    }
}

pub fn reproduce_entropy_curve(q: f64) -> Result<EntropyCurve, ExperimentError> {
    let n = ENTROPY_CURVE_POINTS;
    let points = (0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            designed_entropy(f, q).map(|s| (f, s))
        })
        .collect::<Result<_, _>>()?;
    Ok(EntropyCurve { q, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleFamily {
    ExpSaturation,
    TriangleWave,
}

/// Target, waveform and Schrödinger run of one design example.
#[derive(Debug, Clone)]
pub struct DesignExample {
    pub family: ExampleFamily,
    pub trajectory: TargetTrajectory,
    pub waveform: CouplingWaveform,
    pub evolution: EvolutionResult,
    pub renorm: RenormalizationParams,
}

/// Summary numbers recorded alongside a design example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignFidelity {
    /// `sup |S(t) − f(t)|` over every grid point.
    pub sup_error: f64,
    /// The same restricted to grid points with `f ∈ [δ₀, δ₁]`.
    pub sup_error_in_band: f64,
    /// Largest `|S(tᵢ₊₁) − S(tᵢ)|`, the continuity check inside cutoff bands.
    pub max_entropy_jump: f64,
    pub max_abs_lambda: f64,
}

impl DesignExample {
    pub fn target(&self) -> Vec<f64> {
        self.waveform.targets().map(|c| c.f_target.clone()).unwrap_or_default()
    }

    pub fn fidelity(&self) -> DesignFidelity {
        let f = self.target();
        let s = self.evolution.entropy();
        let errors = f.iter().zip(&s).map(|(f, s)| (*f, (s - f).abs()));
        let sup_error = errors.clone().map(|e| e.1).fold(0.0, f64::max);
        let sup_error_in_band = errors.filter(|(f, _)| self.renorm.in_band(*f)).map(|e| e.1).fold(0.0, f64::max);
        let max_entropy_jump = s.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        DesignFidelity { sup_error, sup_error_in_band, max_entropy_jump, max_abs_lambda: self.waveform.max_abs_lambda() }
    }

    /// Simulated entropy at the grid point nearest `t`.
    pub fn entropy_at(&self, t: f64) -> f64 {
        let k = (t / self.waveform.dt()).round() as usize;
        self.evolution.measures()[k.min(self.evolution.len() - 1)].entropy
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), ExperimentError> {
        let f = self.target();
        let w = &self.waveform;
        let m = self.evolution.measures();
        write_table(
            out,
            ["t", "f_target", "S", "lambda", "eta"],
            (0..w.len()).map(|k| [w.times()[k], f[k], m[k].entropy, w.lambda()[k], w.eta()[k]]),
        )
    }
}

/// The published design examples: κ = 1, κ t_final = 10, `q = 1.345` and default cutoffs.
pub fn reproduce_design_example(family: ExampleFamily) -> Result<DesignExample, ExperimentError> {
    let trajectory = match family {
        ExampleFamily::ExpSaturation => TargetTrajectory::exp_saturation(EXAMPLE_KAPPA, EXAMPLE_T_FINAL)?,
        ExampleFamily::TriangleWave => TargetTrajectory::triangle_wave(EXAMPLE_KAPPA, EXAMPLE_T_FINAL)?,
    };
    let renorm = RenormalizationParams::default();
    let waveform = synthesize(&trajectory, AnsatzParams::default(), renorm, DEFAULT_STEPS)?;
    let evolution = evolve_schrodinger(&waveform)?;
    Ok(DesignExample { family, trajectory, waveform, evolution, renorm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designer::{DEFAULT_Q, LINEARIZATION_ERROR};

    #[test]
    fn distance_curve_shape() {
        let curve = reproduce_distance_curve().unwrap();
        assert_eq!(curve.points.len(), DISTANCE_CURVE_POINTS);
        assert!(curve.is_single_dipped());
        assert!((curve.optimum.q - DEFAULT_Q).abs() <= 5e-3);
        assert!(curve.optimum.distance < 5e-3);
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), DISTANCE_CURVE_POINTS + 1);
    }

    #[test]
    fn entropy_curve_tracks_straight_line() {
        let q = optimize_q(DEFAULT_Q_BRACKET).unwrap().q;
        let curve = reproduce_entropy_curve(q).unwrap();
        assert!(curve.max_deviation() <= LINEARIZATION_ERROR + 1e-9);
    }

    #[test]
    fn exp_example_fidelity() {
        let ex = reproduce_design_example(ExampleFamily::ExpSaturation).unwrap();
        let fid = ex.fidelity();
        assert!(fid.sup_error <= LINEARIZATION_ERROR + 0.01, "{fid:?}");
        assert!(fid.max_abs_lambda.is_finite());
    }

    #[test]
    fn triangle_example_returns_to_zero() {
        let ex = reproduce_design_example(ExampleFamily::TriangleWave).unwrap();
        let fid = ex.fidelity();
        assert!(fid.sup_error_in_band <= LINEARIZATION_ERROR + 0.01, "{fid:?}");
        assert!(fid.max_entropy_jump < 0.05, "{fid:?}");
        for t in [2.0, 4.0] {
            assert!(ex.entropy_at(t) <= 0.02, "S({t}) = {}", ex.entropy_at(t));
        }
    }
}

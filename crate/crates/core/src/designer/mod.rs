//! Inverse design: from a target trajectory `f(t)` to the pulse area `η(t)`
//! and the coupling `λ(t)`.
//!
//! The ansatz `η = ½ arcsin(f^{q/2})` nearly linearizes the entropy of
//! entanglement as a function of `f` once `q` is tuned against the
//! `L¹` distance `d(q) = ∫₀¹ |S(f; q) − f| df`. The coupling `λ = dη/dt`
//! diverges where `f` touches 0 or 1, so it is replaced by a finite
//! fallback `λ₀` whenever `f` leaves the band `[δ₀, δ₁]`.
//!
//! [`synthesize`] emits a sample-and-hold waveform: `λᵢ` is the exact mean
//! of the renormalized coupling over `[tᵢ, tᵢ₊₁)`, so `η(tᵢ)` equals the
//! designed pulse area at every grid point regardless of how sharply the
//! coupling peaks inside a cell.

mod golden;
mod quadrature;
mod waveform;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::binary_entropy;
use crate::trajectory::{TargetTrajectory, TrajectoryError, ValidationReport};

pub use golden::{coarse_scan, golden_section, is_unimodal, SCAN_POINTS};
pub use quadrature::adaptive_simpson;
pub use waveform::{CouplingWaveform, DesignRecord, TargetColumns, WaveformError, WAVEFORM_CSV_HEADER};

/// Exponent that minimizes `d(q)`, as published.
pub const DEFAULT_Q: f64 = 1.345;
pub const DEFAULT_DELTA0: f64 = 1e-3;
pub const DEFAULT_LAMBDA0: f64 = 0.0;
pub const DEFAULT_STEPS: usize = 10_000;
pub const MIN_STEPS: usize = 1_000;
pub const DEFAULT_Q_BRACKET: [f64; 2] = [1.0, 2.0];
/// Absolute tolerance for `d(q)`.
pub const DISTANCE_TOLERANCE: f64 = 1e-7;
/// Bracket width at which golden-section search stops.
pub const Q_TOLERANCE: f64 = 1e-4;
/// Points in the dense scan behind [`linearization_error`].
pub const LINEARIZATION_SCAN_POINTS: usize = 100_000;
/// `max_f |S(f; q*) − f|` at the optimized exponent, from the dense scan.
/// Recomputed by the test suite.
pub const LINEARIZATION_ERROR: f64 = 0.009_957_055_684;
/// `f` closer than this to 0, or `1 − f^q` below it, makes the raw coupling singular.
pub const SINGULARITY_THRESHOLD: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("f = {0} outside [0, 1]")]
    FValueOutOfRange(f64),
    #[error("quadrature for d({q}) did not converge near f = {at}")]
    Quadrature { q: f64, at: f64 },
    #[error("d(q) is not unimodal on the bracket; scan: {scan:?}")]
    NotUnimodal { scan: Vec<(f64, f64)> },
    #[error("coupling diverges at t = {t} (f = {f})")]
    Singular { t: f64, f: f64 },
    #[error("target trajectory is not admissible: {0}")]
    InvalidTrajectory(ValidationReport),
    #[error("n_steps = {0} is below the minimum of {MIN_STEPS}")]
    TooFewSteps(usize),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// Exponent of the ansatz `η = ½ arcsin(f^{q/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub q: f64,
}

impl Default for AnsatzParams {
    fn default() -> Self {
        Self { q: DEFAULT_Q }
    }
}

impl AnsatzParams {
    pub fn new(q: f64) -> Result<Self, DesignError> {
        if !(q.is_finite() && q > 0.0 && q < 2.0) {
            return Err(DesignError::InvalidParameter { name: "q", value: q, reason: "must lie in (0, 2)" });
        }
        Ok(Self { q })
    }
}

/// Cutoff band `[δ₀, δ₁]` and the fallback coupling `λ₀` used outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormalizationParams {
    pub delta0: f64,
    pub delta1: f64,
    pub lambda0: f64,
}

impl Default for RenormalizationParams {
    fn default() -> Self {
        Self { delta0: DEFAULT_DELTA0, delta1: 1.0 - DEFAULT_DELTA0, lambda0: DEFAULT_LAMBDA0 }
    }
}

impl RenormalizationParams {
    pub fn new(delta0: f64, delta1: f64, lambda0: f64) -> Result<Self, DesignError> {
        if !(delta0 > 0.0 && delta0 < 0.5) {
            return Err(DesignError::InvalidParameter { name: "delta0", value: delta0, reason: "must lie in (0, 1/2)" });
        }
        if !(delta1 > 0.5 && delta1 < 1.0) {
            return Err(DesignError::InvalidParameter { name: "delta1", value: delta1, reason: "must lie in (1/2, 1)" });
        }
        if !lambda0.is_finite() {
            return Err(DesignError::InvalidParameter { name: "lambda0", value: lambda0, reason: "must be finite" });
        }
        Ok(Self { delta0, delta1, lambda0 })
    }

    /// Symmetric band `[δ₀, 1 − δ₀]`.
    pub fn symmetric(delta0: f64, lambda0: f64) -> Result<Self, DesignError> {
        Self::new(delta0, 1.0 - delta0, lambda0)
    }

    pub fn in_band(&self, f: f64) -> bool {
        self.delta0 <= f && f <= self.delta1
    }
}

fn check_f(f: f64) -> Result<(), DesignError> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(DesignError::FValueOutOfRange(f))
    }
}

fn check_exponent(q: f64) -> Result<(), DesignError> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(DesignError::InvalidParameter { name: "q", value: q, reason: "must be finite and > 0" })
    }
}

/// `η = ½ arcsin(f^{q/2})`.
pub fn eta_from_f(f: f64, q: f64) -> Result<f64, DesignError> {
    check_f(f)?;
    check_exponent(q)?;
    Ok(0.5 * f.powf(0.5 * q).asin())
}

/// `η = ½ arcsin(√f)`, the exact inverse of the linear entropy `sin²(2η)`.
pub fn eta_from_f_linear_entropy(f: f64) -> Result<f64, DesignError> {
    check_f(f)?;
    Ok(0.5 * f.sqrt().asin())
}

/// Entropy of entanglement reached by the ansatz, `h₂((1 − √(1 − f^q))/2)`.
pub fn designed_entropy(f: f64, q: f64) -> Result<f64, DesignError> {
    check_f(f)?;
    check_exponent(q)?;
    Ok(designed_entropy_unchecked(f, q))
}

fn designed_entropy_unchecked(f: f64, q: f64) -> f64 {
    let x = f.powf(q);
    // (1 − √(1−x))/2 written without cancellation
    let s = x / (2.0 * (1.0 + (1.0 - x).sqrt()));
    binary_entropy(s)
}

/// `d(q) = ∫₀¹ |S(f; q) − f| df` by adaptive Simpson to [`DISTANCE_TOLERANCE`].
pub fn distance(q: f64) -> Result<f64, DesignError> {
    distance_with_tolerance(q, DISTANCE_TOLERANCE)
}

pub fn distance_with_tolerance(q: f64, tol: f64) -> Result<f64, DesignError> {
    check_exponent(q)?;
    adaptive_simpson(|f| (designed_entropy_unchecked(f, q) - f).abs(), 0.0, 1.0, tol)
        .map_err(|e| DesignError::Quadrature { q, at: e.at })
}

/// Outcome of the `q` optimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QOptimum {
    pub q: f64,
    pub distance: f64,
    pub bracket: [f64; 2],
    /// Coarse unimodality scan `(q, d(q))`.
    pub scan: Vec<(f64, f64)>,
}

/// Minimize `d(q)` on `bracket` by golden-section search to within [`Q_TOLERANCE`].
pub fn optimize_q(bracket: [f64; 2]) -> Result<QOptimum, DesignError> {
    let [lo, hi] = bracket;
    check_exponent(lo)?;
    check_exponent(hi)?;
    if !(hi > lo) {
        return Err(DesignError::InvalidParameter { name: "q_hi", value: hi, reason: "must exceed q_lo" });
    }
    let scan = coarse_scan(&distance, lo, hi)?;
    if !is_unimodal(&scan) {
        return Err(DesignError::NotUnimodal { scan });
    }
    let q = golden_section(&distance, lo, hi, Q_TOLERANCE)?;
    Ok(QOptimum { q, distance: distance(q)?, bracket, scan })
}

/// Dense-scan `max_f |S(f; q) − f|` and the `f` where it occurs.
pub fn linearization_error(q: f64) -> Result<(f64, f64), DesignError> {
    check_exponent(q)?;
    let n = LINEARIZATION_SCAN_POINTS;
    Ok((0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            ((designed_entropy_unchecked(f, q) - f).abs(), f)
        })
        .fold((0.0, 0.0), |best, cand| if cand.0 > best.0 { cand } else { best }))
}

/// Raw coupling `λ = (q/4) f^{q/2−1} (1 − f^q)^{−1/2} df/dt`; singular where `f ∈ {0, 1}`.
pub fn lambda_raw(traj: &TargetTrajectory, q: f64, t: f64) -> Result<f64, DesignError> {
    check_exponent(q)?;
    let f = traj.evaluate(t)?;
    let gap = 1.0 - f.powf(q);
    if f < SINGULARITY_THRESHOLD || gap < SINGULARITY_THRESHOLD {
        return Err(DesignError::Singular { t, f });
    }
    let df = traj.derivative(t)?;
    Ok(0.25 * q * f.powf(0.5 * q - 1.0) / gap.sqrt() * df)
}

struct CellIntegrator<'a> {
    traj: &'a TargetTrajectory,
    q: f64,
    renorm: RenormalizationParams,
}

/// Sub-samples per cell used to detect band crossings.
const CROSSING_PROBES: usize = 8;
const BISECTION_DEPTH: u32 = 60;

impl CellIntegrator<'_> {
    fn outside(&self, t: f64) -> Result<bool, DesignError> {
        Ok(!self.renorm.in_band(self.traj.evaluate(t)?))
    }

    fn clamped_eta(&self, t: f64) -> Result<f64, DesignError> {
        let f = self.traj.evaluate(t)?.clamp(self.renorm.delta0, self.renorm.delta1);
        eta_from_f(f, self.q)
    }

    /// Time spent outside the band on `[a, b]`, locating crossings by bisection.
    fn time_outside(&self, a: f64, b: f64, oa: bool, ob: bool, depth: u32) -> Result<f64, DesignError> {
        if oa == ob {
            return Ok(if oa { b - a } else { 0.0 });
        }
        let mid = 0.5 * (a + b);
        if depth == 0 || mid <= a || mid >= b {
            return Ok(0.5 * (b - a));
        }
        let om = self.outside(mid)?;
        Ok(self.time_outside(a, mid, oa, om, depth - 1)? + self.time_outside(mid, b, om, ob, depth - 1)?)
    }

    /// `∫ₐᵇ λ(t) dt` of the renormalized coupling.
    ///
    /// The clamped ansatz `η(clamp(f))` is an antiderivative of the raw
    /// coupling inside the band and constant outside it, so the area is its
    /// increment plus `λ₀` times the time spent outside.
    fn area(&self, a: f64, b: f64) -> Result<f64, DesignError> {
        let inside = self.clamped_eta(b)? - self.clamped_eta(a)?;
        if self.renorm.lambda0 == 0.0 {
            return Ok(inside);
        }
        let mut outside = 0.0;
        let mut left = a;
        let mut left_out = self.outside(a)?;
        for k in 1..=CROSSING_PROBES {
            let right = if k == CROSSING_PROBES { b } else { a + (b - a) * k as f64 / CROSSING_PROBES as f64 };
            let right_out = self.outside(right)?;
            outside += self.time_outside(left, right, left_out, right_out, BISECTION_DEPTH)?;
            left = right;
            left_out = right_out;
        }
        Ok(inside + self.renorm.lambda0 * outside)
    }
}

/// Build the sample-and-hold coupling on a uniform grid of `n_steps + 1` points.
pub fn synthesize(
    traj: &TargetTrajectory,
    ansatz: AnsatzParams,
    renorm: RenormalizationParams,
    n_steps: usize,
) -> Result<CouplingWaveform, DesignError> {
    let ansatz = AnsatzParams::new(ansatz.q)?;
    let renorm = RenormalizationParams::new(renorm.delta0, renorm.delta1, renorm.lambda0)?;
    let report = traj.validate();
    if !report.is_valid() {
        return Err(DesignError::InvalidTrajectory(report));
    }
    if n_steps < MIN_STEPS {
        return Err(DesignError::TooFewSteps(n_steps));
    }
    let t_final = traj.t_final();
    let dt = t_final / n_steps as f64;
    let times: Vec<f64> = (0..=n_steps).map(|k| t_final * k as f64 / n_steps as f64).collect();
    let cells = CellIntegrator { traj, q: ansatz.q, renorm };

    let mut lambda = Vec::with_capacity(n_steps + 1);
    for w in times.windows(2) {
        lambda.push(cells.area(w[0], w[1])? / dt);
    }
    lambda.push(lambda[n_steps - 1]);

    let mut f_target = Vec::with_capacity(n_steps + 1);
    let mut s_predicted = Vec::with_capacity(n_steps + 1);
    for &t in &times {
        let f = traj.evaluate(t)?;
        f_target.push(f);
        s_predicted.push(designed_entropy_unchecked(f, ansatz.q));
    }
    let record = DesignRecord {
        trajectory: traj.descriptor(),
        q: ansatz.q,
        delta0: renorm.delta0,
        delta1: renorm.delta1,
        lambda0: renorm.lambda0,
        n_steps,
    };
    Ok(CouplingWaveform::assemble(t_final, lambda, Some(TargetColumns { f_target, s_predicted }), Some(record)))
}

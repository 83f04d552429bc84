//! Target entanglement trajectories `f(t)`.
//!
//! Three closed-form families are built in (exponential saturation, the
//! triangle wave and the power path `(κt/10)^p`), plus sampled user input
//! interpolated with a monotone cubic. Every trajectory is defined on
//! `[0, t_final]` and must start at zero and stay inside `[0, 1]`.

mod interp;
mod io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use interp::MonotoneCubic;
pub use io::{parse_samples_csv, parse_samples_json, read_samples};

/// Round-off tolerated outside `[0, 1]` before `evaluate` rejects a value.
pub const RANGE_ROUNDOFF: f64 = 1e-12;
/// Largest `|f(0)|` accepted as zero.
pub const INITIAL_VALUE_TOLERANCE: f64 = 1e-9;
/// Number of points in the validation scan.
pub const VALIDATION_GRID_POINTS: usize = 10_000;
/// Central-difference step for sampled trajectories, as a fraction of `t_final`.
pub const DERIVATIVE_STEP_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("time {t} outside [0, {t_final}]")]
    TimeOutOfRange { t: f64, t_final: f64 },
    #[error("f({t}) = {value} leaves [0, 1]")]
    ValueOutOfRange { t: f64, value: f64 },
    #[error("df/dt is singular at t = {t}")]
    SingularDerivative { t: f64 },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("cannot read samples from {path}: {message}")]
    Io { path: String, message: String },
}

/// Shape of a target trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `1 − e^{−κt}`
    ExpSaturation { kappa: f64 },
    /// `½ + (1/π) arcsin(sin(πκt − π/2))`, rising on even and falling on odd unit cells of `κt`.
    TriangleWave { kappa: f64 },
    /// `(κt/10)^p`
    PowerPath { kappa: f64, p: f64 },
    Sampled(MonotoneCubic),
}

/// A user-defined entanglement shape on `[0, t_final]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTrajectory {
    shape: Shape,
    t_final: f64,
}

/// Serializable description used in output manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrajectoryDescriptor {
    ExpSaturation { kappa: f64, t_final: f64 },
    TriangleWave { kappa: f64, t_final: f64 },
    PowerPath { kappa: f64, p: f64, t_final: f64 },
    Sampled { samples: usize, t_final: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, TrajectoryError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(TrajectoryError::InvalidParameter { name, value, reason: "must be finite and > 0" })
    }
}

impl TargetTrajectory {
    pub fn exp_saturation(kappa: f64, t_final: f64) -> Result<Self, TrajectoryError> {
        Ok(Self {
            shape: Shape::ExpSaturation { kappa: positive("kappa", kappa)? },
            t_final: positive("t_final", t_final)?,
        })
    }

    pub fn triangle_wave(kappa: f64, t_final: f64) -> Result<Self, TrajectoryError> {
        Ok(Self {
            shape: Shape::TriangleWave { kappa: positive("kappa", kappa)? },
            t_final: positive("t_final", t_final)?,
        })
    }

    pub fn power_path(kappa: f64, p: f64, t_final: f64) -> Result<Self, TrajectoryError> {
        Ok(Self {
            shape: Shape::PowerPath { kappa: positive("kappa", kappa)?, p: positive("p", p)? },
            t_final: positive("t_final", t_final)?,
        })
    }

    /// Power path over its natural horizon `[0, 10/κ]`, ending at one ebit.
    pub fn power_path_full(kappa: f64, p: f64) -> Result<Self, TrajectoryError> {
        Self::power_path(kappa, p, 10.0 / positive("kappa", kappa)?)
    }

    /// Sampled trajectory; `t` must start at 0 and increase strictly. `t_final` is the last sample time.
    pub fn sampled(samples: &[(f64, f64)]) -> Result<Self, TrajectoryError> {
        if samples.len() < 2 {
            return Err(TrajectoryError::InvalidSamples("need at least two samples".into()));
        }
        if let Some((t, f)) = samples.iter().find(|(t, f)| !t.is_finite() || !f.is_finite()) {
            return Err(TrajectoryError::InvalidSamples(format!("non-finite sample ({t}, {f})")));
        }
        if samples[0].0 != 0.0 {
            return Err(TrajectoryError::InvalidSamples(format!("first sample time is {}, expected 0", samples[0].0)));
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(TrajectoryError::InvalidSamples(format!(
                "sample times must increase strictly ({} then {})",
                w[0].0, w[1].0
            )));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let t_final = xs[xs.len() - 1];
        Ok(Self { shape: Shape::Sampled(MonotoneCubic::new(xs, ys)), t_final })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn descriptor(&self) -> TrajectoryDescriptor {
        let t_final = self.t_final;
        match &self.shape {
            Shape::ExpSaturation { kappa } => TrajectoryDescriptor::ExpSaturation { kappa: *kappa, t_final },
            Shape::TriangleWave { kappa } => TrajectoryDescriptor::TriangleWave { kappa: *kappa, t_final },
            Shape::PowerPath { kappa, p } => TrajectoryDescriptor::PowerPath { kappa: *kappa, p: *p, t_final },
            Shape::Sampled(m) => TrajectoryDescriptor::Sampled { samples: m.len(), t_final },
        }
    }

    fn check_time(&self, t: f64) -> Result<(), TrajectoryError> {
        if (0.0..=self.t_final).contains(&t) {
            Ok(())
        } else {
            Err(TrajectoryError::TimeOutOfRange { t, t_final: self.t_final })
        }
    }

    /// Unchecked closed form; `t` is assumed in range.
    fn raw_value(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::ExpSaturation { kappa } => -(-kappa * t).exp_m1(),
            Shape::TriangleWave { kappa } => {
                let u = (kappa * t).rem_euclid(2.0);
                if u <= 1.0 {
                    u
                } else {
                    2.0 - u
                }
            }
            Shape::PowerPath { kappa, p } => (kappa * t / 10.0).powf(*p),
            Shape::Sampled(m) => m.eval(t),
        }
    }

    /// `f(t)`, clamped into `[0, 1]` when the excursion is pure round-off.
    pub fn evaluate(&self, t: f64) -> Result<f64, TrajectoryError> {
        self.check_time(t)?;
        let value = self.raw_value(t);
        if !(-RANGE_ROUNDOFF..=1.0 + RANGE_ROUNDOFF).contains(&value) {
            return Err(TrajectoryError::ValueOutOfRange { t, value });
        }
        Ok(value.clamp(0.0, 1.0))
    }

    /// `df/dt`. Closed-form families use the right-hand derivative at kinks;
    /// sampled input uses a central difference (one-sided at the ends).
    pub fn derivative(&self, t: f64) -> Result<f64, TrajectoryError> {
        self.check_time(t)?;
        match &self.shape {
            Shape::ExpSaturation { kappa } => Ok(kappa * (-kappa * t).exp()),
            Shape::TriangleWave { kappa } => {
                let u = (kappa * t).rem_euclid(2.0);
                Ok(if u < 1.0 { *kappa } else { -kappa })
            }
            Shape::PowerPath { kappa, p } => {
                if t == 0.0 {
                    return match p.total_cmp(&1.0) {
                        std::cmp::Ordering::Less => Err(TrajectoryError::SingularDerivative { t }),
                        std::cmp::Ordering::Equal => Ok(kappa / 10.0),
                        std::cmp::Ordering::Greater => Ok(0.0),
                    };
                }
                Ok(p * kappa / 10.0 * (kappa * t / 10.0).powf(p - 1.0))
            }
            Shape::Sampled(m) => {
                let h = DERIVATIVE_STEP_FRACTION * self.t_final;
                let (lo, hi) = ((t - h).max(0.0), (t + h).min(self.t_final));
                Ok((m.eval(hi) - m.eval(lo)) / (hi - lo))
            }
        }
    }

    /// Scan the trajectory for violations of the admissibility rules.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&DiscontinuityConfig::default())
    }

    pub fn validate_with(&self, config: &DiscontinuityConfig) -> ValidationReport {
        let mut violations = Vec::new();
        let f0 = self.raw_value(0.0);
        if !(f0.abs() <= INITIAL_VALUE_TOLERANCE) {
            violations.push(Violation::InitialValueNonzero { value: f0 });
        }
        let n = VALIDATION_GRID_POINTS;
        let mut worst: Option<(f64, f64, f64)> = None;
        let mut count = 0usize;
        for k in 0..n {
            let t = self.t_final * k as f64 / (n - 1) as f64;
            let v = self.raw_value(t);
            let excess = if v.is_finite() { (v - v.clamp(0.0, 1.0)).abs() } else { f64::INFINITY };
            if excess > RANGE_ROUNDOFF {
                count += 1;
                if worst.map_or(true, |(_, _, w)| excess > w) {
                    worst = Some((t, v, excess));
                }
            }
        }
        if let Some((t, value, _)) = worst {
            violations.push(Violation::OutOfRange { t, value, points: count });
        }
        if let Shape::Sampled(m) = &self.shape {
            let min_span = self.t_final * config.span_fraction;
            let knots: Vec<(f64, f64)> = m.knots().collect();
            for w in knots.windows(2) {
                let (dt, df) = (w[1].0 - w[0].0, (w[1].1 - w[0].1).abs());
                if df > config.max_jump && dt < min_span {
                    violations.push(Violation::Discontinuity { t_left: w[0].0, t_right: w[1].0, jump: df });
                }
            }
        }
        ValidationReport { violations }
    }
}

/// Boundary `R(t) = κt/10` between "more" and "less" entangled paths on `[0, 10/κ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub kappa: f64,
}

impl Boundary {
    pub fn horizon(&self) -> f64 {
        10.0 / self.kappa
    }

    pub fn value(&self, t: f64) -> f64 {
        self.kappa * t / 10.0
    }
}

/// Thresholds of the jump heuristic for sampled trajectories: adjacent samples
/// differing by more than `max_jump` within less than `span_fraction · t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscontinuityConfig {
    pub max_jump: f64,
    pub span_fraction: f64,
}

impl Default for DiscontinuityConfig {
    fn default() -> Self {
        Self { max_jump: 0.05, span_fraction: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InitialValueNonzero { value: f64 },
    OutOfRange { t: f64, value: f64, points: usize },
    Discontinuity { t_left: f64, t_right: f64, jump: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::InitialValueNonzero { value } => write!(f, "initial value nonzero: f(0) = {value}"),
            Self::OutOfRange { t, value, points } => {
                write!(f, "out of range: f({t}) = {value} ({points} grid points outside [0, 1])")
            }
            Self::Discontinuity { t_left, t_right, jump } => {
                write!(f, "discontinuity: jump {jump} between t = {t_left} and t = {t_right}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn family_reference_values() {
        let exp = TargetTrajectory::exp_saturation(1.0, 10.0).unwrap();
        assert_eq!(exp.evaluate(0.0).unwrap(), 0.0);
        let power = TargetTrajectory::power_path(1.0, 1.0, 10.0).unwrap();
        assert_eq!(power.evaluate(5.0).unwrap(), 0.5);
        let tri = TargetTrajectory::triangle_wave(1.0, 10.0).unwrap();
        assert_eq!(tri.evaluate(1.0).unwrap(), 1.0);
    }

    #[test]
    fn triangle_matches_arcsin_sine_form() {
        let tri = TargetTrajectory::triangle_wave(0.7, 10.0).unwrap();
        for k in 0..=1000 {
            let t = 10.0 * k as f64 / 1000.0;
            let closed = 0.5 + (PI * 0.7 * t - PI / 2.0).sin().asin() / PI;
            assert!((tri.evaluate(t).unwrap() - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_extrema_at_integer_phases() {
        let tri = TargetTrajectory::triangle_wave(1.0, 10.0).unwrap();
        for (kt, expected) in [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 0.0), (5.0, 1.0)] {
            assert!((tri.evaluate(kt).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn analytic_derivatives() {
        let exp = TargetTrajectory::exp_saturation(1.0, 10.0).unwrap();
        assert_eq!(exp.derivative(0.0).unwrap(), 1.0);
        let lin = TargetTrajectory::power_path(2.0, 1.0, 5.0).unwrap();
        for t in [0.0, 1.0, 4.5] {
            assert!((lin.derivative(t).unwrap() - 0.2).abs() < 1e-15);
        }
        let tri = TargetTrajectory::triangle_wave(1.0, 10.0).unwrap();
        // right-hand derivative at the peak and the trough
        assert_eq!(tri.derivative(1.0).unwrap(), -1.0);
        assert_eq!(tri.derivative(2.0).unwrap(), 1.0);
    }

    #[test]
    fn power_path_derivative_singular_at_origin_for_small_p() {
        let path = TargetTrajectory::power_path(1.0, 0.5, 10.0).unwrap();
        assert!(matches!(path.derivative(0.0), Err(TrajectoryError::SingularDerivative { .. })));
        assert!(path.derivative(1e-3).unwrap().is_finite());
        let steep = TargetTrajectory::power_path(1.0, 3.0, 10.0).unwrap();
        assert_eq!(steep.derivative(0.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_time_rejected() {
        let exp = TargetTrajectory::exp_saturation(1.0, 10.0).unwrap();
        assert!(matches!(exp.evaluate(10.5), Err(TrajectoryError::TimeOutOfRange { .. })));
        assert!(matches!(exp.derivative(-1e-3), Err(TrajectoryError::TimeOutOfRange { .. })));
    }

    #[test]
    fn power_path_beyond_horizon_leaves_range() {
        let path = TargetTrajectory::power_path(1.0, 1.0, 12.0).unwrap();
        assert!(matches!(path.evaluate(11.0), Err(TrajectoryError::ValueOutOfRange { .. })));
        let report = path.validate();
        assert!(matches!(report.violations.as_slice(), [Violation::OutOfRange { .. }]));
    }

    #[test]
    fn sampled_derivative_tracks_closed_form() {
        let n = 10_000;
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let t = 10.0 * k as f64 / (n - 1) as f64;
                (t, -(-t).exp_m1())
            })
            .collect();
        let sampled = TargetTrajectory::sampled(&samples).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=2000 {
            let t = 10.0 * k as f64 / 2000.0;
            worst = worst.max((sampled.derivative(t).unwrap() - (-t).exp()).abs());
        }
        assert!(worst < 1e-4, "sup-norm derivative error {worst}");
    }

    #[test]
    fn validation_examples() {
        assert!(TargetTrajectory::exp_saturation(1.0, 10.0).unwrap().validate().is_valid());

        let offset = TargetTrajectory::sampled(&[(0.0, 0.2), (5.0, 0.5), (10.0, 0.9)]).unwrap();
        let report = offset.validate();
        assert!(matches!(report.violations[0], Violation::InitialValueNonzero { .. }));
        assert!(report.to_string().contains("initial value nonzero"));

        let step: Vec<(f64, f64)> =
            (0..=10_000).map(|k| (k as f64 * 1e-3, if k < 5000 { 0.0 } else { 1.0 })).collect();
        let report = TargetTrajectory::sampled(&step).unwrap().validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().contains("discontinuity"));
    }

    #[test]
    fn discontinuity_thresholds_are_configurable() {
        let ramp: Vec<(f64, f64)> = (0..=1000).map(|k| (k as f64 * 1e-2, k as f64 / 1000.0)).collect();
        let traj = TargetTrajectory::sampled(&ramp).unwrap();
        assert!(traj.validate().is_valid());
        let strict = DiscontinuityConfig { max_jump: 1e-4, span_fraction: 1e-2 };
        assert!(!traj.validate_with(&strict).is_valid());
    }

    #[test]
    fn sampled_rejects_malformed_input() {
        assert!(TargetTrajectory::sampled(&[(0.0, 0.0)]).is_err());
        assert!(TargetTrajectory::sampled(&[(0.0, 0.0), (0.0, 0.1)]).is_err());
        assert!(TargetTrajectory::sampled(&[(1.0, 0.0), (2.0, 0.1)]).is_err());
        assert!(TargetTrajectory::sampled(&[(0.0, 0.0), (1.0, f64::NAN)]).is_err());
    }

    #[test]
    fn rejects_bad_family_parameters() {
        assert!(TargetTrajectory::exp_saturation(0.0, 10.0).is_err());
        assert!(TargetTrajectory::power_path(1.0, -1.0, 10.0).is_err());
        assert!(TargetTrajectory::triangle_wave(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn boundary_line() {
        let r = Boundary { kappa: 2.0 };
        assert_eq!(r.horizon(), 5.0);
        assert_eq!(r.value(2.5), 0.5);
    }
}

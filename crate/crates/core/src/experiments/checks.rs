//! Fast self-checks of the published properties, used by `entdesign verify`.

use serde::Serialize;

use crate::designer::{optimize_q, CouplingWaveform, DEFAULT_Q, DEFAULT_Q_BRACKET, LINEARIZATION_ERROR};
use crate::dynamics::{
    evolve_closed_form, evolve_ising, evolve_lindblad, ChannelKind, ChannelSpec, IsingParams,
};
use crate::quantum::{concurrence_general, concurrence_x_state, entropy_of_entanglement, ComplexMatrix4, DensityMatrix};

use super::{reproduce_design_example, run_sweep, ExampleFamily, ExperimentError, GridAxis, SweepSpec};
use super::{AD_DEGENERACY_TOLERANCE, UNITARY_FLOOR};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

/// Fractional part of `k·α` for the `d`-th irrational `α`, a deterministic
/// low-discrepancy sample in `[0, 1)`.
fn weyl(k: usize, d: usize) -> f64 {
    const ALPHAS: [f64; 6] = [
        0.618_033_988_749_895,
        0.414_213_562_373_095,
        0.732_050_807_568_877,
        0.236_067_977_499_790,
        0.645_751_311_064_591,
        0.316_624_790_355_400,
    ];
    (k as f64 * ALPHAS[d]).fract()
}

/// Deterministic family of positive X states covering the positivity cone.
pub fn sample_x_states(n: usize) -> Vec<DensityMatrix> {
    (1..=n)
        .map(|k| {
            let w: [f64; 4] = std::array::from_fn(|d| 0.02 + weyl(k, d));
            let total: f64 = w.iter().sum();
            let p = w.map(|x| x / total);
            let outer = num_complex::Complex64::from_polar(weyl(k, 4) * (p[0] * p[3]).sqrt(), std::f64::consts::TAU * weyl(k, 5));
            let inner = num_complex::Complex64::from_polar(weyl(k, 5) * (p[1] * p[2]).sqrt(), std::f64::consts::TAU * weyl(k, 4));
            let mut m = ComplexMatrix4::from_diagonal(p);
            m.0[0][3] = outer;
            m.0[3][0] = outer.conj();
            m.0[1][2] = inner;
            m.0[2][1] = inner.conj();
            DensityMatrix::from_unchecked(m)
        })
        .collect()
}

pub fn self_check() -> Result<Vec<CheckOutcome>, ExperimentError> {
    let mut out = Vec::new();

    let opt = optimize_q(DEFAULT_Q_BRACKET)?;
    out.push(outcome(
        "q_optimization",
        (opt.q - DEFAULT_Q).abs() <= 5e-3 && opt.distance < 5e-3,
        format!("q* = {:.5}, d(q*) = {:.3e}", opt.q, opt.distance),
    ));

    let bound = LINEARIZATION_ERROR + 0.01;
    let exp = reproduce_design_example(ExampleFamily::ExpSaturation)?;
    let fid = exp.fidelity();
    out.push(outcome("exp_design_fidelity", fid.sup_error <= bound, format!("sup|S−f| = {:.4e} (bound {bound:.4e})", fid.sup_error)));
    let tri = reproduce_design_example(ExampleFamily::TriangleWave)?;
    let fid = tri.fidelity();
    out.push(outcome(
        "triangle_design_fidelity",
        fid.sup_error_in_band <= bound && fid.max_entropy_jump < 0.05,
        format!("in-band sup|S−f| = {:.4e}, max step in S = {:.2e}", fid.sup_error_in_band, fid.max_entropy_jump),
    ));

    let mut worst: f64 = 0.0;
    for rho in sample_x_states(1000) {
        worst = worst.max((concurrence_x_state(&rho)? - concurrence_general(&rho)?).abs());
    }
    out.push(outcome("x_state_oracle", worst <= 1e-10, format!("max |ΔC| = {worst:.2e} over 1000 states")));

    let mut gap: f64 = 0.0;
    for ex in [&exp, &tri] {
        let open = evolve_lindblad(&ex.waveform, ChannelSpec::none())?;
        for k in 0..open.len() {
            gap = gap.max(open.states().density(k).matrix().max_abs_diff(ex.evolution.states().density(k).matrix()));
        }
    }
    out.push(outcome("noiseless_lindblad", gap <= 1e-6, format!("max entry gap = {gap:.2e}")));

    let idle = CouplingWaveform::constant(0.0, 3.0, 3000)?;
    let ad = evolve_lindblad(&idle, ChannelSpec::amplitude_damping(1.0)?)?;
    let err = ad
        .times()
        .iter()
        .enumerate()
        .map(|(k, t)| (ad.states().density(k).population(1) - (-2.0 * t).exp()).abs())
        .fold(0.0, f64::max);
    out.push(outcome("ad_population_oracle", err <= 1e-7, format!("max |ρ₂₂ − e^(−2Γt)| = {err:.2e}")));

    let mut ising_err: f64 = 0.0;
    for k in 0..100 {
        let eta = std::f64::consts::PI * (k as f64 + 0.5) / 100.0;
        let coupling = CouplingWaveform::constant(eta, 1.0, 1000)?;
        let run = evolve_ising(&IsingParams { epsilon: [0.0, 0.0], delta: [0.0, 0.0], coupling })?;
        ising_err = ising_err.max((run.final_measures().entropy - entropy_of_entanglement(&evolve_closed_form(eta))).abs());
    }
    out.push(outcome("ising_equivalence", ising_err <= 1e-10, format!("max |ΔS| = {ising_err:.2e}")));

    let spec = SweepSpec {
        log10_p: GridAxis::new(-1.0, 1.0, 5)?,
        gamma_over_kappa: GridAxis::new(0.0, 0.25, 6)?,
        ..SweepSpec::default()
    };
    let ad = run_sweep(ChannelKind::AmplitudeDamping, &spec)?.findings();
    let pd = run_sweep(ChannelKind::PhaseDamping, &spec)?.findings();
    let gap = ad.max_mirror_gap.unwrap_or(f64::INFINITY);
    let margin = pd.min_asymmetry_margin.unwrap_or(f64::NEG_INFINITY);
    let floor = ad.unitary_row_min.unwrap_or(0.0).min(pd.unitary_row_min.unwrap_or(0.0));
    out.push(outcome(
        "path_family_sweep",
        gap <= AD_DEGENERACY_TOLERANCE && margin > 0.0 && floor >= UNITARY_FLOOR,
        format!("AD mirror gap {gap:.2e}, PD margin {margin:.4}, Γ=0 floor {floor:.5} (5×6 grid)"),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_x_states_are_valid() {
        for rho in sample_x_states(200) {
            assert!(DensityMatrix::new(*rho.matrix()).is_ok());
        }
    }

    #[test]
    fn every_self_check_passes() {
        for c in self_check().unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}

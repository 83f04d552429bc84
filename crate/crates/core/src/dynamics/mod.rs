//! Forward simulation of the two-qubit system driven by a coupling waveform.
//!
//! The Hamiltonian is `H(t) = λ(t) G` for a fixed generator `G`: the XY
//! exchange for the resonant qubits, `σᶻ⊗σᶻ` for the Ising case. The
//! waveform holds `λ` constant on each grid cell, so every cell is
//! integrated by classical RK4 with a constant generator. A cell is split
//! into `m` equal substeps, where `m` is fixed by the cell's phase budget
//! `(|λ| + Γ) Δt` and the refine factor of [`Rk4Config`]; runs are
//! therefore deterministic, and `refine = 2` reproduces the same run on a
//! grid of half the step.

mod export;
mod superop;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designer::CouplingWaveform;
use crate::quantum::{
    check_invariants, pauli, pure_state_measures, x_state_measures, xy_exchange, Axis, ComplexMatrix4,
    DensityMatrix, EntanglementValues, InvariantBreach, PureState2Q, QuantumError, Qubit, Vector4,
};

use superop::{unvectorize, vectorize, LiouvilleVector, SparseSuperop};

pub use export::{ExportError, DENSITY_BASIS, EVOLUTION_CSV_HEADER};

/// `|‖ψ‖² − 1|` beyond this aborts a unitary run.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-6;
/// Default substep phase budget `(|λ| + Γ) h`.
pub const DEFAULT_MAX_SUBSTEP_PHASE: f64 = 0.005;
/// Index of `|01⟩`, the initial state of the XY runs.
pub const INITIAL_BASIS_INDEX: usize = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid channel: gamma = {gamma} {reason}")]
    InvalidChannel { gamma: f64, reason: &'static str },
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("integration failure at step {step} (t = {t}): norm drifted by {deviation:e}; the step is too large")]
    NormDrift { step: usize, t: f64, deviation: f64 },
    #[error("integration failure at step {step} (t = {t}): {breach}")]
    Invariant { step: usize, t: f64, breach: InvariantBreach },
    #[error("measure evaluation failed at step {step} (t = {t}): {source}")]
    Measure { step: usize, t: f64, source: QuantumError },
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    None,
    AmplitudeDamping,
    PhaseDamping,
}

/// Local noise acting identically on both qubits at rate `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub gamma: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, gamma: f64) -> Result<Self, DynamicsError> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(DynamicsError::InvalidChannel { gamma, reason: "must be finite and ≥ 0" });
        }
        if kind == ChannelKind::None && gamma != 0.0 {
            return Err(DynamicsError::InvalidChannel { gamma, reason: "must be 0 when the channel is none" });
        }
        Ok(Self { kind, gamma })
    }

    pub fn none() -> Self {
        Self { kind: ChannelKind::None, gamma: 0.0 }
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self, DynamicsError> {
        Self::new(ChannelKind::AmplitudeDamping, gamma)
    }

    pub fn phase_damping(gamma: f64) -> Result<Self, DynamicsError> {
        Self::new(ChannelKind::PhaseDamping, gamma)
    }

    fn validated(&self) -> Result<Self, DynamicsError> {
        Self::new(self.kind, self.gamma)
    }

    /// Largest decay rate appearing in the generator.
    fn rate(&self) -> f64 {
        match self.kind {
            ChannelKind::None => 0.0,
            ChannelKind::AmplitudeDamping => 2.0 * self.gamma,
            ChannelKind::PhaseDamping => 2.0 * self.gamma,
        }
    }
}

/// Which grid points an evolution keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recording {
    #[default]
    EveryStep,
    /// Only the final point; invariants are still checked at every step.
    FinalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Config {
    /// Multiplies the substep count of every cell; 2 halves the step.
    pub refine: usize,
    pub max_substep_phase: f64,
    pub recording: Recording,
}

impl Default for Rk4Config {
    fn default() -> Self {
        Self { refine: 1, max_substep_phase: DEFAULT_MAX_SUBSTEP_PHASE, recording: Recording::EveryStep }
    }
}

impl Rk4Config {
    pub fn refined(refine: usize) -> Self {
        Self { refine, ..Self::default() }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        if self.refine == 0 {
            return Err(DynamicsError::InvalidConfig("refine must be ≥ 1"));
        }
        if !(self.max_substep_phase.is_finite() && self.max_substep_phase > 0.0) {
            return Err(DynamicsError::InvalidConfig("max_substep_phase must be finite and > 0"));
        }
        Ok(())
    }

    fn substeps(&self, lambda: f64, rate: f64, dt: f64) -> usize {
        let budget = ((lambda.abs() + rate) * dt / self.max_substep_phase).ceil();
        (budget.max(1.0) as usize) * self.refine
    }

    fn records(&self, step: usize, last: usize) -> bool {
        self.recording == Recording::EveryStep || step == last
    }
}

/// Ising-type coupling `J(t) σ₁ᶻσ₂ᶻ` plus local bias and tunnelling terms.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingParams {
    pub epsilon: [f64; 2],
    /// Tunnelling energies; only `(0, 0)` is supported.
    pub delta: [f64; 2],
    pub coupling: CouplingWaveform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSeries {
    Pure(Vec<PureState2Q>),
    Mixed(Vec<DensityMatrix>),
}

impl StateSeries {
    pub fn len(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Mixed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Density matrix of the `k`-th recorded state.
    pub fn density(&self, k: usize) -> DensityMatrix {
        match self {
            Self::Pure(v) => v[k].density(),
            Self::Mixed(v) => v[k],
        }
    }
}

/// States and entanglement measures at the recorded grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    times: Vec<f64>,
    states: StateSeries,
    measures: Vec<EntanglementValues>,
}

impl EvolutionResult {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &StateSeries {
        &self.states
    }

    pub fn measures(&self) -> &[EntanglementValues] {
        &self.measures
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_measures(&self) -> EntanglementValues {
        self.measures[self.measures.len() - 1]
    }

    pub fn final_density(&self) -> DensityMatrix {
        self.states.density(self.states.len() - 1)
    }

    pub fn entropy(&self) -> Vec<f64> {
        self.measures.iter().map(|m| m.entropy).collect()
    }

    pub fn eof(&self) -> Vec<f64> {
        self.measures.iter().map(|m| m.eof).collect()
    }
}

/// `cos η |01⟩ − i sin η |10⟩`, the exact state after pulse area `η`.
pub fn evolve_closed_form(eta: f64) -> PureState2Q {
    PureState2Q::exchange_evolved(eta)
}

/// `ψ ↦ −iλ G ψ`.
fn schrodinger_rhs(generator: &ComplexMatrix4, lambda: f64, psi: &Vector4) -> Vector4 {
    let g = generator.apply(psi);
    let s = Complex64::new(0.0, -lambda);
    [s * g[0], s * g[1], s * g[2], s * g[3]]
}

fn axpy4(a: &Vector4, s: f64, b: &Vector4) -> Vector4 {
    let mut out = *a;
    for k in 0..4 {
        out[k] += s * b[k];
    }
    out
}

fn rk4_pure(generator: &ComplexMatrix4, lambda: f64, h: f64, psi: &Vector4) -> Vector4 {
    let k1 = schrodinger_rhs(generator, lambda, psi);
    let k2 = schrodinger_rhs(generator, lambda, &axpy4(psi, 0.5 * h, &k1));
    let k3 = schrodinger_rhs(generator, lambda, &axpy4(psi, 0.5 * h, &k2));
    let k4 = schrodinger_rhs(generator, lambda, &axpy4(psi, h, &k3));
    let mut out = *psi;
    for k in 0..4 {
        out[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    out
}

fn integrate_pure(
    generator: &ComplexMatrix4,
    initial: PureState2Q,
    waveform: &CouplingWaveform,
    config: &Rk4Config,
) -> Result<EvolutionResult, DynamicsError> {
    config.validate()?;
    let dt = waveform.dt();
    let last = waveform.n_steps();
    let mut psi = *initial.amplitudes();
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut measures = Vec::new();
    let mut record = |step: usize, psi: &Vector4| -> Result<(), DynamicsError> {
        let t = waveform.times()[step];
        let state = PureState2Q::from_unchecked(*psi);
        let deviation = (state.norm_sqr() - 1.0).abs();
        if !(deviation <= NORM_DRIFT_TOLERANCE) {
            return Err(DynamicsError::NormDrift { step, t, deviation });
        }
        if config.records(step, last) {
            let m = pure_state_measures(&state).map_err(|source| DynamicsError::Measure { step, t, source })?;
            times.push(t);
            states.push(state);
            measures.push(m);
        }
        Ok(())
    };
    record(0, &psi)?;
    for (step, &lambda) in waveform.lambda()[..last].iter().enumerate() {
        let m = config.substeps(lambda, 0.0, dt);
        let h = dt / m as f64;
        for _ in 0..m {
            psi = rk4_pure(generator, lambda, h, &psi);
        }
        record(step + 1, &psi)?;
    }
    Ok(EvolutionResult { times, states: StateSeries::Pure(states), measures })
}

/// RK4 integration of `i d|ψ⟩/dt = λ(t) K |ψ⟩` from `|01⟩`, `K` the XY exchange.
pub fn evolve_schrodinger(waveform: &CouplingWaveform) -> Result<EvolutionResult, DynamicsError> {
    evolve_schrodinger_with(waveform, &Rk4Config::default())
}

pub fn evolve_schrodinger_with(waveform: &CouplingWaveform, config: &Rk4Config) -> Result<EvolutionResult, DynamicsError> {
    integrate_pure(&xy_exchange(), PureState2Q::basis(INITIAL_BASIS_INDEX), waveform, config)
}

/// Interaction-picture evolution under `J(t) σ₁ᶻσ₂ᶻ` from `|+−⟩`.
/// The local bias terms are rotated away; tunnelling must vanish.
pub fn evolve_ising(params: &IsingParams) -> Result<EvolutionResult, DynamicsError> {
    evolve_ising_with(params, &Rk4Config::default())
}

pub fn evolve_ising_with(params: &IsingParams, config: &Rk4Config) -> Result<EvolutionResult, DynamicsError> {
    if params.delta != [0.0, 0.0] {
        return Err(DynamicsError::Unsupported("nonzero tunnelling energy requires microwave driving"));
    }
    if params.epsilon.iter().any(|e| !e.is_finite()) {
        return Err(DynamicsError::InvalidConfig("bias energies must be finite"));
    }
    let zz = pauli(Axis::Z, Qubit::One) * pauli(Axis::Z, Qubit::Two);
    integrate_pure(&zz, plus_minus(), &params.coupling, config)
}

/// `|+−⟩ = (|00⟩ − |01⟩ + |10⟩ − |11⟩)/2`.
pub fn plus_minus() -> PureState2Q {
    let h = Complex64::new(0.5, 0.0);
    PureState2Q::from_unchecked([h, -h, h, -h])
}

fn lindblad_rhs(hamiltonian: &SparseSuperop, dissipator: &SparseSuperop, lambda: f64, v: &LiouvilleVector) -> LiouvilleVector {
    let mut out = [Complex64::new(0.0, 0.0); 16];
    hamiltonian.apply_scaled_into(lambda, v, &mut out);
    dissipator.apply_scaled_into(1.0, v, &mut out);
    out
}

fn axpy16(a: &LiouvilleVector, s: f64, b: &LiouvilleVector) -> LiouvilleVector {
    let mut out = *a;
    for k in 0..16 {
        out[k] += s * b[k];
    }
    out
}

/// RK4 integration of `ρ̇ = −iλ(t)[K, ρ] + D(ρ)` from `|01⟩⟨01|`.
///
/// Trace, Hermiticity and positivity are checked at every grid point and a
/// breach ends the run with the offending step; states are never projected
/// back onto the physical set. Measures use the X-state concurrence.
pub fn evolve_lindblad(waveform: &CouplingWaveform, channel: ChannelSpec) -> Result<EvolutionResult, DynamicsError> {
    evolve_lindblad_with(waveform, channel, &Rk4Config::default())
}

pub fn evolve_lindblad_with(
    waveform: &CouplingWaveform,
    channel: ChannelSpec,
    config: &Rk4Config,
) -> Result<EvolutionResult, DynamicsError> {
    config.validate()?;
    let channel = channel.validated()?;
    let hamiltonian = SparseSuperop::commutator(&xy_exchange());
    let dissipator = SparseSuperop::dissipator(&channel);
    let rate = channel.rate();
    let dt = waveform.dt();
    let last = waveform.n_steps();

    let mut v = vectorize(&PureState2Q::basis(INITIAL_BASIS_INDEX).projector());
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut measures = Vec::new();
    let mut record = |step: usize, v: &LiouvilleVector| -> Result<(), DynamicsError> {
        let t = waveform.times()[step];
        let m = unvectorize(v);
        let breach = check_invariants(&m).map_err(|source| DynamicsError::Measure { step, t, source })?;
        if let Some(breach) = breach {
            return Err(DynamicsError::Invariant { step, t, breach });
        }
        if config.records(step, last) {
            let rho = DensityMatrix::from_unchecked(m);
            let values = x_state_measures(&rho).map_err(|source| DynamicsError::Measure { step, t, source })?;
            times.push(t);
            states.push(rho);
            measures.push(values);
        }
        Ok(())
    };
    record(0, &v)?;
    for (step, &lambda) in waveform.lambda()[..last].iter().enumerate() {
        let m = config.substeps(lambda, rate, dt);
        let h = dt / m as f64;
        for _ in 0..m {
            let k1 = lindblad_rhs(&hamiltonian, &dissipator, lambda, &v);
            let k2 = lindblad_rhs(&hamiltonian, &dissipator, lambda, &axpy16(&v, 0.5 * h, &k1));
            let k3 = lindblad_rhs(&hamiltonian, &dissipator, lambda, &axpy16(&v, 0.5 * h, &k2));
            let k4 = lindblad_rhs(&hamiltonian, &dissipator, lambda, &axpy16(&v, h, &k3));
            for k in 0..16 {
                v[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
            }
        }
        record(step + 1, &v)?;
    }
    Ok(EvolutionResult { times, states: StateSeries::Mixed(states), measures })
}

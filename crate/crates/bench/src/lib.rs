//! Shared fixtures for the benchmarks.

use entdesign_core::designer::{synthesize, AnsatzParams, CouplingWaveform, RenormalizationParams};
use entdesign_core::experiments::sample_x_states;
use entdesign_core::{DensityMatrix, TargetTrajectory};

/// Exponential-saturation design over `[0, 10]` at `n_steps` cells.
pub fn exp_waveform(n_steps: usize) -> CouplingWaveform {
    let traj = TargetTrajectory::exp_saturation(1.0, 10.0).expect("valid trajectory");
    synthesize(&traj, AnsatzParams::default(), RenormalizationParams::default(), n_steps).expect("design succeeds")
}

pub fn x_states(n: usize) -> Vec<DensityMatrix> {
    sample_x_states(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(exp_waveform(1000).n_steps(), 1000);
        assert_eq!(x_states(3).len(), 3);
    }
}

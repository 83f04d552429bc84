//! Independent reference computations checked against the library.

use entdesign_core::designer::{designed_entropy, distance, DEFAULT_Q};
use entdesign_core::dynamics::{evolve_closed_form, evolve_ising, plus_minus, IsingParams};
use entdesign_core::quantum::{
    concurrence_general, concurrence_x_state, entanglement_of_formation, entropy_of_entanglement, pure_concurrence,
    ComplexMatrix4, DensityMatrix, PureState2Q,
};
use entdesign_core::CouplingWaveform;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Positive X state: random populations, coherences inside the positivity cone.
fn random_x_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut p: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().ln());
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let mut m = ComplexMatrix4::from_diagonal(p);
    let outer = Complex64::from_polar(rng.gen::<f64>() * (p[0] * p[3]).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    let inner = Complex64::from_polar(rng.gen::<f64>() * (p[1] * p[2]).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    m.0[0][3] = outer;
    m.0[3][0] = outer.conj();
    m.0[1][2] = inner;
    m.0[2][1] = inner.conj();
    DensityMatrix::new(m).unwrap()
}

#[test]
fn x_state_concurrence_matches_wootters_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rho = random_x_state(&mut rng);
        let fast = concurrence_x_state(&rho).unwrap();
        let general = concurrence_general(&rho).unwrap();
        worst = worst.max((fast - general).abs());
    }
    assert!(worst <= 1e-10, "worst disagreement {worst:e}");
}

#[test]
fn pure_concurrence_is_sin_two_eta() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let eta = rng.gen_range(-2.0..2.0);
        let psi = evolve_closed_form(eta);
        let expected = (2.0 * eta).sin().abs();
        assert!((pure_concurrence(&psi) - expected).abs() < 1e-14);
        assert!((concurrence_general(&psi.density()).unwrap() - expected).abs() < 1e-7);
    }
}

#[test]
fn eof_of_pure_exchange_states_equals_entropy() {
    for k in 0..=100 {
        let eta = std::f64::consts::FRAC_PI_4 * k as f64 / 100.0;
        let psi = evolve_closed_form(eta);
        let eof = entanglement_of_formation(pure_concurrence(&psi)).unwrap();
        assert!((eof - entropy_of_entanglement(&psi)).abs() < 1e-12, "eta={eta}");
    }
}

/// Midpoint Riemann sum on 10⁶ cells.
fn riemann_distance(q: f64) -> f64 {
    let n = 1_000_000;
    let h = 1.0 / n as f64;
    (0..n)
        .map(|k| {
            let f = (k as f64 + 0.5) * h;
            (designed_entropy(f, q).unwrap() - f).abs()
        })
        .sum::<f64>()
        * h
}

#[test]
fn distance_matches_brute_force_integration() {
    for q in [1.0, DEFAULT_Q, 2.0] {
        let d = distance(q).unwrap();
        let oracle = riemann_distance(q);
        assert!((d - oracle).abs() < 1e-6, "q={q}: {d} vs {oracle}");
    }
}

/// `exp(−iη σᶻσᶻ)|+−⟩`, the diagonal generator exponentiated entrywise.
fn ising_oracle(eta: f64) -> PureState2Q {
    let zz = [1.0, -1.0, -1.0, 1.0];
    let a = *plus_minus().amplitudes();
    PureState2Q::new(std::array::from_fn(|k| a[k] * Complex64::from_polar(1.0, -eta * zz[k]))).unwrap()
}

#[test]
fn ising_evolution_is_locally_equivalent_to_exchange() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let eta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let t_final = 1.0;
        let coupling = CouplingWaveform::constant(eta / t_final, t_final, 1000).unwrap();
        let params = IsingParams { epsilon: [rng.gen(), rng.gen()], delta: [0.0, 0.0], coupling };
        let run = evolve_ising(&params).unwrap();
        let s = run.final_measures().entropy;
        assert!((s - entropy_of_entanglement(&evolve_closed_form(eta))).abs() < 1e-10, "eta={eta}");
        assert!((s - entropy_of_entanglement(&ising_oracle(eta))).abs() < 1e-10, "eta={eta}");
    }
}

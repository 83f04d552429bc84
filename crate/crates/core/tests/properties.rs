use entdesign_core::designer::{
    designed_entropy, eta_from_f, eta_from_f_linear_entropy, synthesize, AnsatzParams, CouplingWaveform,
    RenormalizationParams, DEFAULT_DELTA0, DEFAULT_Q,
};
use entdesign_core::dynamics::{evolve_closed_form, evolve_lindblad, evolve_schrodinger, ChannelSpec};
use entdesign_core::quantum::{entanglement_of_formation, entropy_of_entanglement, linear_entropy};
use entdesign_core::trajectory::TargetTrajectory;
use proptest::prelude::*;

proptest! {
    #[test]
    fn designed_entropy_round_trips_through_the_state(f in DEFAULT_DELTA0..(1.0 - DEFAULT_DELTA0), q in 0.5f64..1.99) {
        let eta = eta_from_f(f, q).unwrap();
        let s = entropy_of_entanglement(&evolve_closed_form(eta));
        prop_assert!((designed_entropy(f, q).unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn linear_entropy_design_is_exact(f in 0.0f64..=1.0) {
        let eta = eta_from_f_linear_entropy(f).unwrap();
        prop_assert!((linear_entropy(&evolve_closed_form(eta)) - f).abs() < 1e-12);
    }

    #[test]
    fn eof_stays_in_unit_interval_and_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (e_lo, e_hi) = (entanglement_of_formation(lo).unwrap(), entanglement_of_formation(hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&e_lo) && (0.0..=1.0).contains(&e_hi));
        prop_assert!(e_lo <= e_hi + 1e-15);
    }

    #[test]
    fn waveform_invariants_for_power_paths(log10_p in -1.0f64..1.0, lambda0 in 0.0f64..0.5) {
        let traj = TargetTrajectory::power_path_full(1.0, 10f64.powf(log10_p)).unwrap();
        let renorm = RenormalizationParams::symmetric(DEFAULT_DELTA0, lambda0).unwrap();
        let w = synthesize(&traj, AnsatzParams::default(), renorm, 1000).unwrap();
        prop_assert_eq!(w.eta()[0], 0.0);
        prop_assert!(w.lambda().iter().all(|l| l.is_finite()));
        let bound = w.max_abs_lambda() * w.dt() + 1e-9;
        for pair in w.eta().windows(2) {
            // non-decreasing target with λ₀ ≥ 0 gives non-decreasing area
            prop_assert!(pair[1] >= pair[0]);
            prop_assert!(pair[1] - pair[0] <= bound);
        }
    }

    #[test]
    fn waveform_csv_round_trip(values in prop::collection::vec(-3.0f64..3.0, 2..60), t_final in 0.1f64..20.0) {
        let w = CouplingWaveform::from_hold(t_final, values).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let back = CouplingWaveform::read_csv(buf.as_slice()).unwrap();
        for (a, b) in back.lambda().iter().zip(w.lambda()) {
            prop_assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0));
        }
        for (a, b) in back.eta().iter().zip(w.eta()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn unitary_and_noiseless_open_runs_agree(values in prop::collection::vec(-2.0f64..2.0, 2..40)) {
        let w = CouplingWaveform::from_hold(3.0, values).unwrap();
        let closed = evolve_schrodinger(&w).unwrap();
        let open = evolve_lindblad(&w, ChannelSpec::none()).unwrap();
        for k in 0..closed.len() {
            let diff = closed.states().density(k).matrix().max_abs_diff(open.states().density(k).matrix());
            prop_assert!(diff <= 1e-6);
        }
        let exact = evolve_closed_form(w.final_eta());
        let psi = closed.final_density();
        prop_assert!(psi.matrix().max_abs_diff(&exact.projector()) <= 1e-9);
    }

    #[test]
    fn noisy_runs_keep_measures_in_range(values in prop::collection::vec(-2.0f64..2.0, 2..30), gamma in 0.0f64..1.0, ad in any::<bool>()) {
        let w = CouplingWaveform::from_hold(3.0, values).unwrap();
        let channel = if ad { ChannelSpec::amplitude_damping(gamma) } else { ChannelSpec::phase_damping(gamma) }.unwrap();
        let r = evolve_lindblad(&w, channel).unwrap();
        for m in r.measures() {
            for v in [m.entropy, m.linear_entropy, m.concurrence, m.eof] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}

#[test]
fn synthesis_is_bit_reproducible() {
    let traj = TargetTrajectory::triangle_wave(1.0, 10.0).unwrap();
    let a = synthesize(&traj, AnsatzParams::new(DEFAULT_Q).unwrap(), RenormalizationParams::default(), 5000).unwrap();
    let b = synthesize(&traj, AnsatzParams::new(DEFAULT_Q).unwrap(), RenormalizationParams::default(), 5000).unwrap();
    assert_eq!(a, b);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    a.write_json(&mut x).unwrap();
    b.write_json(&mut y).unwrap();
    assert_eq!(x, y);
}

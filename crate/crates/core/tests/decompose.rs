mod common;

use gkc_core::decompose::{decompose_mct, decompose_mcz, is_lowered, lower_circuit, lower_circuit_to, Basis, Lowered};
use gkc_core::sim::{distance_up_to_global_phase, phase_pattern, run, unitary_of, Initial};
use gkc_core::{build_grover, build_oracle, Circuit, Control, Gate, Graph, Instance, OracleMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn as_circuit(width: usize, l: &Lowered) -> Circuit {
    let mut c = Circuit::new(width);
    for g in &l.gates {
        c.append(g.clone()).unwrap();
    }
    c.add_global_phase(l.global_phase);
    c
}

fn controls_from_mask(q: usize, neg_mask: u32) -> Vec<Control> {
    (0..q).map(|i| if neg_mask >> i & 1 == 1 { Control::neg(i) } else { Control::pos(i) }).collect()
}

#[test]
fn trivial_control_counts() {
    assert_eq!(decompose_mct(&[], 0).gates, vec![Gate::x(0)]);
    assert_eq!(decompose_mct(&[Control::pos(0)], 1).gates, vec![Gate::cx(0, 1)]);
}

#[test]
fn mct_matches_direct_matrix_up_to_six_controls() {
    for q in 0..=6usize {
        let controls: Vec<Control> = (0..q).map(Control::pos).collect();
        let l = decompose_mct(&controls, q);
        let u = unitary_of(&as_circuit(q + 1, &l)).unwrap();
        let want = common::mct_matrix(q + 1, &controls, q);
        let err = distance_up_to_global_phase(&common::flat(&want), &common::flat(&u));
        assert!(err < 1e-9, "q={q}: deviation {err}");
        // The recorded global phase makes it exact as well.
        assert!(common::max_abs_diff(&common::flat(&want), &common::flat(&u)) < 1e-9, "q={q}");
    }
}

#[test]
fn negative_control_toffoli_truth_table() {
    let controls = [Control::neg(0), Control::pos(1)];
    let l = decompose_mct(&controls, 2);
    assert_eq!(l.gates.first(), Some(&Gate::x(0)));
    assert_eq!(l.gates.last(), Some(&Gate::x(0)));
    let c = as_circuit(3, &l);
    for input in 0..8usize {
        let expected = if input & 1 == 0 && input & 2 != 0 { input ^ 4 } else { input };
        let out = run(&c, Initial::Basis(input)).unwrap();
        assert!((out.amplitude(expected).norm() - 1.0).abs() < 1e-9, "row {input:03b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_polarity_mct_and_mcz(q in 0usize..=5, neg_mask in any::<u32>(), cx_basis in any::<bool>()) {
        let controls = controls_from_mask(q, neg_mask);
        let basis = if cx_basis { Basis::Cx } else { Basis::Native };
        for z in [false, true] {
            let gate = if z { Gate::mcz(controls.clone(), q) } else { Gate::mct(controls.clone(), q) };
            let l = gkc_core::decompose::lower_gate(&gate, basis);
            prop_assert!(l.gates.iter().all(|g| is_lowered(g, basis)));
            let mut direct = Circuit::new(q + 1);
            direct.append(gate).unwrap();
            let want = unitary_of(&direct).unwrap();
            let got = unitary_of(&as_circuit(q + 1, &l)).unwrap();
            prop_assert!(common::max_abs_diff(&common::flat(&want), &common::flat(&got)) < 1e-9);
        }
    }

    #[test]
    fn lowering_is_idempotent(seed in any::<u64>(), width in 1usize..=6) {
        let c = common::random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), width, 20);
        for basis in [Basis::Native, Basis::Cx] {
            let once = lower_circuit_to(&c, basis);
            prop_assert_eq!(lower_circuit_to(&once, basis), once);
        }
    }
}

#[test]
fn mcz_small_cases() {
    assert_eq!(decompose_mcz(&[], 1).gates, vec![Gate::z(1)]);
    assert_eq!(decompose_mcz(&[Control::pos(0)], 1).gates, vec![Gate::cz(0, 1)]);
}

#[test]
fn elementary_circuit_is_fixed() {
    let c = common::random_lowered_circuit(&mut ChaCha8Rng::seed_from_u64(3), 5, 40);
    assert_eq!(lower_circuit(&c), c);
}

#[test]
fn ladder_size_grows_exponentially() {
    let counts: Vec<usize> =
        (2..=6).map(|q| decompose_mct(&(0..q).map(Control::pos).collect::<Vec<_>>(), q).gates.len()).collect();
    for w in counts.windows(2) {
        assert!(w[1] >= 2 * w[0]);
    }
}

#[test]
fn lowered_k3_oracle_keeps_phase_pattern() {
    let inst = Instance::new(Graph::complete(3).unwrap(), 3).unwrap();
    for mode in [OracleMode::Strict, OracleMode::Paper] {
        let oracle = build_oracle(&inst, mode);
        let lowered = lower_circuit(&oracle.circuit);
        assert!(lowered.gates().iter().all(|g| is_lowered(g, Basis::Native)));
        assert_eq!(
            phase_pattern(&lowered, oracle.layout()).unwrap(),
            phase_pattern(&oracle.circuit, oracle.layout()).unwrap()
        );
    }
}

#[test]
fn lowered_pipeline_circuits_agree_with_unlowered() {
    let cases = [
        (Graph::complete(3).unwrap(), 3, OracleMode::Paper),
        (Graph::complete(3).unwrap(), 4, OracleMode::Strict),
        (Graph::path(3).unwrap(), 2, OracleMode::Strict),
        (Graph::path(4).unwrap(), 2, OracleMode::Paper),
    ];
    for (g, k, mode) in cases {
        let job = build_grover(&Instance::new(g, k).unwrap(), mode, None).unwrap();
        let a = run(&job.circuit, Initial::Declared).unwrap();
        for basis in [Basis::Native, Basis::Cx] {
            let b = run(&lower_circuit_to(&job.circuit, basis), Initial::Declared).unwrap();
            let err = distance_up_to_global_phase(a.amplitudes(), b.amplitudes());
            assert!(err < 1e-9, "{basis:?}: deviation {err}");
        }
    }
}

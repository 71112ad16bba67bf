mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use gkc_core::sim::{self, monomial_image, run, unitary_of, Initial};
use gkc_core::{Circuit, CircuitError, Control, Gate, Statevector};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn inverse_is_an_involution(seed in any::<u64>(), width in 1usize..=6, len in 0usize..40) {
        let c = common::random_circuit(&mut rng(seed), width, len);
        prop_assert_eq!(c.inverse().inverse(), c);
    }

    #[test]
    fn compose_adds_gate_counts(seed in any::<u64>(), width in 1usize..=6, a in 0usize..30, b in 0usize..30) {
        let mut r = rng(seed);
        let x = common::random_circuit(&mut r, width, a);
        let y = common::random_circuit(&mut r, width, b);
        let mut xy = x.clone();
        xy.compose(&y).unwrap();
        prop_assert_eq!(xy.stats().gate_count, x.stats().gate_count + y.stats().gate_count);
    }

    #[test]
    fn every_gate_preserves_norm(seed in any::<u64>(), width in 1usize..=6) {
        let mut r = rng(seed);
        let mut state = common::random_state(&mut r, width);
        for g in common::random_circuit(&mut r, width, 30).gates() {
            state.apply(g);
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monomial_shortcut_matches_dense(seed in any::<u64>(), width in 2usize..=6, input in any::<usize>()) {
        let mut r = rng(seed);
        let mut c = Circuit::new(width);
        for g in common::random_circuit(&mut r, width, 40).gates() {
            if sim::is_monomial(g) {
                c.append(g.clone()).unwrap();
            }
        }
        let input = input % (1 << width);
        let (dst, phase) = monomial_image(&c, input);
        let dense = run(&c, Initial::Basis(input)).unwrap();
        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << width];
        expected[dst] = phase;
        prop_assert!(common::max_abs_diff(dense.amplitudes(), &expected) < 1e-12);
    }
}

#[test]
fn append_examples() {
    let mut c = Circuit::new(2);
    c.append(Gate::cx(0, 1)).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.append(Gate::x(5)).unwrap_err(), CircuitError::IndexOutOfRange { qubit: 5, width: 2 });
    assert_eq!(
        c.append(Gate::mct([Control::pos(0), Control::pos(1)], 0)).unwrap_err(),
        CircuitError::OverlappingOperands(0)
    );
}

#[test]
fn inverse_examples() {
    let mut c = Circuit::new(2);
    c.append(Gate::h(0)).unwrap().append(Gate::cx(0, 1)).unwrap();
    assert_eq!(c.inverse().gates(), &[Gate::cx(0, 1), Gate::h(0)]);
    let mut r = Circuit::new(1);
    r.append(Gate::rx(0, PI / 2.0)).unwrap();
    assert_eq!(r.inverse().gates(), &[Gate::rx(0, -PI / 2.0)]);
}

#[test]
fn stats_examples() {
    let mut c = Circuit::new(2);
    c.append(Gate::h(0)).unwrap().append(Gate::h(1)).unwrap().append(Gate::cx(0, 1)).unwrap();
    let s = c.stats();
    assert_eq!((s.gate_count, s.depth, s.two_qubit_count), (3, 2, 1));
    assert_eq!(Circuit::new(3).stats(), Default::default());
}

#[test]
fn circuit_followed_by_inverse_is_identity() {
    let mut r = rng(7);
    for _ in 0..100 {
        let c = common::random_circuit(&mut r, 4, 25);
        let mut round = c.clone();
        round.compose(&c.inverse()).unwrap();
        let u = unitary_of(&round).unwrap();
        let err = (&u - &Array2::<Complex64>::eye(16)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "deviation {err}");
    }
}

#[test]
fn random_circuits_are_unitary() {
    let mut r = rng(11);
    for width in 1..=8 {
        let c = common::random_circuit(&mut r, width, 40);
        let u = unitary_of(&c).unwrap();
        let product = u.dot(&u.t().mapv(|z| z.conj()));
        let dim = 1 << width;
        let err = (&product - &Array2::<Complex64>::eye(dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "width {width}: deviation {err}");
    }
}

#[test]
fn simulator_examples() {
    let mut h = Circuit::new(1);
    h.append(Gate::h(0)).unwrap();
    let s = run(&h, Initial::Declared).unwrap();
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    assert!(common::max_abs_diff(s.amplitudes(), &[amp, amp]) < 1e-15);

    let mut bell = Circuit::new(2);
    bell.append(Gate::x(0)).unwrap().append(Gate::cx(0, 1)).unwrap();
    let s = run(&bell, Initial::Declared).unwrap();
    assert!((s.amplitude(3).re - 1.0).abs() < 1e-15);

    let mut x = Circuit::new(1);
    x.append(Gate::x(0)).unwrap();
    let u = unitary_of(&x).unwrap();
    assert_eq!(u[[0, 1]], Complex64::new(1.0, 0.0));
    assert_eq!(u[[1, 0]], Complex64::new(1.0, 0.0));
    assert_eq!(u[[0, 0]], Complex64::new(0.0, 0.0));
    assert_eq!(unitary_of(&Circuit::new(3)).unwrap(), Array2::<Complex64>::eye(8));
}

#[test]
fn marginal_examples() {
    let mut uniform = Circuit::new(2);
    uniform.append(Gate::h(0)).unwrap().append(Gate::h(1)).unwrap();
    let p = run(&uniform, Initial::Declared).unwrap().probabilities(&[0]);
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);

    let basis = Statevector::basis(3, 0b101);
    let p = basis.probabilities(&[0, 2]);
    assert_eq!(p, vec![0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn ceiling_is_enforced() {
    let c = Circuit::new(5);
    assert_eq!(
        sim::run_with_ceiling(&c, Initial::Declared, 4).unwrap_err(),
        sim::SimError::TooManyQubits { requested: 5, ceiling: 4 }
    );
}

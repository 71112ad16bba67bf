//! Dense statevector simulation.
//!
//! Amplitude index bit `q` is the value of qubit `q`. Multi-controlled gates
//! and negative controls are applied directly, so the simulator never depends
//! on the lowering pass it is used to check.
//!
//! Bitstrings over a qubit list `qs` are written with `qs[0]` as the first
//! character.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, InitialState, QubitLayout};

pub const DEFAULT_QUBIT_CEILING: usize = 24;
pub const UNITARY_MAX_QUBITS: usize = 12;
pub const CEILING_ENV: &str = "GKC_QUBIT_CEILING";

const ANCILLA_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{requested} qubits exceed the simulator ceiling of {ceiling}")]
    TooManyQubits { requested: usize, ceiling: usize },
    #[error("oracle disturbed ancilla or data qubits for basis input {basis}")]
    AncillaLeak { basis: String },
    #[error("initial state has {got} qubits, circuit has {expected}")]
    WidthMismatch { got: usize, expected: usize },
}

/// The simulator ceiling, overridable through `GKC_QUBIT_CEILING`.
pub fn qubit_ceiling() -> usize {
    std::env::var(CEILING_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_QUBIT_CEILING)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        Self { num_qubits: amps.len().trailing_zeros() as usize, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) {
        let ctrl_mask = gate.controls.iter().fold(0usize, |m, c| m | 1 << c.qubit);
        let ctrl_value = gate.controls.iter().filter(|c| c.fires_on()).fold(0usize, |m, c| m | 1 << c.qubit);
        match gate.kind {
            GateKind::Swap => self.apply_swap(gate.targets[0], gate.targets[1]),
            GateKind::X | GateKind::CX | GateKind::Mct => self.apply_x(ctrl_mask, ctrl_value, gate.targets[0]),
            GateKind::Z | GateKind::CZ | GateKind::Mcz => {
                let t = gate.targets[0];
                self.apply_phase(ctrl_mask | 1 << t, ctrl_value | 1 << t, Complex64::new(-1.0, 0.0));
            }
            GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg => {
                let phase = match gate.kind {
                    GateKind::S => Complex64::new(0.0, 1.0),
                    GateKind::Sdg => Complex64::new(0.0, -1.0),
                    GateKind::T => Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                    _ => Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
                };
                let t = gate.targets[0];
                self.apply_phase(1 << t, 1 << t, phase);
            }
            GateKind::H | GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::CRx => {
                let m = single_qubit_matrix(gate.kind, gate.angle.unwrap_or(0.0));
                self.apply_matrix(ctrl_mask, ctrl_value, gate.targets[0], m);
            }
        }
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn apply_global_phase(&mut self, phase: f64) {
        if phase != 0.0 {
            let f = Complex64::from_polar(1.0, phase);
            self.amps.iter_mut().for_each(|a| *a *= f);
        }
    }

    fn apply_x(&mut self, ctrl_mask: usize, ctrl_value: usize, target: usize) {
        let tbit = 1 << target;
        for_each_index(self.num_qubits, ctrl_mask | tbit, ctrl_value, |i| self.amps.swap(i, i | tbit));
    }

    fn apply_phase(&mut self, mask: usize, value: usize, phase: Complex64) {
        for_each_index(self.num_qubits, mask, value, |i| self.amps[i] *= phase);
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1 << a, 1 << b);
        for_each_index(self.num_qubits, ba | bb, ba, |i| self.amps.swap(i, i ^ ba ^ bb));
    }

    fn apply_matrix(&mut self, ctrl_mask: usize, ctrl_value: usize, target: usize, m: [[Complex64; 2]; 2]) {
        let tbit = 1 << target;
        for_each_index(self.num_qubits, ctrl_mask | tbit, ctrl_value, |i| {
            let (a0, a1) = (self.amps[i], self.amps[i | tbit]);
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
        });
    }

    /// Born-rule marginal over `qubits`; entry `j` is the probability of the
    /// bitstring `format!("{j:0w$b}")` with `qubits[0]` as its first character.
    pub fn probabilities(&self, qubits: &[usize]) -> Vec<f64> {
        let w = qubits.len();
        let mut dist = vec![0.0; 1 << w];
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p != 0.0 {
                dist[extract_bits(idx, qubits)] += p;
            }
        }
        dist
    }
}

/// Calls `f(i)` for every index `i` with `i & mask == value`, in increasing
/// order, by inserting the fixed bits into a dense counter.
fn for_each_index(num_qubits: usize, mask: usize, value: usize, mut f: impl FnMut(usize)) {
    let fixed: Vec<usize> = (0..num_qubits).filter(|b| mask >> b & 1 == 1).collect();
    let free = num_qubits - fixed.len();
    for j in 0..1usize << free {
        let mut i = j;
        for &b in &fixed {
            let low = i & ((1 << b) - 1);
            i = (i >> b) << (b + 1) | low;
        }
        f(i | value);
    }
}

fn single_qubit_matrix(kind: GateKind, theta: f64) -> [[Complex64; 2]; 2] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match kind {
        GateKind::H => {
            [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]]
        }
        GateKind::Rx | GateKind::CRx => [[c(cos, 0.0), c(0.0, -sin)], [c(0.0, -sin), c(cos, 0.0)]],
        GateKind::Ry => [[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]],
        GateKind::Rz => [[c(cos, -sin), c(0.0, 0.0)], [c(0.0, 0.0), c(cos, sin)]],
        _ => unreachable!("{kind} is not a dense single-qubit kind"),
    }
}

/// Packs the bits of `index` at positions `qubits` into an integer whose most
/// significant bit is `qubits[0]`.
pub fn extract_bits(index: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| acc << 1 | (index >> q & 1))
}

/// Inverse of [`extract_bits`]: scatters `value` onto `qubits`.
pub fn deposit_bits(value: usize, qubits: &[usize]) -> usize {
    let w = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (i, &q)| acc | (value >> (w - 1 - i) & 1) << q)
}

pub fn bitstring(value: usize, width: usize) -> String {
    if width == 0 {
        return String::new();
    }
    format!("{value:0width$b}")
}

/// Register index encoding the circuit's declared initial state.
pub fn initial_index(circuit: &Circuit) -> usize {
    circuit
        .initial_state()
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == InitialState::One)
        .fold(0, |acc, (q, _)| acc | 1 << q)
}

#[derive(Debug, Clone)]
pub enum Initial {
    /// The circuit's declared per-qubit initial state.
    Declared,
    Basis(usize),
    State(Statevector),
}

/// Runs `circuit` from `initial` under the configured ceiling.
pub fn run(circuit: &Circuit, initial: Initial) -> Result<Statevector, SimError> {
    run_with_ceiling(circuit, initial, qubit_ceiling())
}

pub fn run_with_ceiling(circuit: &Circuit, initial: Initial, ceiling: usize) -> Result<Statevector, SimError> {
    let n = circuit.num_qubits();
    if n > ceiling {
        return Err(SimError::TooManyQubits { requested: n, ceiling });
    }
    let mut state = match initial {
        Initial::Declared => Statevector::basis(n, initial_index(circuit)),
        Initial::Basis(i) => Statevector::basis(n, i),
        Initial::State(s) if s.num_qubits() != n => {
            return Err(SimError::WidthMismatch { got: s.num_qubits(), expected: n })
        }
        Initial::State(s) => s,
    };
    for g in circuit.gates() {
        state.apply(g);
    }
    state.apply_global_phase(circuit.global_phase());
    Ok(state)
}

/// Dense unitary, column `j` being the image of basis state `j`.
pub fn unitary_of(circuit: &Circuit) -> Result<Array2<Complex64>, SimError> {
    let n = circuit.num_qubits();
    if n > UNITARY_MAX_QUBITS {
        return Err(SimError::TooManyQubits { requested: n, ceiling: UNITARY_MAX_QUBITS });
    }
    let dim = 1 << n;
    let columns: Vec<Statevector> =
        (0..dim).into_par_iter().map(|j| run_with_ceiling(circuit, Initial::Basis(j), n)).collect::<Result<_, _>>()?;
    let mut u = Array2::zeros((dim, dim));
    for (j, col) in columns.iter().enumerate() {
        for (i, a) in col.amplitudes().iter().enumerate() {
            u[[i, j]] = *a;
        }
    }
    Ok(u)
}

/// Largest entrywise deviation between `a` and `b` after aligning `b`'s
/// global phase at `a`'s largest-magnitude entry.
pub fn distance_up_to_global_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let pivot = (0..a.len()).max_by(|&i, &j| a[i].norm_sqr().total_cmp(&a[j].norm_sqr())).unwrap_or(0);
    let phase = if b[pivot].norm() > 1e-15 {
        let r = a[pivot] / b[pivot];
        r / r.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter().zip(b).map(|(x, y)| (x - y * phase).norm()).fold(0.0, f64::max)
}

/// Data bitstrings whose phase the oracle flips.
///
/// Each data basis state is prepared alongside the declared ancilla values
/// and an output qubit in |−⟩; after the oracle the register must be back in
/// that state up to a sign, or the oracle is reported as leaking.
pub fn phase_pattern(oracle: &Circuit, layout: &QubitLayout) -> Result<BTreeSet<String>, SimError> {
    let n = oracle.num_qubits();
    let ceiling = qubit_ceiling();
    if n > ceiling {
        return Err(SimError::TooManyQubits { requested: n, ceiling });
    }
    let data: Vec<usize> = layout.data.clone().collect();
    let m = data.len();
    let out_bit = 1usize << layout.output;
    let base = initial_index(oracle) & !out_bit;
    let monomial = oracle.gates().iter().all(is_monomial);
    let results: Vec<Result<Option<String>, SimError>> = (0..1usize << m)
        .into_par_iter()
        .map(|x| {
            let idx0 = base | deposit_bits(x, &data);
            let idx1 = idx0 | out_bit;
            let (a0, a1) = if monomial {
                // Each input basis state maps to a single basis state, so
                // tracking the two occupied entries is exact.
                let mut a = [Complex64::new(0.0, 0.0); 2];
                let mut stray = 0.0;
                for (src, amp) in [(idx0, FRAC_1_SQRT_2), (idx1, -FRAC_1_SQRT_2)] {
                    let (dst, phase) = monomial_image(oracle, src);
                    match dst {
                        d if d == idx0 => a[0] += phase * amp,
                        d if d == idx1 => a[1] += phase * amp,
                        _ => stray += amp * amp,
                    }
                }
                if stray > 0.0 {
                    return Err(SimError::AncillaLeak { basis: bitstring(x, m) });
                }
                (a[0], a[1])
            } else {
                let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
                amps[idx0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                amps[idx1] = Complex64::new(-FRAC_1_SQRT_2, 0.0);
                let state = run_with_ceiling(oracle, Initial::State(Statevector::from_amplitudes(amps)), n)?;
                (state.amplitude(idx0), state.amplitude(idx1))
            };
            let ratio = a0 / FRAC_1_SQRT_2;
            let leaked = (a0.norm_sqr() + a1.norm_sqr() - 1.0).abs() > ANCILLA_TOL
                || (a1 + a0).norm() > ANCILLA_TOL
                || (ratio.im.abs() > ANCILLA_TOL)
                || (ratio.re.abs() - 1.0).abs() > ANCILLA_TOL;
            if leaked {
                return Err(SimError::AncillaLeak { basis: bitstring(x, m) });
            }
            Ok((ratio.re < 0.0).then(|| bitstring(x, m)))
        })
        .collect();
    let mut flipped = BTreeSet::new();
    for r in results {
        if let Some(s) = r? {
            flipped.insert(s);
        }
    }
    Ok(flipped)
}

/// True for gates sending every basis state to a single basis state times a
/// phase.
pub fn is_monomial(gate: &Gate) -> bool {
    !matches!(gate.kind, GateKind::H | GateKind::Rx | GateKind::Ry | GateKind::CRx)
}

/// Image of basis state `index` under a circuit of monomial gates, including
/// the circuit's global phase.
pub fn monomial_image(circuit: &Circuit, index: usize) -> (usize, Complex64) {
    let mut idx = index;
    let mut phase = Complex64::from_polar(1.0, circuit.global_phase());
    for g in circuit.gates() {
        assert!(is_monomial(g), "{g} is not a monomial gate");
        if !g.controls.iter().all(|c| (idx >> c.qubit & 1 == 1) == c.fires_on()) {
            continue;
        }
        let t = g.targets[0];
        let bit = idx >> t & 1 == 1;
        match g.kind {
            GateKind::X | GateKind::CX | GateKind::Mct => idx ^= 1 << t,
            GateKind::Swap => {
                let u = g.targets[1];
                if bit != (idx >> u & 1 == 1) {
                    idx ^= 1 << t | 1 << u;
                }
            }
            GateKind::Z | GateKind::CZ | GateKind::Mcz if bit => phase = -phase,
            GateKind::S if bit => phase *= Complex64::new(0.0, 1.0),
            GateKind::Sdg if bit => phase *= Complex64::new(0.0, -1.0),
            GateKind::T if bit => phase *= Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            GateKind::Tdg if bit => phase *= Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            GateKind::Rz => {
                let half = g.angle.unwrap_or(0.0) / 2.0;
                phase *= Complex64::from_polar(1.0, if bit { half } else { -half });
            }
            _ => {}
        }
    }
    (idx, phase)
}

/// The `limit` most probable bitstrings of a distribution, most probable
/// first; ties break toward the smaller bitstring.
pub fn top_states(dist: &[f64], width: usize, limit: usize) -> Vec<(String, f64)> {
    let mut idx: Vec<usize> = (0..dist.len()).collect();
    idx.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    idx.into_iter().take(limit).map(|i| (bitstring(i, width), dist[i])).collect()
}

/// Distribution as a map from bitstring to probability, dropping entries
/// below `floor`.
pub fn distribution_map(dist: &[f64], width: usize, floor: f64) -> BTreeMap<String, f64> {
    dist.iter().enumerate().filter(|(_, p)| **p >= floor).map(|(i, p)| (bitstring(i, width), *p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Control;
    use std::f64::consts::PI;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut c = Circuit::new(1);
        c.append(Gate::h(0)).unwrap();
        let s = run(&c, Initial::Declared).unwrap();
        assert!(close(s.amplitude(0), FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitude(1), FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn x_then_cx() {
        let mut c = Circuit::new(2);
        c.append(Gate::x(0)).unwrap().append(Gate::cx(0, 1)).unwrap();
        let s = run(&c, Initial::Declared).unwrap();
        assert!(close(s.amplitude(3), 1.0, 0.0));
    }

    #[test]
    fn negative_control_mct() {
        let mut c = Circuit::new(3);
        c.append(Gate::mct([Control::neg(0), Control::pos(1)], 2)).unwrap();
        for input in 0..8usize {
            let s = run(&c, Initial::Basis(input)).unwrap();
            let fires = input & 1 == 0 && input & 2 == 2;
            let expected = if fires { input ^ 4 } else { input };
            assert!(close(s.amplitude(expected), 1.0, 0.0), "input {input}");
        }
    }

    #[test]
    fn probabilities_marginals() {
        let mut c = Circuit::new(2);
        c.append(Gate::h(0)).unwrap().append(Gate::h(1)).unwrap();
        let s = run(&c, Initial::Declared).unwrap();
        let p = s.probabilities(&[0]);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);

        // |101⟩ on qubits (0,1,2) = index 0b101.
        let s = Statevector::basis(3, 0b101);
        let p = s.probabilities(&[0, 2]);
        assert_eq!(p, vec![0.0, 0.0, 0.0, 1.0]);
        let p = s.probabilities(&[1, 0]);
        assert_eq!(p, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn unitary_of_basic() {
        let mut c = Circuit::new(1);
        c.append(Gate::x(0)).unwrap();
        let u = unitary_of(&c).unwrap();
        assert!(close(u[[0, 1]], 1.0, 0.0) && close(u[[1, 0]], 1.0, 0.0));
        assert!(close(u[[0, 0]], 0.0, 0.0));

        let u = unitary_of(&Circuit::new(3)).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert!(close(u[[i, j]], if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
        assert!(matches!(unitary_of(&Circuit::new(13)), Err(SimError::TooManyQubits { .. })));
    }

    #[test]
    fn rotation_matrices() {
        // Rx(pi) = -iX, Rz(pi) = diag(-i, i), Ry(pi) = [[0,-1],[1,0]]
        let mut c = Circuit::new(1);
        c.append(Gate::rx(0, PI)).unwrap();
        let s = run(&c, Initial::Basis(0)).unwrap();
        assert!(close(s.amplitude(1), 0.0, -1.0));
        let mut c = Circuit::new(1);
        c.append(Gate::rz(0, PI)).unwrap();
        let s = run(&c, Initial::Basis(1)).unwrap();
        assert!(close(s.amplitude(1), 0.0, 1.0));
        let mut c = Circuit::new(1);
        c.append(Gate::ry(0, PI)).unwrap();
        let s = run(&c, Initial::Basis(0)).unwrap();
        assert!(close(s.amplitude(1), 1.0, 0.0));
    }

    #[test]
    fn global_phase_is_applied() {
        let mut c = Circuit::new(1);
        c.add_global_phase(PI / 2.0);
        let s = run(&c, Initial::Basis(0)).unwrap();
        assert!(close(s.amplitude(0), 0.0, 1.0));
    }

    #[test]
    fn ceiling_is_enforced() {
        let c = Circuit::new(5);
        assert_eq!(
            run_with_ceiling(&c, Initial::Declared, 4).unwrap_err(),
            SimError::TooManyQubits { requested: 5, ceiling: 4 }
        );
    }

    #[test]
    fn bit_packing_roundtrip() {
        let qs = [4, 1, 3];
        for v in 0..8 {
            assert_eq!(extract_bits(deposit_bits(v, &qs), &qs), v);
        }
        assert_eq!(deposit_bits(0b100, &qs), 1 << 4);
        assert_eq!(bitstring(5, 4), "0101");
    }

    #[test]
    fn index_enumeration_matches_filter() {
        let mut got = Vec::new();
        for_each_index(5, 0b10110, 0b00100, |i| got.push(i));
        let want: Vec<usize> = (0..32).filter(|i| i & 0b10110 == 0b00100).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn top_states_order() {
        let top = top_states(&[0.1, 0.4, 0.4, 0.1], 2, 3);
        assert_eq!(top, vec![("01".to_string(), 0.4), ("10".to_string(), 0.4), ("00".to_string(), 0.1)]);
    }
}

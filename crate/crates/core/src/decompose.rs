//! Lowering of multi-controlled gates to one- and two-qubit gates.
//!
//! `C^q X` is realized without ancillas as a multi-controlled `Rx(pi)`: a
//! Gray-code walk over every non-empty subset `S` of the controls parks the
//! parity of `S` on its highest control and applies `CRx(±pi/2^(q-1))` from
//! there, the sign alternating with `|S|`. Summed over all subsets the target
//! rotates by `pi` exactly when every control is set. `Rx(pi)` is `-iX`, so
//! a matching `Rz(±pi/2^q)` on the parity qubit at each step cancels that
//! relative phase; the residual global phase is recorded on the circuit.
//!
//! `C^q Z` is the same ladder conjugated by `H` on the target.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::circuit::{Circuit, Control, Gate, GateKind, Polarity};

/// Target gate alphabet of the lowering pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Basis {
    /// One-qubit gates plus `cx`, `cz`, `crx` and `swap`.
    #[default]
    Native,
    /// One-qubit gates plus `cx` only.
    Cx,
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut names: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        names.sort_unstable();
        match names.as_slice() {
            ["native"] | ["table2"] => Ok(Basis::Native),
            ["cx"] | ["cx", "u3"] => Ok(Basis::Cx),
            _ => Err(format!("unsupported basis {s:?} (expected native or cx,u3)")),
        }
    }
}

/// A lowered gate sequence. `global_phase` is the phase to add so that the
/// sequence reproduces the original gate exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Lowered {
    pub gates: Vec<Gate>,
    pub global_phase: f64,
}

/// Wraps `body` in X gates on every negative control and returns the
/// positive-polarity control list.
fn conjugate_negatives(controls: &[Control], body: impl FnOnce(&[usize]) -> Lowered) -> Lowered {
    let flips: Vec<Gate> = controls.iter().filter(|c| !c.fires_on()).map(|c| Gate::x(c.qubit)).collect();
    let qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    let inner = body(&qubits);
    let mut gates = flips.clone();
    gates.extend(inner.gates);
    gates.extend(flips);
    Lowered { gates, global_phase: inner.global_phase }
}

/// Multi-controlled `X` on positive controls, expressed through the
/// controlled-root ladder. Exact up to the returned global phase.
fn mc_x_ladder(controls: &[usize], target: usize) -> Lowered {
    let q = controls.len();
    debug_assert!(q >= 2);
    let rot = PI / (1u64 << (q - 1)) as f64;
    let phase = PI / (1u64 << q) as f64;
    let mut gates = Vec::new();
    // mask[i]: subset of original control values currently XORed onto control i.
    let mut mask: Vec<usize> = (0..q).map(|i| 1 << i).collect();
    for k in 1usize..1 << q {
        let gray = k ^ (k >> 1);
        let top = (usize::BITS - 1 - k.leading_zeros()) as usize;
        let diff = mask[top] ^ gray;
        for i in (0..q).filter(|&i| diff >> i & 1 == 1) {
            gates.push(Gate::cx(controls[i], controls[top]));
        }
        mask[top] = gray;
        let sign = if gray.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        gates.push(Gate::crx(controls[top], target, sign * rot));
        gates.push(Gate::rz(controls[top], sign * phase));
    }
    // Every control holds its own value again once the walk finishes.
    debug_assert!(mask.iter().enumerate().all(|(i, m)| *m == 1 << i));
    // Each Rz(l) carries a stray e^{-il/2}; the signed angles sum to `phase`.
    Lowered { gates, global_phase: phase / 2.0 }
}

/// Lowers `C^q X`, honoring control polarities.
pub fn decompose_mct(controls: &[Control], target: usize) -> Lowered {
    match controls {
        [] => Lowered { gates: vec![Gate::x(target)], global_phase: 0.0 },
        [c] if c.fires_on() => Lowered { gates: vec![Gate::cx(c.qubit, target)], global_phase: 0.0 },
        _ => conjugate_negatives(controls, |qs| match qs {
            [c] => Lowered { gates: vec![Gate::cx(*c, target)], global_phase: 0.0 },
            _ => mc_x_ladder(qs, target),
        }),
    }
}

/// Lowers `C^q Z`, honoring control polarities.
pub fn decompose_mcz(controls: &[Control], target: usize) -> Lowered {
    match controls {
        [] => Lowered { gates: vec![Gate::z(target)], global_phase: 0.0 },
        [c] if c.fires_on() => Lowered { gates: vec![Gate::cz(c.qubit, target)], global_phase: 0.0 },
        _ => conjugate_negatives(controls, |qs| match qs {
            [c] => Lowered { gates: vec![Gate::cz(*c, target)], global_phase: 0.0 },
            _ => {
                let inner = mc_x_ladder(qs, target);
                let mut gates = vec![Gate::h(target)];
                gates.extend(inner.gates);
                gates.push(Gate::h(target));
                Lowered { gates, global_phase: inner.global_phase }
            }
        }),
    }
}

/// Rewrites one gate into `basis`. Already-elementary gates come back
/// unchanged.
pub fn lower_gate(gate: &Gate, basis: Basis) -> Lowered {
    let native = match gate.kind {
        GateKind::Mct => decompose_mct(&gate.controls, gate.targets[0]),
        GateKind::Mcz => decompose_mcz(&gate.controls, gate.targets[0]),
        _ => Lowered { gates: vec![gate.clone()], global_phase: 0.0 },
    };
    if basis == Basis::Native {
        return native;
    }
    let mut gates = Vec::new();
    for g in native.gates {
        match g.kind {
            GateKind::CRx => {
                let (c, t) = (g.controls[0].qubit, g.targets[0]);
                let theta = g.angle.unwrap();
                gates.extend([
                    Gate::h(t),
                    Gate::rz(t, theta / 2.0),
                    Gate::cx(c, t),
                    Gate::rz(t, -theta / 2.0),
                    Gate::cx(c, t),
                    Gate::h(t),
                ]);
            }
            GateKind::CZ => {
                let (c, t) = (g.controls[0].qubit, g.targets[0]);
                gates.extend([Gate::h(t), Gate::cx(c, t), Gate::h(t)]);
            }
            GateKind::Swap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                gates.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
            }
            _ => gates.push(g),
        }
    }
    Lowered { gates, global_phase: native.global_phase }
}

/// Number of CX gates the ladder spends re-parking parities.
fn ladder_cx_count(q: usize) -> usize {
    let mut mask: Vec<usize> = (0..q).map(|i| 1 << i).collect();
    let mut count = 0;
    for k in 1usize..1 << q {
        let gray = k ^ (k >> 1);
        let top = (usize::BITS - 1 - k.leading_zeros()) as usize;
        count += (mask[top] ^ gray).count_ones() as usize;
        mask[top] = gray;
    }
    count
}

/// Length of `lower_gate(gate, basis).gates` without building it. Useful for
/// gates whose lowering would be too large to materialize.
pub fn lowered_gate_count(gate: &Gate, basis: Basis) -> usize {
    let expand = |kind: GateKind| match (basis, kind) {
        (Basis::Cx, GateKind::CRx) => 6,
        (Basis::Cx, GateKind::CZ) => 3,
        (Basis::Cx, GateKind::Swap) => 3,
        _ => 1,
    };
    match gate.kind {
        GateKind::Mct | GateKind::Mcz => {
            let q = gate.controls.len();
            let flips = 2 * gate.controls.iter().filter(|c| !c.fires_on()).count();
            let z = gate.kind == GateKind::Mcz;
            let core = match q {
                0 => 1,
                1 => {
                    if z {
                        expand(GateKind::CZ)
                    } else {
                        1
                    }
                }
                _ => {
                    let steps = (1usize << q) - 1;
                    ladder_cx_count(q) + steps * (expand(GateKind::CRx) + 1) + if z { 2 } else { 0 }
                }
            };
            core + flips
        }
        kind => expand(kind),
    }
}

/// True if `gate` is already in the target alphabet.
pub fn is_lowered(gate: &Gate, basis: Basis) -> bool {
    let native = match gate.kind {
        GateKind::Mct | GateKind::Mcz => false,
        _ => gate.controls.iter().all(|c| c.polarity == Polarity::Positive),
    };
    native && (basis == Basis::Native || !matches!(gate.kind, GateKind::CRx | GateKind::CZ | GateKind::Swap))
}

/// Lowers every gate of `circuit` into the native alphabet.
pub fn lower_circuit(circuit: &Circuit) -> Circuit {
    lower_circuit_to(circuit, Basis::Native)
}

pub fn lower_circuit_to(circuit: &Circuit, basis: Basis) -> Circuit {
    let mut out = circuit.empty_like();
    out.add_global_phase(circuit.global_phase());
    for g in circuit.gates() {
        let lowered = lower_gate(g, basis);
        for lg in lowered.gates {
            out.push(lg);
        }
        out.add_global_phase(lowered.global_phase);
    }
    out
}

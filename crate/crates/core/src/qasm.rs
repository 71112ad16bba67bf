//! OpenQASM 2.0 emission.

use std::fmt::Write;

use crate::circuit::{format_angle, Circuit, CircuitError, Gate, GateKind, InitialState, QubitRole};

/// Whether `gate` can be written as a single OpenQASM 2.0 statement.
pub fn is_emittable(gate: &Gate) -> bool {
    match gate.kind {
        GateKind::Mct | GateKind::Mcz => gate.controls.len() <= 1 && !gate.has_negative_control(),
        _ => !gate.has_negative_control(),
    }
}

/// The statement for a single gate, without a trailing newline.
pub fn gate_statement(gate: &Gate) -> Result<String, CircuitError> {
    if !is_emittable(gate) {
        return Err(CircuitError::UnloweredGate(gate.to_string()));
    }
    let name = match (gate.kind, gate.controls.len()) {
        (GateKind::Mct, 0) => "x",
        (GateKind::Mct, _) => "cx",
        (GateKind::Mcz, 0) => "z",
        (GateKind::Mcz, _) => "cz",
        (kind, _) => kind.qasm_name(),
    };
    let mut s = String::from(name);
    if let Some(a) = gate.angle {
        write!(s, "({})", format_angle(a)).unwrap();
    }
    let operands: Vec<String> = gate.qubits().map(|q| format!("q[{q}]")).collect();
    write!(s, " {};", operands.join(",")).unwrap();
    Ok(s)
}

/// Emits `circuit`, measuring its data qubits in index order.
pub fn emit_qasm(circuit: &Circuit) -> Result<String, CircuitError> {
    let measured = circuit.qubits_with_role(QubitRole::Data);
    emit_qasm_measuring(circuit, &measured, &[])
}

/// Emits `circuit`, measuring `measured[i]` into `c[i]` and appending
/// `trailer` lines as comments.
pub fn emit_qasm_measuring(circuit: &Circuit, measured: &[usize], trailer: &[String]) -> Result<String, CircuitError> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if circuit.global_phase() != 0.0 {
        writeln!(out, "// global_phase: {}", format_angle(circuit.global_phase())).unwrap();
    }
    writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    writeln!(out, "creg c[{}];", measured.len().max(1)).unwrap();
    for (q, init) in circuit.initial_state().iter().enumerate() {
        if *init == InitialState::One {
            writeln!(out, "x q[{q}];").unwrap();
        }
    }
    for g in circuit.gates() {
        out.push_str(&gate_statement(g)?);
        out.push('\n');
    }
    for (c, q) in measured.iter().enumerate() {
        writeln!(out, "measure q[{q}] -> c[{c}];").unwrap();
    }
    for line in trailer {
        writeln!(out, "// {line}").unwrap();
    }
    Ok(out)
}

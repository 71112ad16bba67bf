//! Circuit intermediate representation shared by every pass.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {width}-qubit register")]
    IndexOutOfRange { qubit: usize, width: usize },
    #[error("qubit {0} is used more than once by the same gate")]
    OverlappingOperands(usize),
    #[error("malformed {kind} gate: {reason}")]
    MalformedGate { kind: GateKind, reason: &'static str },
    #[error("gate {0} must be lowered before emission")]
    UnloweredGate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GateKind {
    X,
    H,
    Z,
    S,
    T,
    Sdg,
    Tdg,
    Rx,
    Ry,
    Rz,
    CX,
    CZ,
    CRx,
    Swap,
    Mct,
    Mcz,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::CRx)
    }

    pub fn is_single_qubit(self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::H
                | GateKind::Z
                | GateKind::S
                | GateKind::T
                | GateKind::Sdg
                | GateKind::Tdg
                | GateKind::Rx
                | GateKind::Ry
                | GateKind::Rz
        )
    }

    /// OpenQASM 2.0 spelling for the fixed-arity kinds.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Sdg => "sdg",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::CRx => "crx",
            GateKind::Swap => "swap",
            GateKind::Mct => "mct",
            GateKind::Mcz => "mcz",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.qasm_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarity {
    /// Fires on |1⟩.
    Positive,
    /// Fires on |0⟩.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Positive }
    }

    pub fn neg(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Negative }
    }

    pub fn fires_on(&self) -> bool {
        self.polarity == Polarity::Positive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
    pub targets: Vec<usize>,
    pub angle: Option<f64>,
}

impl Gate {
    fn single(kind: GateKind, target: usize) -> Self {
        Self { kind, controls: vec![], targets: vec![target], angle: None }
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }
    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q)
    }
    pub fn t(q: usize) -> Self {
        Self::single(GateKind::T, q)
    }
    pub fn sdg(q: usize) -> Self {
        Self::single(GateKind::Sdg, q)
    }
    pub fn tdg(q: usize) -> Self {
        Self::single(GateKind::Tdg, q)
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Self { angle: Some(theta), ..Self::single(GateKind::Rx, q) }
    }
    pub fn ry(q: usize, theta: f64) -> Self {
        Self { angle: Some(theta), ..Self::single(GateKind::Ry, q) }
    }
    pub fn rz(q: usize, theta: f64) -> Self {
        Self { angle: Some(theta), ..Self::single(GateKind::Rz, q) }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self { kind: GateKind::CX, controls: vec![Control::pos(control)], targets: vec![target], angle: None }
    }
    pub fn cz(control: usize, target: usize) -> Self {
        Self { kind: GateKind::CZ, controls: vec![Control::pos(control)], targets: vec![target], angle: None }
    }
    pub fn crx(control: usize, target: usize, theta: f64) -> Self {
        Self { kind: GateKind::CRx, controls: vec![Control::pos(control)], targets: vec![target], angle: Some(theta) }
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self { kind: GateKind::Swap, controls: vec![], targets: vec![a, b], angle: None }
    }

    pub fn mct(controls: impl IntoIterator<Item = Control>, target: usize) -> Self {
        Self { kind: GateKind::Mct, controls: controls.into_iter().collect(), targets: vec![target], angle: None }
    }
    pub fn mcz(controls: impl IntoIterator<Item = Control>, target: usize) -> Self {
        Self { kind: GateKind::Mcz, controls: controls.into_iter().collect(), targets: vec![target], angle: None }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().map(|c| c.qubit).chain(self.targets.iter().copied())
    }

    pub fn arity(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    pub fn has_negative_control(&self) -> bool {
        self.controls.iter().any(|c| !c.fires_on())
    }

    /// Checks arity, operand disjointness and register bounds.
    pub fn validate(&self, width: usize) -> Result<(), CircuitError> {
        let malformed = |reason| Err(CircuitError::MalformedGate { kind: self.kind, reason });
        let (want_controls, want_targets) = match self.kind {
            k if k.is_single_qubit() => (Some(0), 1),
            GateKind::CX | GateKind::CZ | GateKind::CRx => (Some(1), 1),
            GateKind::Swap => (Some(0), 2),
            GateKind::Mct | GateKind::Mcz => (None, 1),
            _ => unreachable!(),
        };
        if want_controls.is_some_and(|c| c != self.controls.len()) {
            return malformed("wrong number of controls");
        }
        if self.targets.len() != want_targets {
            return malformed("wrong number of targets");
        }
        if self.kind.is_rotation() != self.angle.is_some() {
            return malformed("angle must be present exactly for rotations");
        }
        if !matches!(self.kind, GateKind::Mct | GateKind::Mcz) && self.has_negative_control() {
            return malformed("negative controls are only allowed on mct/mcz");
        }
        let mut seen = vec![false; width];
        for q in self.qubits() {
            if q >= width {
                return Err(CircuitError::IndexOutOfRange { qubit: q, width });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(CircuitError::OverlappingOperands(q));
            }
        }
        Ok(())
    }

    /// The adjoint gate.
    pub fn inverse(&self) -> Self {
        let mut g = self.clone();
        g.kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => k,
        };
        g.angle = self.angle.map(|a| -a);
        g
    }

    /// Applies `f` to every qubit index.
    pub fn remapped(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut g = self.clone();
        for c in &mut g.controls {
            c.qubit = f(c.qubit);
        }
        for t in &mut g.targets {
            *t = f(*t);
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(a) = self.angle {
            write!(f, "({})", format_angle(a))?;
        }
        let mut first = true;
        for c in &self.controls {
            let sep = if first { " " } else { "," };
            first = false;
            match c.polarity {
                Polarity::Positive => write!(f, "{sep}q[{}]", c.qubit)?,
                Polarity::Negative => write!(f, "{sep}!q[{}]", c.qubit)?,
            }
        }
        for t in &self.targets {
            let sep = if first { " " } else { "," };
            first = false;
            write!(f, "{sep}q[{t}]")?;
        }
        Ok(())
    }
}

/// Formats an angle as a multiple of `pi` when it is a dyadic fraction of it,
/// otherwise as a full-precision float.
pub fn format_angle(a: f64) -> String {
    if a == 0.0 {
        return "0".into();
    }
    let ratio = a / PI;
    for shift in 0..=20u32 {
        let denom = (1u64 << shift) as f64;
        let num = ratio * denom;
        if (num - num.round()).abs() < 1e-12 && num.round().abs() < 1e9 {
            let num = num.round() as i64;
            let sign = if num < 0 { "-" } else { "" };
            let mag = num.unsigned_abs();
            return match (mag, shift) {
                (1, 0) => format!("{sign}pi"),
                (m, 0) => format!("{sign}{m}*pi"),
                (1, s) => format!("{sign}pi/{}", 1u64 << s),
                (m, s) => format!("{sign}{m}*pi/{}", 1u64 << s),
            };
        }
    }
    format!("{a:.17}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Data,
    EdgeAncilla,
    InvalidAncilla,
    ValidFlag,
    Output,
    /// A physical qubit that carries no logical qubit after routing.
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    roles: Vec<QubitRole>,
    initial_state: Vec<InitialState>,
    /// Accumulated global phase in radians. Lowering keeps the circuit unitary
    /// exact by recording the phase its rewrites introduce.
    global_phase: f64,
}

impl Circuit {
    /// An empty circuit whose qubits are all data qubits starting in |0⟩.
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
            roles: vec![QubitRole::Data; num_qubits],
            initial_state: vec![InitialState::Zero; num_qubits],
            global_phase: 0.0,
        }
    }

    pub fn with_layout(roles: Vec<QubitRole>, initial_state: Vec<InitialState>) -> Self {
        assert_eq!(roles.len(), initial_state.len(), "roles and initial state must cover the same register");
        Self { num_qubits: roles.len(), gates: Vec::new(), roles, initial_state, global_phase: 0.0 }
    }

    /// An empty circuit sharing this circuit's register description.
    pub fn empty_like(&self) -> Self {
        Self { gates: Vec::new(), global_phase: 0.0, ..self.clone() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    pub fn initial_state(&self) -> &[InitialState] {
        &self.initial_state
    }

    pub fn set_initial_state(&mut self, state: Vec<InitialState>) {
        assert_eq!(state.len(), self.num_qubits);
        self.initial_state = state;
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    /// Qubits tagged with `role`, in index order.
    pub fn qubits_with_role(&self, role: QubitRole) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.roles[q] == role).collect()
    }

    pub fn append(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends gates produced by the crate's own builders. Panics on an
    /// invalid gate, which would be a synthesis bug rather than bad input.
    pub(crate) fn push(&mut self, gate: Gate) {
        if let Err(e) = gate.validate(self.num_qubits) {
            panic!("internal synthesis produced an invalid gate {gate}: {e}");
        }
        self.gates.push(gate);
    }

    /// Appends all gates of `other`, which must not be wider than `self`.
    pub fn compose(&mut self, other: &Circuit) -> Result<&mut Self, CircuitError> {
        for g in &other.gates {
            g.validate(self.num_qubits)?;
        }
        self.gates.extend(other.gates.iter().cloned());
        self.global_phase += other.global_phase;
        Ok(self)
    }

    /// Gates reversed, each replaced by its adjoint.
    pub fn inverse(&self) -> Self {
        Self {
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: -self.global_phase,
            ..self.clone()
        }
    }

    pub fn stats(&self) -> CircuitStats {
        let mut mct_count_by_arity = BTreeMap::new();
        let mut two_qubit_count = 0;
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            if g.arity() == 2 {
                two_qubit_count += 1;
            }
            if matches!(g.kind, GateKind::Mct | GateKind::Mcz) {
                *mct_count_by_arity.entry(g.controls.len()).or_insert(0) += 1;
            }
            let l = 1 + g.qubits().map(|q| level[q]).max().unwrap_or(0);
            for q in g.qubits() {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        CircuitStats { gate_count: self.gates.len(), two_qubit_count, mct_count_by_arity, depth }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "// {} qubits, {} gates", self.num_qubits, self.gates.len())?;
        for (q, (role, init)) in self.roles.iter().zip(&self.initial_state).enumerate() {
            let init = match init {
                InitialState::Zero => 0,
                InitialState::One => 1,
            };
            writeln!(f, "// q[{q}] {role:?} |{init}>")?;
        }
        for g in &self.gates {
            writeln!(f, "{g};")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CircuitStats {
    pub gate_count: usize,
    pub two_qubit_count: usize,
    /// Multi-controlled X/Z gates keyed by number of controls.
    pub mct_count_by_arity: BTreeMap<usize, usize>,
    /// Longest chain of gates that share an operand.
    pub depth: usize,
}

/// Where each class of qubit lives in an oracle register.
///
/// Vertex `v`'s color occupies data qubits `[v*c, (v+1)*c)`, most significant
/// bit first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QubitLayout {
    pub bits_per_vertex: usize,
    pub data: Range<usize>,
    pub edge_ancilla: Range<usize>,
    pub invalid_ancilla: Option<usize>,
    pub valid_flags: Option<Range<usize>>,
    pub output: usize,
}

impl QubitLayout {
    pub fn num_qubits(&self) -> usize {
        self.output + 1
    }

    pub fn data_width(&self) -> usize {
        self.data.len()
    }

    /// Ancilla count excluding the output qubit.
    pub fn ancilla_count(&self) -> usize {
        self.edge_ancilla.len()
            + usize::from(self.invalid_ancilla.is_some())
            + self.valid_flags.as_ref().map_or(0, |r| r.len())
    }

    pub fn vertex_bits(&self, v: usize) -> Range<usize> {
        let start = self.data.start + v * self.bits_per_vertex;
        start..start + self.bits_per_vertex
    }

    pub fn roles(&self) -> Vec<QubitRole> {
        let mut roles = vec![QubitRole::Data; self.num_qubits()];
        for q in self.edge_ancilla.clone() {
            roles[q] = QubitRole::EdgeAncilla;
        }
        if let Some(q) = self.invalid_ancilla {
            roles[q] = QubitRole::InvalidAncilla;
        }
        for q in self.valid_flags.clone().unwrap_or(0..0) {
            roles[q] = QubitRole::ValidFlag;
        }
        roles[self.output] = QubitRole::Output;
        roles
    }

    /// Edge ancillas, valid flags and the output start in |1⟩; everything
    /// else in |0⟩.
    pub fn initial_state(&self) -> Vec<InitialState> {
        self.roles()
            .into_iter()
            .map(|r| match r {
                QubitRole::EdgeAncilla | QubitRole::ValidFlag | QubitRole::Output => InitialState::One,
                _ => InitialState::Zero,
            })
            .collect()
    }

    pub fn empty_circuit(&self) -> Circuit {
        Circuit::with_layout(self.roles(), self.initial_state())
    }
}

//! Comparator-based Grover oracle for graph k-coloring.
//!
//! Register layout, in index order: the color register (`n * c` qubits), edge
//! ancillas, then either a single invalid-color ancilla (paper mode) or one
//! valid flag per vertex (strict mode), then the output qubit.
//!
//! Each edge `(i, j)` gets a comparator that leaves its ancilla at 1 iff the
//! two colors differ. With more edges than ancillas, finished groups of
//! comparators are folded into one ancilla by an MCT and then uncomputed so
//! their slots can be reused. A final MCT over the surviving ancillas (and the
//! invalid-color bookkeeping) kicks the phase back from the output qubit, and
//! everything before it is mirrored to restore the ancillas.

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Control, Gate, Polarity, QubitLayout};
use crate::graph::Instance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("comparator registers differ in width ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("comparator operands overlap")]
    OverlappingOperands,
    #[error("k = {0} is a power of two, so there are no invalid colors to detect")]
    NoInvalidColors(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// One shared invalid-color ancilla, as in the original construction.
    /// It tracks the parity of invalidly colored vertices, so two
    /// non-adjacent vertices holding an invalid color cancel out.
    Paper,
    /// One valid flag per vertex; marks exactly the proper colorings.
    #[default]
    Strict,
}

impl std::str::FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(OracleMode::Paper),
            "strict" => Ok(OracleMode::Strict),
            other => Err(format!("unknown oracle mode {other:?} (expected strict or paper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum ScheduleStep {
    /// Compute the comparator for `edge` into `ancilla`.
    Compare { edge: (usize, usize), ancilla: usize },
    /// Fold the comparator results in `group` into `target`, which ends up
    /// at 0 iff every edge in the group is properly colored.
    Aggregate { group: Vec<usize>, target: usize },
    /// Uncompute the comparator for `edge`, freeing `ancilla`.
    Release { edge: (usize, usize), ancilla: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OraclePlan {
    pub layout: QubitLayout,
    pub mode: OracleMode,
    pub edge_schedule: Vec<ScheduleStep>,
    /// Edge-ancilla controls of the phase-kickback MCT.
    pub final_edge_controls: Vec<Control>,
}

impl OraclePlan {
    pub fn aggregation_count(&self) -> usize {
        self.edge_schedule.iter().filter(|s| matches!(s, ScheduleStep::Aggregate { .. })).count()
    }
}

/// Allocates the register and schedules comparators onto `min(e, n)` edge
/// ancillas, processing edges in lexicographic order.
pub fn plan_layout(instance: &Instance, mode: OracleMode) -> OraclePlan {
    let n = instance.num_vertices();
    let edges: Vec<(usize, usize)> = instance.graph.edges().collect();
    let e = edges.len();
    let m = instance.data_width();
    let r = e.min(n);

    let edge_ancilla = m..m + r;
    let mut next = m + r;
    let (invalid_ancilla, valid_flags) = match (mode, instance.has_invalid_colors()) {
        (_, false) => (None, None),
        (OracleMode::Paper, true) => {
            next += 1;
            (Some(next - 1), None)
        }
        (OracleMode::Strict, true) => {
            next += n;
            (None, Some(next - n..next))
        }
    };
    let layout = QubitLayout {
        bits_per_vertex: instance.bits_per_vertex,
        data: 0..m,
        edge_ancilla: edge_ancilla.clone(),
        invalid_ancilla,
        valid_flags,
        output: next,
    };

    let mut steps = Vec::new();
    // Lowest index is handed out first.
    let mut free: Vec<usize> = edge_ancilla.rev().collect();
    let mut group: Vec<((usize, usize), usize)> = Vec::new();
    let mut held: Vec<usize> = Vec::new();
    for (idx, &edge) in edges.iter().enumerate() {
        let remaining = e - idx;
        if free.len() == 1 && remaining > 1 {
            assert!(!group.is_empty(), "edge ancilla budget exhausted");
            let target = free.pop().unwrap();
            steps.push(ScheduleStep::Aggregate { group: group.iter().map(|&(_, a)| a).collect(), target });
            for (edge, ancilla) in group.drain(..).rev() {
                steps.push(ScheduleStep::Release { edge, ancilla });
                free.push(ancilla);
            }
            free.sort_unstable_by(|a, b| b.cmp(a));
            held.push(target);
        }
        let ancilla = free.pop().expect("edge ancilla budget exhausted");
        steps.push(ScheduleStep::Compare { edge, ancilla });
        group.push((edge, ancilla));
    }

    let mut final_edge_controls: Vec<Control> = held.into_iter().map(Control::neg).collect();
    final_edge_controls.extend(group.into_iter().map(|(_, a)| Control::pos(a)));
    final_edge_controls.sort_by_key(|c| c.qubit);

    OraclePlan { layout, mode, edge_schedule: steps, final_edge_controls }
}

/// Comparator leaving `flag` flipped iff the registers `a` and `b` hold equal
/// values. With `flag` seeded at |1⟩ it ends at 1 exactly when `a != b`.
/// Both registers are restored.
pub fn build_comparator(a: &[usize], b: &[usize], flag: usize) -> Result<Vec<Gate>, OracleError> {
    if a.len() != b.len() {
        return Err(OracleError::WidthMismatch(a.len(), b.len()));
    }
    if a.iter().chain(b).any(|q| *q == flag) || a.iter().any(|q| b.contains(q)) {
        return Err(OracleError::OverlappingOperands);
    }
    // Low bit first; registers are stored most significant bit first.
    let ladder: Vec<Gate> = a.iter().zip(b).rev().map(|(&x, &y)| Gate::cx(x, y)).collect();
    let mut gates = ladder.clone();
    gates.push(Gate::mct(b.iter().map(|&q| Control::neg(q)), flag));
    gates.extend(ladder.into_iter().rev());
    Ok(gates)
}

/// Controls that fire when `qubits` (most significant first) hold `pattern`.
fn pattern_controls(qubits: std::ops::Range<usize>, pattern: usize) -> Vec<Control> {
    let w = qubits.len();
    qubits
        .enumerate()
        .map(|(i, q)| {
            let polarity = if pattern >> (w - 1 - i) & 1 == 1 { Polarity::Positive } else { Polarity::Negative };
            Control { qubit: q, polarity }
        })
        .collect()
}

/// Invalid-color detection. Paper mode flips the shared ancilla once per
/// invalidly colored vertex; strict mode clears vertex `v`'s flag iff its
/// color is invalid.
pub fn build_invalid_color_detector(plan: &OraclePlan, instance: &Instance) -> Result<Vec<Gate>, OracleError> {
    if !instance.has_invalid_colors() {
        return Err(OracleError::NoInvalidColors(instance.k));
    }
    let layout = &plan.layout;
    let mut gates = Vec::new();
    for v in 0..instance.num_vertices() {
        let target = match (plan.mode, layout.invalid_ancilla, &layout.valid_flags) {
            (OracleMode::Paper, Some(a), _) => a,
            (OracleMode::Strict, _, Some(flags)) => flags.start + v,
            _ => unreachable!("layout does not match mode"),
        };
        for &pattern in &instance.invalid_colors {
            gates.push(Gate::mct(pattern_controls(layout.vertex_bits(v), pattern), target));
        }
    }
    Ok(gates)
}

#[derive(Debug, Clone)]
pub struct Oracle {
    pub circuit: Circuit,
    pub plan: OraclePlan,
}

impl Oracle {
    pub fn layout(&self) -> &QubitLayout {
        &self.plan.layout
    }
}

/// The compute half of the oracle: invalid-color detection followed by the
/// comparator schedule.
fn compute_section(instance: &Instance, plan: &OraclePlan) -> Circuit {
    let layout = &plan.layout;
    let mut c = layout.empty_circuit();
    if instance.has_invalid_colors() {
        for g in build_invalid_color_detector(plan, instance).expect("invalid colors present") {
            c.push(g);
        }
    }
    for step in &plan.edge_schedule {
        match step {
            ScheduleStep::Compare { edge, ancilla } | ScheduleStep::Release { edge, ancilla } => {
                let a: Vec<usize> = layout.vertex_bits(edge.0).collect();
                let b: Vec<usize> = layout.vertex_bits(edge.1).collect();
                for g in build_comparator(&a, &b, *ancilla).expect("layout keeps comparator operands disjoint") {
                    c.push(g);
                }
            }
            ScheduleStep::Aggregate { group, target } => {
                c.push(Gate::mct(group.iter().map(|&q| Control::pos(q)), *target));
            }
        }
    }
    c
}

/// Full oracle: compute, phase kickback onto the output qubit, uncompute.
///
/// With the output in |−⟩, a data basis state picks up a −1 phase iff the
/// final MCT fires for it: in strict mode exactly the proper colorings.
pub fn build_oracle(instance: &Instance, mode: OracleMode) -> Oracle {
    let plan = plan_layout(instance, mode);
    let layout = &plan.layout;
    let compute = compute_section(instance, &plan);

    let mut controls = plan.final_edge_controls.clone();
    if let Some(a) = layout.invalid_ancilla {
        controls.push(Control::neg(a));
    }
    if let Some(flags) = &layout.valid_flags {
        controls.extend(flags.clone().map(Control::pos));
    }

    let mut circuit = compute.clone();
    circuit.push(Gate::mct(controls, layout.output));
    circuit.compose(&compute.inverse()).expect("same register");
    Oracle { circuit, plan }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::graph::Graph;
    use crate::sim::{self, Initial};

    fn inst(g: Graph, k: usize) -> Instance {
        Instance::new(g, k).unwrap()
    }

    #[test]
    fn triangle_layouts() {
        let p = plan_layout(&inst(Graph::complete(3).unwrap(), 3), OracleMode::Paper);
        assert_eq!(p.layout.data, 0..6);
        assert_eq!(p.layout.edge_ancilla.len(), 3);
        assert_eq!(p.layout.invalid_ancilla, Some(9));
        assert_eq!(p.layout.output, 10);
        assert_eq!(p.layout.num_qubits(), 11);
        assert_eq!(p.layout.ancilla_count(), 4);

        let p = plan_layout(&inst(Graph::complete(3).unwrap(), 4), OracleMode::Paper);
        assert_eq!(p.layout.invalid_ancilla, None);
        assert_eq!(p.layout.num_qubits(), 10);

        let p = plan_layout(&inst(Graph::complete(3).unwrap(), 3), OracleMode::Strict);
        assert_eq!(p.layout.valid_flags, Some(9..12));
        assert_eq!(p.layout.invalid_ancilla, None);
        assert_eq!(p.layout.num_qubits(), 13);

        let p = plan_layout(&inst(Graph::path(2).unwrap(), 2), OracleMode::Paper);
        assert_eq!(p.layout.num_qubits(), 4);
    }

    #[test]
    fn every_edge_scheduled_once() {
        for n in 2..=7 {
            let g = Graph::complete(n).unwrap();
            let p = plan_layout(&inst(g.clone(), 3), OracleMode::Strict);
            let computed: Vec<_> = p
                .edge_schedule
                .iter()
                .filter_map(|s| match s {
                    ScheduleStep::Compare { edge, .. } => Some(*edge),
                    _ => None,
                })
                .collect();
            assert_eq!(computed, g.edges().collect::<Vec<_>>(), "n={n}");
            assert!(p.edge_schedule.iter().all(|s| match s {
                ScheduleStep::Compare { ancilla, .. } => p.layout.edge_ancilla.contains(ancilla),
                _ => true,
            }));
            assert_eq!(p.layout.edge_ancilla.len(), n.min(g.num_edges()));
        }
    }

    #[test]
    fn comparator_examples() {
        // a = q0,q1 ; b = q2,q3 ; flag = q4 seeded to 1.
        let gates = build_comparator(&[0, 1], &[2, 3], 4).unwrap();
        let mut c = Circuit::new(5);
        for g in gates {
            c.append(g).unwrap();
        }
        let index =
            |a: usize, b: usize, f: usize| sim::deposit_bits(a, &[0, 1]) | sim::deposit_bits(b, &[2, 3]) | f << 4;
        let out = sim::run(&c, Initial::Basis(index(0b01, 0b01, 1))).unwrap();
        assert!((out.amplitude(index(0b01, 0b01, 0)).re - 1.0).abs() < 1e-12);
        let out = sim::run(&c, Initial::Basis(index(0b01, 0b10, 1))).unwrap();
        assert!((out.amplitude(index(0b01, 0b10, 1)).re - 1.0).abs() < 1e-12);

        assert_eq!(build_comparator(&[0], &[1, 2], 3), Err(OracleError::WidthMismatch(1, 2)));
        assert_eq!(build_comparator(&[0], &[1], 1), Err(OracleError::OverlappingOperands));
    }

    #[test]
    fn detector_requires_invalid_colors() {
        let i = inst(Graph::complete(3).unwrap(), 4);
        let p = plan_layout(&i, OracleMode::Paper);
        assert_eq!(build_invalid_color_detector(&p, &i), Err(OracleError::NoInvalidColors(4)));
    }

    #[test]
    fn detector_polarities() {
        let i = inst(Graph::complete(3).unwrap(), 3);
        let p = plan_layout(&i, OracleMode::Paper);
        let gates = build_invalid_color_detector(&p, &i).unwrap();
        assert_eq!(gates.len(), 3);
        assert!(gates.iter().all(|g| g.kind == GateKind::Mct && !g.has_negative_control()));
        assert!(gates.iter().all(|g| g.targets == vec![9]));

        let i = inst(Graph::complete(2).unwrap(), 5);
        let p = plan_layout(&i, OracleMode::Strict);
        let gates = build_invalid_color_detector(&p, &i).unwrap();
        // colors 5,6,7 for each of 2 vertices
        assert_eq!(gates.len(), 6);
        let pol: Vec<bool> = gates[0].controls.iter().map(|c| c.fires_on()).collect();
        assert_eq!(pol, vec![true, false, true]);
    }

    #[test]
    fn triangle_gate_budget() {
        let o = build_oracle(&inst(Graph::complete(3).unwrap(), 3), OracleMode::Paper);
        let s = o.circuit.stats();
        assert!(s.gate_count <= 67, "{} gates", s.gate_count);
        assert_eq!(o.circuit.inverse().gates(), o.circuit.gates());
    }

    #[test]
    fn mode_parse() {
        assert_eq!("paper".parse::<OracleMode>(), Ok(OracleMode::Paper));
        assert_eq!("strict".parse::<OracleMode>(), Ok(OracleMode::Strict));
        assert!("loose".parse::<OracleMode>().is_err());
    }
}

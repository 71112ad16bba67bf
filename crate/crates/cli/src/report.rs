//! JSON report types. Each top-level report has a schema under `schemas/`.

use std::collections::BTreeMap;

use gkc_core::{Circuit, Graph, OracleMode, QubitLayout};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphInfo {
    fn from(g: &Graph) -> Self {
        Self { vertices: g.num_vertices(), edges: g.edges().map(|(a, b)| [a, b]).collect() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QubitCounts {
    pub data: usize,
    pub edge_ancilla: usize,
    pub invalid_ancilla: usize,
    pub valid_flags: usize,
    /// Every ancilla except the output qubit.
    pub ancilla: usize,
    pub output: usize,
    pub total: usize,
}

impl From<&QubitLayout> for QubitCounts {
    fn from(l: &QubitLayout) -> Self {
        Self {
            data: l.data_width(),
            edge_ancilla: l.edge_ancilla.len(),
            invalid_ancilla: usize::from(l.invalid_ancilla.is_some()),
            valid_flags: l.valid_flags.as_ref().map_or(0, |r| r.len()),
            ancilla: l.ancilla_count(),
            output: 1,
            total: l.num_qubits(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GateCounts {
    pub gates: usize,
    pub two_qubit: usize,
    pub depth: usize,
    /// Multi-controlled X/Z gates keyed by control count.
    pub mct_by_controls: BTreeMap<String, usize>,
}

impl From<&Circuit> for GateCounts {
    fn from(c: &Circuit) -> Self {
        let s = c.stats();
        Self {
            gates: s.gate_count,
            two_qubit: s.two_qubit_count,
            depth: s.depth,
            mct_by_controls: s.mct_count_by_arity.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BeforeAfter {
    pub before: GateCounts,
    pub after: GateCounts,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub command: &'static str,
    pub graph: GraphInfo,
    pub k: usize,
    pub mode: OracleMode,
    pub bits_per_vertex: usize,
    pub invalid_colors: Vec<usize>,
    pub qubits: QubitCounts,
    pub aggregations: usize,
    pub basis: String,
    pub gates: BeforeAfter,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroverReport {
    pub command: &'static str,
    pub graph: GraphInfo,
    pub k: usize,
    pub mode: OracleMode,
    pub colorable: Option<bool>,
    pub message: String,
    pub iterations: Option<usize>,
    pub solution_count: Option<usize>,
    pub search_space: usize,
    pub qubits: QubitCounts,
    pub basis: String,
    pub gates: Option<BeforeAfter>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyInfo {
    pub physical_qubits: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteReport {
    pub command: &'static str,
    pub graph: GraphInfo,
    pub k: usize,
    pub mode: OracleMode,
    pub iterations: usize,
    pub basis: String,
    pub seed: u64,
    pub topology: TopologyInfo,
    pub swap_count: usize,
    pub initial_layout: Vec<usize>,
    pub final_layout: Vec<usize>,
    pub constraints_satisfied: bool,
    pub gates: BeforeAfter,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateProbability {
    pub state: String,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub graph: GraphInfo,
    pub k: usize,
    pub mode: OracleMode,
    pub iterations: usize,
    pub qubits: usize,
    pub data_qubits: usize,
    pub top_states: Vec<StateProbability>,
    pub distribution: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoutingSummary {
    pub physical_qubits: usize,
    pub swap_count: usize,
    pub constraints_satisfied: bool,
    /// Total-variation distance between the routed and unrouted data
    /// distributions.
    pub total_variation: f64,
    pub equivalent: bool,
    pub final_layout: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[allow(non_snake_case)]
pub struct RunReport {
    pub command: &'static str,
    pub graph: GraphInfo,
    pub k: usize,
    pub mode: OracleMode,
    pub colorable: bool,
    pub message: String,
    pub M: usize,
    pub N: usize,
    pub t: Option<usize>,
    pub success_probability: Option<f64>,
    pub closed_form_probability: Option<f64>,
    pub top_states: Vec<StateProbability>,
    /// The `M` most probable measured states are exactly the classical
    /// solution set (for `M = 0`: the oracle marks nothing).
    #[serde(rename = "match")]
    pub matches: bool,
    /// The oracle's phase-flip set equals the classical solution set.
    pub oracle_match: bool,
    pub qubits: QubitCounts,
    pub basis: String,
    pub gates: Option<BeforeAfter>,
    pub routing: Option<RoutingSummary>,
}

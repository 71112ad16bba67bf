//! Subcommand implementations. Each returns an [`Outcome`]; writing it out
//! is left to the caller.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use gkc_core::classical::{self, Solutions};
use gkc_core::decompose::{lower_circuit_to, Basis};
use gkc_core::grover::{optimal_iterations, success_probability};
use gkc_core::route::verify_constraints;
use gkc_core::sim::{self, bitstring, phase_pattern, top_states, Initial};
use gkc_core::{
    build_grover, build_oracle, emit_qasm, sabre_route, Circuit, CouplingGraph, Graph, GroverJob, Instance, OracleMode,
};
use serde::Serialize;

use crate::cost;
use crate::error::CliError;
use crate::report::*;

/// Largest total-variation distance accepted between routed and unrouted
/// output distributions.
pub const ROUTING_TV_TOLERANCE: f64 = 1e-6;
const TOP_STATES: usize = 10;

#[derive(Debug, Clone)]
pub struct Outcome {
    /// JSON report, if the command produces one.
    pub report: Option<serde_json::Value>,
    /// Human-readable summary.
    pub text: String,
    /// Files to write into the output directory: `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
}

impl Outcome {
    fn new(report: &impl Serialize, text: String, artifacts: Vec<(String, String)>) -> Self {
        Self { report: Some(serde_json::to_value(report).expect("reports serialize")), text, artifacts }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub graph: PathBuf,
    pub k: usize,
    pub mode: OracleMode,
}

struct Loaded {
    instance: Instance,
    stem: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(spec: &InstanceSpec) -> Result<Loaded, CliError> {
    let text = read(&spec.graph)?;
    let graph = Graph::parse_by_extension(&text, &spec.graph.to_string_lossy())?;
    let instance = Instance::new(graph, spec.k)?;
    let name = spec.graph.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
    let mode = match spec.mode {
        OracleMode::Paper => "paper",
        OracleMode::Strict => "strict",
    };
    Ok(Loaded { instance, stem: format!("{name}_k{}_{mode}", spec.k) })
}

pub fn load_topology(path: &Path) -> Result<CouplingGraph, CliError> {
    Ok(CouplingGraph::parse(&read(path)?)?)
}

fn basis_name(b: Basis) -> String {
    match b {
        Basis::Native => "native".into(),
        Basis::Cx => "cx,u3".into(),
    }
}

fn check_ceiling(qubits: usize) -> Result<(), CliError> {
    let ceiling = sim::qubit_ceiling();
    if qubits > ceiling {
        return Err(sim::SimError::TooManyQubits { requested: qubits, ceiling }.into());
    }
    Ok(())
}

fn not_colorable(k: usize) -> String {
    format!("graph is not {k}-colorable")
}

pub fn synth(spec: &InstanceSpec, basis: Basis) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let oracle = build_oracle(&instance, spec.mode);
    let lowered = lower_circuit_to(&oracle.circuit, basis);
    let report = SynthReport {
        command: "synth",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        bits_per_vertex: instance.bits_per_vertex,
        invalid_colors: instance.invalid_colors.clone(),
        qubits: oracle.layout().into(),
        aggregations: oracle.plan.aggregation_count(),
        basis: basis_name(basis),
        gates: BeforeAfter { before: (&oracle.circuit).into(), after: (&lowered).into() },
    };
    let text = format!(
        "oracle for {} with k={} ({:?} mode)\nqubits: data={} ancilla={} output=1 total={}\ngates: {} unlowered, {} lowered\n",
        instance.graph,
        instance.k,
        spec.mode,
        report.qubits.data,
        report.qubits.ancilla,
        report.qubits.total,
        report.gates.before.gates,
        report.gates.after.gates
    );
    let artifacts = vec![
        (format!("{stem}.oracle.txt"), oracle.circuit.to_string()),
        (format!("{stem}.oracle.qasm"), emit_qasm(&lowered)?),
    ];
    Ok(Outcome::new(&report, text, artifacts))
}

/// Iteration count and solution data: explicit `iterations` skip the
/// enumeration.
fn plan_iterations(
    instance: &Instance,
    iterations: Option<usize>,
) -> Result<(Option<usize>, Option<Solutions>), CliError> {
    match iterations {
        Some(t) => Ok((Some(t), None)),
        None => {
            let sols = classical::solutions(instance)?;
            let t = optimal_iterations(sols.search_space, sols.count()).ok();
            Ok((t, Some(sols)))
        }
    }
}

pub fn grover(spec: &InstanceSpec, iterations: Option<usize>, basis: Basis) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let (t, sols) = plan_iterations(&instance, iterations)?;
    let oracle = build_oracle(&instance, spec.mode);
    let mut report = GroverReport {
        command: "grover",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        colorable: sols.as_ref().map(|s| s.count() > 0),
        message: String::new(),
        iterations: t,
        solution_count: sols.as_ref().map(Solutions::count),
        search_space: 1 << instance.data_width(),
        qubits: oracle.layout().into(),
        basis: basis_name(basis),
        gates: None,
    };
    let Some(t) = t else {
        report.message = not_colorable(instance.k);
        return Ok(Outcome::new(&report, format!("{}\n", report.message), vec![]));
    };
    let job = build_grover(&instance, spec.mode, Some(t))?;
    let lowered = lower_circuit_to(&job.circuit, basis);
    report.gates = Some(BeforeAfter { before: (&job.circuit).into(), after: (&lowered).into() });
    report.message = format!("{t} Grover iteration(s)");
    let text = format!(
        "grover circuit: {} qubits, {t} iteration(s), {} gates ({} lowered)\n",
        job.circuit.num_qubits(),
        job.circuit.len(),
        lowered.len()
    );
    let artifacts = vec![(format!("{stem}.grover.qasm"), emit_qasm(&lowered)?)];
    Ok(Outcome::new(&report, text, artifacts))
}

fn require_iterations(instance: &Instance, iterations: Option<usize>) -> Result<usize, CliError> {
    match plan_iterations(instance, iterations)? {
        (Some(t), _) => Ok(t),
        (None, _) => {
            Err(CliError::Input(format!("{}; pass --iterations to build a circuit anyway", not_colorable(instance.k))))
        }
    }
}

pub fn lower(spec: &InstanceSpec, iterations: Option<usize>, basis: Basis) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let t = require_iterations(&instance, iterations)?;
    let job = build_grover(&instance, spec.mode, Some(t))?;
    let lowered = lower_circuit_to(&job.circuit, basis);
    #[derive(Serialize)]
    struct LowerReport {
        command: &'static str,
        graph: GraphInfo,
        k: usize,
        mode: OracleMode,
        iterations: usize,
        basis: String,
        global_phase: f64,
        gates: BeforeAfter,
    }
    let report = LowerReport {
        command: "lower",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        iterations: t,
        basis: basis_name(basis),
        global_phase: lowered.global_phase(),
        gates: BeforeAfter { before: (&job.circuit).into(), after: (&lowered).into() },
    };
    let text = format!("lowered {} gates to {} ({})\n", job.circuit.len(), lowered.len(), report.basis);
    Ok(Outcome::new(&report, text, vec![(format!("{stem}.lowered.qasm"), emit_qasm(&lowered)?)]))
}

pub fn route(
    spec: &InstanceSpec,
    iterations: Option<usize>,
    basis: Basis,
    topology: &Path,
    seed: u64,
) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let coupling = load_topology(topology)?;
    let t = require_iterations(&instance, iterations)?;
    let job = build_grover(&instance, spec.mode, Some(t))?;
    let lowered = lower_circuit_to(&job.circuit, basis);
    let routed = sabre_route(&lowered, &coupling, seed)?;
    let constraints_satisfied = verify_constraints(&routed.circuit, &coupling).is_ok();
    let physical = lower_circuit_to(&routed.circuit, basis);
    let report = RouteReport {
        command: "route",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        iterations: t,
        basis: basis_name(basis),
        seed,
        topology: TopologyInfo {
            physical_qubits: coupling.num_physical(),
            edges: coupling.pairs().map(|(a, b)| [a, b]).collect(),
        },
        swap_count: routed.swap_count,
        initial_layout: routed.initial.as_slice().to_vec(),
        final_layout: routed.final_mapping.as_slice().to_vec(),
        constraints_satisfied,
        gates: BeforeAfter { before: (&lowered).into(), after: (&physical).into() },
    };
    let mut routed_out = routed.clone();
    routed_out.circuit = physical;
    let qasm = routed_out.emit_qasm(lowered.roles())?;
    let text = format!(
        "routed onto {} physical qubits with {} SWAP(s); constraints {}\n",
        coupling.num_physical(),
        routed.swap_count,
        if constraints_satisfied { "satisfied" } else { "VIOLATED" }
    );
    Ok(Outcome::new(&report, text, vec![(format!("{stem}.routed.qasm"), qasm)]))
}

fn data_distribution(circuit: &Circuit, data: &[usize]) -> Result<Vec<f64>, CliError> {
    check_ceiling(circuit.num_qubits())?;
    Ok(sim::run(circuit, Initial::Declared)?.probabilities(data))
}

fn top(dist: &[f64], width: usize) -> Vec<StateProbability> {
    top_states(dist, width, TOP_STATES)
        .into_iter()
        .map(|(state, probability)| StateProbability { state, probability })
        .collect()
}

/// Text histogram of the most probable states.
pub fn histogram(states: &[StateProbability]) -> String {
    const WIDTH: f64 = 50.0;
    let max = states.iter().map(|s| s.probability).fold(0.0, f64::max);
    let mut out = String::new();
    for s in states {
        let bar = if max > 0.0 { (s.probability / max * WIDTH).round() as usize } else { 0 };
        out.push_str(&format!("{} {:>8.5} {}\n", s.state, s.probability, "#".repeat(bar)));
    }
    out
}

pub fn simulate(spec: &InstanceSpec, iterations: Option<usize>) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let t = require_iterations(&instance, iterations)?;
    let job = build_grover(&instance, spec.mode, Some(t))?;
    let data: Vec<usize> = job.layout().data.clone().collect();
    let dist = data_distribution(&job.circuit, &data)?;
    let top_states = top(&dist, data.len());
    let report = SimulateReport {
        command: "simulate",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        iterations: t,
        qubits: job.circuit.num_qubits(),
        data_qubits: data.len(),
        distribution: sim::distribution_map(&dist, data.len(), 1e-12),
        top_states,
    };
    let hist = histogram(&report.top_states);
    Ok(Outcome::new(&report, hist.clone(), vec![(format!("{stem}.histogram.txt"), hist)]))
}

pub struct RunOptions<'a> {
    pub iterations: Option<usize>,
    pub topology: Option<&'a Path>,
    pub seed: u64,
    pub basis: Basis,
}

pub fn run(spec: &InstanceSpec, opts: &RunOptions) -> Result<Outcome, CliError> {
    let Loaded { instance, stem } = load(spec)?;
    let sols = classical::solutions(&instance)?;
    let (m, n) = (sols.count(), sols.search_space);
    let oracle = build_oracle(&instance, spec.mode);
    check_ceiling(oracle.circuit.num_qubits())?;
    let oracle_match = phase_pattern(&oracle.circuit, oracle.layout())? == sols.bitstrings;
    let mut report = RunReport {
        command: "run",
        graph: (&instance.graph).into(),
        k: instance.k,
        mode: spec.mode,
        colorable: m > 0,
        message: String::new(),
        M: m,
        N: n,
        t: None,
        success_probability: None,
        closed_form_probability: None,
        top_states: vec![],
        matches: oracle_match,
        oracle_match,
        qubits: oracle.layout().into(),
        basis: basis_name(opts.basis),
        gates: None,
        routing: None,
    };
    if m == 0 {
        report.message = not_colorable(instance.k);
        let text = format!("{} (M=0 of N={n})\n", report.message);
        return Ok(Outcome::new(&report, text, vec![]));
    }
    let t = match opts.iterations {
        Some(t) => t,
        None => optimal_iterations(n, m)?,
    };
    let job: GroverJob = build_grover(&instance, spec.mode, Some(t))?;
    let lowered = lower_circuit_to(&job.circuit, opts.basis);
    report.gates = Some(BeforeAfter { before: (&job.circuit).into(), after: (&lowered).into() });
    let data: Vec<usize> = job.layout().data.clone().collect();
    let mut artifacts = Vec::new();

    let dist = match opts.topology {
        None => {
            artifacts.push((format!("{stem}.grover.qasm"), emit_qasm(&lowered)?));
            data_distribution(&lowered, &data)?
        }
        Some(path) => {
            let coupling = load_topology(path)?;
            let routed = sabre_route(&lowered, &coupling, opts.seed)?;
            let constraints_satisfied = verify_constraints(&routed.circuit, &coupling).is_ok();
            let physical_data: Vec<usize> = data.iter().map(|&q| routed.final_mapping.physical(q)).collect();
            let routed_dist = data_distribution(&routed.circuit, &physical_data)?;
            let reference = data_distribution(&job.circuit, &data)?;
            let tv = 0.5 * routed_dist.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum::<f64>();
            report.routing = Some(RoutingSummary {
                physical_qubits: coupling.num_physical(),
                swap_count: routed.swap_count,
                constraints_satisfied,
                total_variation: tv,
                equivalent: tv <= ROUTING_TV_TOLERANCE,
                final_layout: routed.final_mapping.as_slice().to_vec(),
            });
            let mut emitted = routed.clone();
            emitted.circuit = lower_circuit_to(&routed.circuit, opts.basis);
            artifacts.push((format!("{stem}.routed.qasm"), emitted.emit_qasm(lowered.roles())?));
            routed_dist
        }
    };

    let success: f64 = dist
        .iter()
        .enumerate()
        .filter(|(i, _)| sols.bitstrings.contains(&bitstring(*i, data.len())))
        .map(|(_, p)| p)
        .sum();
    let most_likely: BTreeSet<String> = top_states(&dist, data.len(), m).into_iter().map(|(s, _)| s).collect();
    report.t = Some(t);
    report.success_probability = Some(success);
    report.closed_form_probability = Some(success_probability(n, m, t));
    report.top_states = top(&dist, data.len());
    report.matches = oracle_match && most_likely == sols.bitstrings;
    report.message = format!("{m} proper coloring(s) among {n} assignments");

    let hist = histogram(&report.top_states);
    let mut text =
        format!("{}\nM={m} N={n} t={t} success_probability={success:.6} match={}\n", report.message, report.matches);
    if let Some(r) = &report.routing {
        text.push_str(&format!(
            "routing: {} SWAP(s), constraints {}, total variation {:.2e}\n",
            r.swap_count,
            if r.constraints_satisfied { "satisfied" } else { "VIOLATED" },
            r.total_variation
        ));
    }
    text.push_str(&hist);
    artifacts.push((format!("{stem}.histogram.txt"), hist));
    Ok(Outcome::new(&report, text, artifacts))
}

pub fn cost(vertices: &str, ks: &str) -> Result<Outcome, CliError> {
    let rows = cost::cost_table(cost::parse_vertex_range(vertices)?, &cost::parse_k_list(ks)?)?;
    let csv = cost::to_csv(&rows);
    Ok(Outcome { report: None, text: csv.clone(), artifacts: vec![("cost.csv".into(), csv)] })
}

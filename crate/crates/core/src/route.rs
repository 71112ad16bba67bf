//! SABRE qubit routing onto a coupling graph.
//!
//! Gates are released from a dependency DAG front layer as soon as their
//! operands are adjacent. When nothing in the front layer can run, every SWAP
//! touching a front-layer operand is scored by
//!
//! ```text
//! H = max(decay[a], decay[b]) * (mean_F dist + w * mean_E dist)
//! ```
//!
//! over the front layer `F` and a look-ahead extended set `E`, and the
//! cheapest is applied. The initial mapping is refined by routing the circuit
//! forward, backward and forward again, each pass starting from the
//! previous pass's final mapping.

use std::collections::{BTreeSet, VecDeque};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, InitialState, QubitRole};
use crate::qasm;
use crate::sim::Statevector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RouteError {
    #[error("coupling graph is disconnected")]
    Disconnected,
    #[error("physical qubit {qubit} out of range for {num_physical} physical qubits")]
    IndexOutOfRange { qubit: usize, num_physical: usize },
    #[error("malformed coupling file, line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("circuit needs {needed} qubits but the coupling graph has {available}")]
    TooFewPhysicalQubits { needed: usize, available: usize },
    #[error("gate {0} acts on more than two qubits; lower the circuit first")]
    UnloweredGate(String),
    #[error("gate {index} ({gate}) acts on uncoupled physical qubits")]
    Uncoupled { index: usize, gate: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    num_physical: usize,
    pairs: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    distance: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(num_physical: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, RouteError> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            for q in [a, b] {
                if q >= num_physical {
                    return Err(RouteError::IndexOutOfRange { qubit: q, num_physical });
                }
            }
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        let mut neighbors = vec![Vec::new(); num_physical];
        for &(a, b) in &set {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        let distance: Vec<Vec<usize>> = (0..num_physical).map(|s| bfs(&neighbors, s)).collect();
        if num_physical == 0 || distance[0].contains(&usize::MAX) {
            return Err(RouteError::Disconnected);
        }
        Ok(Self { num_physical, pairs: set, neighbors, distance })
    }

    /// Parses `num_physical` on the first line, then one `a b` pair per line.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, RouteError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let malformed = |line, reason: &str| RouteError::Malformed { line, reason: reason.into() };
        let (line, first) = lines.next().ok_or_else(|| malformed(1, "missing physical qubit count"))?;
        let num_physical: usize =
            first.parse().map_err(|_| malformed(line, "physical qubit count is not an integer"))?;
        let mut pairs = Vec::new();
        for (line, text) in lines {
            let toks: Vec<&str> = text.split_whitespace().collect();
            let [a, b] = toks.as_slice() else {
                return Err(malformed(line, "expected two physical qubit indices"));
            };
            let a = a.parse().map_err(|_| malformed(line, "index is not an integer"))?;
            let b = b.parse().map_err(|_| malformed(line, "index is not an integer"))?;
            pairs.push((a, b));
        }
        Self::new(num_physical, pairs)
    }

    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("line is connected")
    }

    pub fn ring(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("ring is connected")
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        Self::partial_grid(rows, cols, rows * cols)
    }

    /// The first `count` sites of a row-major `rows x cols` grid.
    pub fn partial_grid(rows: usize, cols: usize, count: usize) -> Self {
        assert!(count <= rows * cols);
        let mut pairs = Vec::new();
        for q in 0..count {
            let (r, c) = (q / cols, q % cols);
            if c + 1 < cols && q + 1 < count {
                pairs.push((q, q + 1));
            }
            if r + 1 < rows && q + cols < count {
                pairs.push((q, q + cols));
            }
        }
        Self::new(count, pairs).expect("grid prefix is connected")
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.neighbors[q]
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distance[a][b]
    }

    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    /// A shortest path from `a` to `b`, both ends included.
    fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.neighbors[cur]
                .iter()
                .filter(|&&nb| self.distance[nb][b] + 1 == self.distance[cur][b])
                .min()
                .expect("connected graph");
            path.push(cur);
        }
        path
    }
}

fn bfs(neighbors: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; neighbors.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in &neighbors[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Logical-to-physical assignment for a circuit's qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    logical_to_physical: Vec<usize>,
}

impl Mapping {
    pub fn new(logical_to_physical: Vec<usize>) -> Self {
        let mut seen = BTreeSet::new();
        assert!(logical_to_physical.iter().all(|p| seen.insert(*p)), "mapping must be injective");
        Self { logical_to_physical }
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.logical_to_physical[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.logical_to_physical
    }

    pub fn len(&self) -> usize {
        self.logical_to_physical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logical_to_physical.is_empty()
    }
}

/// Full permutation over physical qubits. Logical indices at or beyond the
/// circuit width stand for empty physical slots.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Layout {
    l2p: Vec<usize>,
    p2l: Vec<usize>,
}

impl Layout {
    fn identity(n: usize) -> Self {
        Self { l2p: (0..n).collect(), p2l: (0..n).collect() }
    }

    fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l.swap(a, b);
        self.l2p[la] = b;
        self.l2p[lb] = a;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SabreConfig {
    pub extended_set_size: usize,
    pub extended_set_weight: f64,
    pub decay_increment: f64,
    pub decay_reset: usize,
    /// Forward/backward/forward refinement of the initial mapping. Off means a
    /// single forward pass from the identity mapping.
    pub reverse_traversal: bool,
    pub seed: u64,
}

impl Default for SabreConfig {
    fn default() -> Self {
        Self {
            extended_set_size: 20,
            extended_set_weight: 0.5,
            decay_increment: 0.001,
            decay_reset: 5,
            reverse_traversal: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoutedCircuit {
    /// Circuit over the physical register.
    pub circuit: Circuit,
    pub initial: Mapping,
    pub final_mapping: Mapping,
    pub swap_count: usize,
}

impl RoutedCircuit {
    /// QASM measuring each logical data qubit from its final physical home,
    /// with the final layout appended as comments.
    pub fn emit_qasm(&self, logical_roles: &[QubitRole]) -> Result<String, crate::circuit::CircuitError> {
        let measured: Vec<usize> = logical_roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == QubitRole::Data)
            .map(|(l, _)| self.final_mapping.physical(l))
            .collect();
        let trailer: Vec<String> = self
            .final_mapping
            .as_slice()
            .iter()
            .enumerate()
            .map(|(l, p)| format!("final_layout: logical {l} -> physical {p}"))
            .collect();
        qasm::emit_qasm_measuring(&self.circuit, &measured, &trailer)
    }

    /// Places a logical state on the physical register per the initial
    /// mapping, with unused physical qubits in |0⟩.
    pub fn embed_state(&self, logical: &Statevector) -> Statevector {
        let p = self.circuit.num_qubits();
        let qubits = self.initial.as_slice();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << p];
        for (idx, a) in logical.amplitudes().iter().enumerate() {
            let phys = qubits.iter().enumerate().fold(0, |acc, (l, &q)| acc | (idx >> l & 1) << q);
            amps[phys] = *a;
        }
        Statevector::from_amplitudes(amps)
    }

    /// Reads the logical state back through the final mapping. The second
    /// value is the probability mass found outside the logical subspace.
    pub fn extract_state(&self, physical: &Statevector) -> (Statevector, f64) {
        let qubits = self.final_mapping.as_slice();
        let used = qubits.iter().fold(0usize, |m, &q| m | 1 << q);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits.len()];
        let mut stray = 0.0;
        for (idx, a) in physical.amplitudes().iter().enumerate() {
            if idx & !used != 0 {
                stray += a.norm_sqr();
                continue;
            }
            let logical = qubits.iter().enumerate().fold(0, |acc, (l, &q)| acc | (idx >> q & 1) << l);
            amps[logical] = *a;
        }
        (Statevector::from_amplitudes(amps), stray)
    }
}

/// Checks that every two-qubit gate acts on a coupled pair.
pub fn verify_constraints(circuit: &Circuit, coupling: &CouplingGraph) -> Result<(), RouteError> {
    for (index, g) in circuit.gates().iter().enumerate() {
        let qs: Vec<usize> = g.qubits().collect();
        match qs.as_slice() {
            [_] => {}
            [a, b] if coupling.is_coupled(*a, *b) => {}
            [_, _] => return Err(RouteError::Uncoupled { index, gate: g.to_string() }),
            _ => return Err(RouteError::UnloweredGate(g.to_string())),
        }
    }
    Ok(())
}

/// Routes with the default heuristic parameters and the given tie-break seed.
pub fn sabre_route(circuit: &Circuit, coupling: &CouplingGraph, seed: u64) -> Result<RoutedCircuit, RouteError> {
    sabre_route_with(circuit, coupling, &SabreConfig { seed, ..SabreConfig::default() })
}

pub fn sabre_route_with(
    circuit: &Circuit,
    coupling: &CouplingGraph,
    config: &SabreConfig,
) -> Result<RoutedCircuit, RouteError> {
    let width = circuit.num_qubits();
    let p = coupling.num_physical();
    if width > p {
        return Err(RouteError::TooFewPhysicalQubits { needed: width, available: p });
    }
    if let Some(g) = circuit.gates().iter().find(|g| g.arity() > 2) {
        return Err(RouteError::UnloweredGate(g.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let forward: Vec<&Gate> = circuit.gates().iter().collect();

    let mut start = Layout::identity(p);
    if config.reverse_traversal {
        let backward: Vec<&Gate> = forward.iter().rev().copied().collect();
        let first = route_pass(&forward, coupling, config, start, &mut rng);
        let second = route_pass(&backward, coupling, config, first.final_layout, &mut rng);
        start = second.final_layout;
    }
    let pass = route_pass(&forward, coupling, config, start.clone(), &mut rng);

    let mut routed = Circuit::with_layout(
        (0..p).map(|q| circuit.roles().get(start.p2l[q]).copied().unwrap_or(QubitRole::Idle)).collect(),
        (0..p).map(|q| circuit.initial_state().get(start.p2l[q]).copied().unwrap_or(InitialState::Zero)).collect(),
    );
    routed.add_global_phase(circuit.global_phase());
    for g in pass.gates {
        routed.push(g);
    }
    Ok(RoutedCircuit {
        circuit: routed,
        initial: Mapping::new(start.l2p[..width].to_vec()),
        final_mapping: Mapping::new(pass.final_layout.l2p[..width].to_vec()),
        swap_count: pass.swaps,
    })
}

struct PassResult {
    gates: Vec<Gate>,
    final_layout: Layout,
    swaps: usize,
}

struct Dag {
    successors: Vec<Vec<usize>>,
    predecessor_count: Vec<usize>,
}

impl Dag {
    fn build(gates: &[&Gate]) -> Self {
        let mut last: Vec<Option<usize>> = Vec::new();
        let mut successors = vec![Vec::new(); gates.len()];
        let mut predecessor_count = vec![0; gates.len()];
        for (i, g) in gates.iter().enumerate() {
            let mut preds = BTreeSet::new();
            for q in g.qubits() {
                if q >= last.len() {
                    last.resize(q + 1, None);
                }
                if let Some(prev) = last[q].replace(i) {
                    preds.insert(prev);
                }
            }
            predecessor_count[i] = preds.len();
            for p in preds {
                successors[p].push(i);
            }
        }
        Self { successors, predecessor_count }
    }
}

fn two_qubit_operands(g: &Gate) -> Option<(usize, usize)> {
    let mut qs = g.qubits();
    match (qs.next(), qs.next()) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    }
}

fn route_pass(
    gates: &[&Gate],
    coupling: &CouplingGraph,
    config: &SabreConfig,
    mut layout: Layout,
    rng: &mut ChaCha8Rng,
) -> PassResult {
    let p = coupling.num_physical();
    let dag = Dag::build(gates);
    let mut remaining = dag.predecessor_count.clone();
    let mut front: BTreeSet<usize> = (0..gates.len()).filter(|&i| remaining[i] == 0).collect();
    let mut out = Vec::with_capacity(gates.len());
    let mut decay = vec![1.0f64; p];
    let mut swaps = 0;
    let mut swaps_since_reset = 0;
    let mut swaps_since_progress = 0;
    let stall_limit = 10 * p.max(1);

    let dist = |layout: &Layout, (a, b): (usize, usize)| coupling.distance(layout.l2p[a], layout.l2p[b]) as f64;

    loop {
        // Release everything that can run under the current layout.
        let mut progressed = false;
        loop {
            let ready: Vec<usize> = front
                .iter()
                .copied()
                .filter(|&i| match two_qubit_operands(gates[i]) {
                    None => true,
                    Some((a, b)) => coupling.is_coupled(layout.l2p[a], layout.l2p[b]),
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            progressed = true;
            for i in ready {
                front.remove(&i);
                out.push(gates[i].remapped(|q| layout.l2p[q]));
                for &s in &dag.successors[i] {
                    remaining[s] -= 1;
                    if remaining[s] == 0 {
                        front.insert(s);
                    }
                }
            }
        }
        if front.is_empty() {
            break;
        }
        if progressed {
            decay.fill(1.0);
            swaps_since_reset = 0;
            swaps_since_progress = 0;
        }

        let front_pairs: Vec<(usize, usize)> = front.iter().filter_map(|&i| two_qubit_operands(gates[i])).collect();

        if swaps_since_progress >= stall_limit {
            // Walk the closest front gate together along a shortest path.
            let &(a, b) = front_pairs
                .iter()
                .min_by(|x, y| dist(&layout, **x).total_cmp(&dist(&layout, **y)))
                .expect("blocked front layer has a two-qubit gate");
            let path = coupling.shortest_path(layout.l2p[a], layout.l2p[b]);
            for w in path.windows(2).take(path.len() - 2) {
                out.push(Gate::swap(w[0], w[1]));
                layout.swap_physical(w[0], w[1]);
                swaps += 1;
            }
            swaps_since_progress = 0;
            decay.fill(1.0);
            continue;
        }

        let extended = extended_set(gates, &dag, &front, &remaining, config.extended_set_size);

        let mut candidates = BTreeSet::new();
        for &(a, b) in &front_pairs {
            for phys in [layout.l2p[a], layout.l2p[b]] {
                for &nb in coupling.neighbors(phys) {
                    candidates.insert((phys.min(nb), phys.max(nb)));
                }
            }
        }

        let mut best = Vec::new();
        let mut best_score = f64::INFINITY;
        for &(x, y) in &candidates {
            let mut trial = layout.clone();
            trial.swap_physical(x, y);
            let basic: f64 = front_pairs.iter().map(|&pr| dist(&trial, pr)).sum::<f64>() / front_pairs.len() as f64;
            let lookahead = if extended.is_empty() {
                0.0
            } else {
                config.extended_set_weight * extended.iter().map(|&pr| dist(&trial, pr)).sum::<f64>()
                    / extended.len() as f64
            };
            let score = decay[x].max(decay[y]) * (basic + lookahead);
            if score < best_score - 1e-10 {
                best_score = score;
                best.clear();
                best.push((x, y));
            } else if (score - best_score).abs() <= 1e-10 {
                best.push((x, y));
            }
        }
        let &(x, y) = best.choose(rng).expect("a blocked front gate always has candidate swaps");
        out.push(Gate::swap(x, y));
        layout.swap_physical(x, y);
        swaps += 1;
        swaps_since_progress += 1;
        decay[x] += config.decay_increment;
        decay[y] += config.decay_increment;
        swaps_since_reset += 1;
        if swaps_since_reset >= config.decay_reset {
            decay.fill(1.0);
            swaps_since_reset = 0;
        }
    }
    PassResult { gates: out, final_layout: layout, swaps }
}

/// Up to `limit` upcoming two-qubit gates reachable from the front layer.
fn extended_set(
    gates: &[&Gate],
    dag: &Dag,
    front: &BTreeSet<usize>,
    remaining: &[usize],
    limit: usize,
) -> Vec<(usize, usize)> {
    let mut pending: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    let mut queue: VecDeque<usize> = front.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for &s in &dag.successors[i] {
            let left = pending.entry(s).or_insert(remaining[s]);
            *left -= 1;
            if *left == 0 {
                if let Some(pair) = two_qubit_operands(gates[s]) {
                    out.push(pair);
                    if out.len() >= limit {
                        return out;
                    }
                }
                queue.push_back(s);
            }
        }
    }
    out
}

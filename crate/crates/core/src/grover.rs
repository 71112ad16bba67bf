//! Diffusion operator, iteration count and full Grover circuit assembly.

use std::f64::consts::PI;

use thiserror::Error;

use crate::circuit::{Circuit, Control, Gate, InitialState, QubitLayout};
use crate::classical::{self, ClassicalError};
use crate::graph::Instance;
use crate::oracle::{build_oracle, Oracle, OracleMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroverError {
    #[error("no solutions: the graph is not {k}-colorable")]
    NoSolutions { k: usize },
    #[error("solution count {m} exceeds search space {n}")]
    TooManySolutions { m: usize, n: usize },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

/// Inversion about the mean on `qubits`: `H X (C^{m-1} Z) X H`, equal to
/// `2|s⟩⟨s| - I` up to a global sign.
pub fn diffusion_gates(qubits: &[usize]) -> Vec<Gate> {
    assert!(!qubits.is_empty(), "diffusion needs at least one qubit");
    let (&last, rest) = qubits.split_last().unwrap();
    let mut gates: Vec<Gate> = qubits.iter().map(|&q| Gate::h(q)).collect();
    gates.extend(qubits.iter().map(|&q| Gate::x(q)));
    gates.push(Gate::mcz(rest.iter().map(|&q| Control::pos(q)), last));
    gates.extend(qubits.iter().map(|&q| Gate::x(q)));
    gates.extend(qubits.iter().map(|&q| Gate::h(q)));
    gates
}

/// A standalone diffusion circuit on `data_width` qubits.
pub fn build_diffusion(data_width: usize) -> Circuit {
    let mut c = Circuit::new(data_width);
    let qubits: Vec<usize> = (0..data_width).collect();
    for g in diffusion_gates(&qubits) {
        c.push(g);
    }
    c
}

/// `floor((pi/4) * sqrt(N/M))`.
pub fn optimal_iterations(search_space: usize, solutions: usize) -> Result<usize, GroverError> {
    if solutions == 0 {
        return Err(GroverError::NoSolutions { k: 0 });
    }
    if solutions > search_space {
        return Err(GroverError::TooManySolutions { m: solutions, n: search_space });
    }
    Ok((PI / 4.0 * (search_space as f64 / solutions as f64).sqrt()).floor() as usize)
}

/// Closed-form probability of measuring a marked state after `t` rounds.
pub fn success_probability(search_space: usize, solutions: usize, iterations: usize) -> f64 {
    let theta = (solutions as f64 / search_space as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

#[derive(Debug, Clone)]
pub struct GroverJob {
    pub circuit: Circuit,
    pub oracle: Oracle,
    pub iterations: usize,
    /// Solution count used to pick `iterations`, if it was computed.
    pub solution_count: Option<usize>,
}

impl GroverJob {
    pub fn layout(&self) -> &QubitLayout {
        self.oracle.layout()
    }

    pub fn data_width(&self) -> usize {
        self.layout().data_width()
    }
}

/// Assembles state preparation followed by `iterations` rounds of oracle and
/// diffusion. Without an explicit count, the solution count comes from
/// brute-force enumeration and the count from [`optimal_iterations`].
pub fn build_grover(
    instance: &Instance,
    mode: OracleMode,
    iterations: Option<usize>,
) -> Result<GroverJob, GroverError> {
    let oracle = build_oracle(instance, mode);
    let (iterations, solution_count) = match iterations {
        Some(t) => (t, None),
        None => {
            let sols = classical::solutions(instance)?;
            let m = sols.count();
            let t = optimal_iterations(sols.search_space, m).map_err(|_| GroverError::NoSolutions { k: instance.k })?;
            (t, Some(m))
        }
    };
    let circuit = assemble(&oracle, iterations);
    Ok(GroverJob { circuit, oracle, iterations, solution_count })
}

/// The Grover circuit for a given oracle. The result starts from all-zero
/// and prepares the declared initial values with explicit X gates.
pub fn assemble(oracle: &Oracle, iterations: usize) -> Circuit {
    let layout = oracle.layout();
    let mut c = oracle.circuit.empty_like();
    c.set_initial_state(vec![InitialState::Zero; layout.num_qubits()]);
    for (q, init) in oracle.circuit.initial_state().iter().enumerate() {
        if *init == InitialState::One {
            c.push(Gate::x(q));
        }
    }
    for q in layout.data.clone() {
        c.push(Gate::h(q));
    }
    c.push(Gate::h(layout.output));
    let data: Vec<usize> = layout.data.clone().collect();
    let diffusion = diffusion_gates(&data);
    for _ in 0..iterations {
        c.compose(&oracle.circuit).expect("oracle shares the register");
        for g in &diffusion {
            c.push(g.clone());
        }
    }
    c
}

//! Grover search circuits for graph k-coloring.
//!
//! The pipeline runs graph input, oracle synthesis, Grover assembly, lowering to
//! one- and two-qubit gates, SABRE routing and OpenQASM 2.0 emission. A
//! statevector simulator and a brute-force enumerator serve as checks.

pub mod circuit;
pub mod classical;
pub mod decompose;
pub mod graph;
pub mod grover;
pub mod oracle;
pub mod qasm;
pub mod route;
pub mod sim;

pub use circuit::{
    Circuit, CircuitError, CircuitStats, Control, Gate, GateKind, InitialState, Polarity, QubitLayout, QubitRole,
};
pub use classical::{ClassicalError, Solutions};
pub use decompose::{lower_circuit, lower_circuit_to, Basis};
pub use graph::{Graph, GraphError, Instance};
pub use grover::{build_grover, GroverError, GroverJob};
pub use oracle::{build_oracle, Oracle, OracleError, OracleMode};
pub use qasm::emit_qasm;
pub use route::{sabre_route, CouplingGraph, Mapping, RouteError, RoutedCircuit, SabreConfig};
pub use sim::{Initial, SimError, Statevector};

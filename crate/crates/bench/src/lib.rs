//! Shared fixtures for the benchmarks.

use gkc_core::{build_grover, lower_circuit, Circuit, Graph, Instance, OracleMode};

/// Named instances, smallest first.
pub fn instances() -> Vec<(&'static str, Instance)> {
    let make = |g: Graph, k| Instance::new(g, k).expect("fixture instance");
    vec![
        ("p3_k2", make(Graph::path(3).unwrap(), 2)),
        ("k3_k3", make(Graph::complete(3).unwrap(), 3)),
        ("p4_k3", make(Graph::path(4).unwrap(), 3)),
        ("k4_k4", make(Graph::complete(4).unwrap(), 4)),
    ]
}

/// The lowered Grover circuit for `instance` with the default iteration count.
pub fn lowered_grover(instance: &Instance, mode: OracleMode) -> Circuit {
    lower_circuit(&build_grover(instance, mode, None).expect("colorable fixture").circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for (name, inst) in instances() {
            assert!(!lowered_grover(&inst, OracleMode::Paper).is_empty(), "{name}");
        }
    }
}

//! Qubit and gate cost table over complete graphs.

use std::ops::RangeInclusive;

use gkc_core::decompose::{lowered_gate_count, Basis};
use gkc_core::graph::ceil_log2;
use gkc_core::oracle::plan_layout;
use gkc_core::{build_oracle, Graph, Instance, OracleMode};
use serde::Serialize;

use crate::error::CliError;

pub const MAX_VERTICES: usize = 10;
pub const DEFAULT_KS: [usize; 4] = [2, 3, 4, 8];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostRow {
    pub n: usize,
    pub k: usize,
    /// `n * ceil(log2 k)`.
    pub data_qubits: usize,
    /// One qubit per (vertex, color) pair: `n * k`.
    pub baseline_data_qubits: usize,
    pub ancilla_paper: usize,
    pub ancilla_strict: usize,
    /// `(n * k)^2`, the order of the baseline's ancilla requirement.
    pub baseline_ancilla_bound: usize,
    pub total_qubits_paper: usize,
    pub total_qubits_strict: usize,
    /// Oracle gates on `K_n` with each MCT counted once.
    pub oracle_gates_paper: usize,
    pub oracle_gates_strict: usize,
    /// Oracle gates on `K_n` after lowering to the native basis.
    pub lowered_gates_paper: usize,
    pub lowered_gates_strict: usize,
}

pub const CSV_HEADER: &str =
    "n,k,data_qubits,baseline_data_qubits,ancilla_paper,ancilla_strict,baseline_ancilla_bound,\
total_qubits_paper,total_qubits_strict,oracle_gates_paper,oracle_gates_strict,lowered_gates_paper,lowered_gates_strict";

impl CostRow {
    pub fn compute(n: usize, k: usize) -> Result<Self, CliError> {
        let inst = Instance::new(Graph::complete(n)?, k)?;
        let paper = plan_layout(&inst, OracleMode::Paper).layout;
        let strict = plan_layout(&inst, OracleMode::Strict).layout;
        let gates = |mode| {
            let oracle = build_oracle(&inst, mode);
            let lowered = oracle.circuit.gates().iter().map(|g| lowered_gate_count(g, Basis::Native)).sum();
            (oracle.circuit.len(), lowered)
        };
        let (oracle_gates_paper, lowered_gates_paper) = gates(OracleMode::Paper);
        let (oracle_gates_strict, lowered_gates_strict) = gates(OracleMode::Strict);
        Ok(Self {
            n,
            k,
            data_qubits: n * ceil_log2(k),
            baseline_data_qubits: n * k,
            ancilla_paper: paper.ancilla_count(),
            ancilla_strict: strict.ancilla_count(),
            baseline_ancilla_bound: (n * k).pow(2),
            total_qubits_paper: paper.num_qubits(),
            total_qubits_strict: strict.num_qubits(),
            oracle_gates_paper,
            oracle_gates_strict,
            lowered_gates_paper,
            lowered_gates_strict,
        })
    }

    pub fn csv_line(&self) -> String {
        [
            self.n,
            self.k,
            self.data_qubits,
            self.baseline_data_qubits,
            self.ancilla_paper,
            self.ancilla_strict,
            self.baseline_ancilla_bound,
            self.total_qubits_paper,
            self.total_qubits_strict,
            self.oracle_gates_paper,
            self.oracle_gates_strict,
            self.lowered_gates_paper,
            self.lowered_gates_strict,
        ]
        .map(|v| v.to_string())
        .join(",")
    }
}

/// Accepts `a-b`, `a..b`, `a..=b` (all inclusive) or a single count.
pub fn parse_vertex_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Input(format!("invalid vertex range {s:?} (expected e.g. 2-10)"));
    let s = s.trim();
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    if hi > MAX_VERTICES {
        return Err(CliError::Input(format!("vertex range upper bound {hi} exceeds {MAX_VERTICES}")));
    }
    Ok(lo..=hi)
}

pub fn parse_k_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|k| *k >= 2)
                .ok_or_else(|| CliError::Input(format!("invalid color count {t:?} in --k")))
        })
        .collect()
}

pub fn cost_table(vertices: RangeInclusive<usize>, ks: &[usize]) -> Result<Vec<CostRow>, CliError> {
    let mut rows = Vec::new();
    for n in vertices {
        for &k in ks {
            rows.push(CostRow::compute(n, k)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[CostRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_vertex_range("2-10").unwrap(), 2..=10);
        assert_eq!(parse_vertex_range("3..5").unwrap(), 3..=5);
        assert_eq!(parse_vertex_range("4").unwrap(), 4..=4);
        assert!(parse_vertex_range("2-11").is_err());
        assert!(parse_vertex_range("5-2").is_err());
        assert!(parse_vertex_range("x").is_err());
        assert_eq!(parse_k_list("2, 3,8").unwrap(), vec![2, 3, 8]);
        assert!(parse_k_list("1").is_err());
    }

    #[test]
    fn examples() {
        let r = CostRow::compute(3, 3).unwrap();
        assert_eq!((r.data_qubits, r.baseline_data_qubits, r.ancilla_paper), (6, 9, 4));
        assert!(r.oracle_gates_paper <= 67);
        let r = CostRow::compute(4, 3).unwrap();
        assert_eq!((r.data_qubits, r.baseline_data_qubits), (8, 12));
        let r = CostRow::compute(3, 4).unwrap();
        assert_eq!((r.data_qubits, r.baseline_data_qubits), (6, 12));
    }

    #[test]
    fn header_matches_columns() {
        let r = CostRow::compute(2, 2).unwrap();
        assert_eq!(CSV_HEADER.split(',').count(), r.csv_line().split(',').count());
    }
}

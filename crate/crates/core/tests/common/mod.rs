//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use gkc_core::{Circuit, Control, Gate, Graph, Statevector};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

pub const QELIB1: &str = include_str!("../../../../data/qelib1.inc");

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(|mask| Graph::from_edge_mask(n, mask).unwrap()).collect()
}

/// Every labelled graph with 1 to 4 vertices.
pub fn small_graphs() -> Vec<Graph> {
    (1..=4).flat_map(all_graphs).collect()
}

/// Chromatic polynomial at `k` by deletion-contraction.
pub fn chromatic_polynomial(n: usize, edges: &BTreeSet<(usize, usize)>, k: u64) -> u64 {
    let Some(&(a, b)) = edges.iter().next() else {
        return k.pow(n as u32);
    };
    let mut deleted = edges.clone();
    deleted.remove(&(a, b));
    // Contract b into a, then shift vertices above b down by one.
    let relabel = |v: usize| {
        let v = if v == b { a } else { v };
        if v > b {
            v - 1
        } else {
            v
        }
    };
    let contracted: BTreeSet<(usize, usize)> = deleted
        .iter()
        .map(|&(x, y)| (relabel(x), relabel(y)))
        .filter(|(x, y)| x != y)
        .map(|(x, y)| (x.min(y), x.max(y)))
        .collect();
    chromatic_polynomial(n, &deleted, k) - chromatic_polynomial(n - 1, &contracted, k)
}

pub fn chromatic(graph: &Graph, k: u64) -> u64 {
    chromatic_polynomial(graph.num_vertices(), &graph.edges().collect(), k)
}

/// Permutation matrix of an X on `target` conditioned on `controls`.
pub fn mct_matrix(width: usize, controls: &[Control], target: usize) -> Array2<Complex64> {
    let dim = 1 << width;
    let mut u = Array2::zeros((dim, dim));
    for j in 0..dim {
        let fires = controls.iter().all(|c| (j >> c.qubit & 1 == 1) == c.fires_on());
        let i = if fires { j ^ 1 << target } else { j };
        u[[i, j]] = Complex64::new(1.0, 0.0);
    }
    u
}

/// `2/d - delta_ij`.
pub fn diff_matrix(d: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((d, d), |(i, j)| Complex64::new(2.0 / d as f64 - if i == j { 1.0 } else { 0.0 }, 0.0))
}

pub fn flat(u: &Array2<Complex64>) -> Vec<Complex64> {
    u.iter().copied().collect()
}

pub fn random_state(rng: &mut impl Rng, width: usize) -> Statevector {
    let mut amps: Vec<Complex64> =
        (0..1 << width).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    Statevector::from_amplitudes(amps)
}

fn distinct(rng: &mut impl Rng, width: usize, count: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, width, count).into_vec()
}

/// A random gate from the one- and two-qubit alphabet.
pub fn random_elementary_gate(rng: &mut impl Rng, width: usize) -> Gate {
    let angle = rng.gen_range(-PI..PI);
    let choice = if width >= 2 { rng.gen_range(0..12) } else { rng.gen_range(0..8) };
    if choice < 8 {
        let q = rng.gen_range(0..width);
        return match choice {
            0 => Gate::x(q),
            1 => Gate::h(q),
            2 => Gate::z(q),
            3 => Gate::s(q),
            4 => Gate::t(q),
            5 => Gate::rx(q, angle),
            6 => Gate::ry(q, angle),
            _ => Gate::rz(q, angle),
        };
    }
    let qs = distinct(rng, width, 2);
    match choice {
        8 => Gate::cx(qs[0], qs[1]),
        9 => Gate::cz(qs[0], qs[1]),
        10 => Gate::crx(qs[0], qs[1], angle),
        _ => Gate::swap(qs[0], qs[1]),
    }
}

pub fn random_lowered_circuit(rng: &mut impl Rng, width: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(width);
    for _ in 0..len {
        c.append(random_elementary_gate(rng, width)).unwrap();
    }
    c
}

/// Random circuit that also contains multi-controlled gates with mixed
/// control polarities.
pub fn random_circuit(rng: &mut impl Rng, width: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let g = if width >= 3 && rng.gen_bool(0.2) {
            let arity = rng.gen_range(3..=width);
            let qs = distinct(rng, width, arity);
            let controls: Vec<Control> =
                qs[1..].iter().map(|&q| if rng.gen_bool(0.5) { Control::pos(q) } else { Control::neg(q) }).collect();
            if rng.gen_bool(0.5) {
                Gate::mct(controls, qs[0])
            } else {
                Gate::mcz(controls, qs[0])
            }
        } else {
            random_elementary_gate(rng, width)
        };
        c.append(g).unwrap();
    }
    c
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Parses and type-checks `source` with an independent OpenQASM 2.0
/// front end and returns the number of top-level gate applications.
pub fn check_qasm(source: &str) -> Result<usize, String> {
    use openqasm::{ast::Decl, ast::Stmt, parser::FilePolicy, Parser, SourceCache};
    let mut cache = SourceCache::new();
    let mut parser = Parser::new(&mut cache).with_file_policy(FilePolicy::filesystem().with_file("qelib1.inc", QELIB1));
    parser.parse_source::<&str>(source.to_string(), None);
    let program = parser.done().map_err(|e| format!("parse errors: {e:?}"))?;
    program.type_check().map_err(|e| format!("type errors: {e:?}"))?;
    Ok(program
        .decls
        .iter()
        .filter(|d| matches!(&*d.inner, Decl::Stmt(s) if matches!(&*s.inner, Stmt::Gate { .. } | Stmt::CX { .. } | Stmt::U { .. })))
        .count())
}

//! Brute-force ground truth for k-colorability.
//!
//! Bit ordering of a data bitstring: vertex 0's color first, each color most
//! significant bit first. `011000` on a triangle is the assignment (1, 2, 0).

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, Instance};
use crate::sim::bitstring;

/// Widest data register the enumeration accepts.
pub const MAX_DATA_BITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("search space of 2^{0} assignments is too large to enumerate")]
    TooLarge(usize),
}

/// True iff every color is below `k` and every edge joins different colors.
pub fn is_proper(graph: &Graph, assignment: &[usize], k: usize) -> bool {
    assert_eq!(assignment.len(), graph.num_vertices(), "one color per vertex");
    assignment.iter().all(|&c| c < k) && graph.edges().all(|(a, b)| assignment[a] != assignment[b])
}

/// Splits a packed data register value into per-vertex colors.
pub fn decode(value: usize, n: usize, bits_per_vertex: usize) -> Vec<usize> {
    let mask = (1 << bits_per_vertex) - 1;
    (0..n).map(|v| value >> ((n - 1 - v) * bits_per_vertex) & mask).collect()
}

pub fn encode(assignment: &[usize], bits_per_vertex: usize) -> usize {
    assignment.iter().fold(0, |acc, &c| acc << bits_per_vertex | c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    pub bitstrings: BTreeSet<String>,
    /// Size of the search space, `2^(n * ceil(log2 k))`.
    pub search_space: usize,
}

impl Solutions {
    pub fn count(&self) -> usize {
        self.bitstrings.len()
    }
}

/// Every data bitstring encoding a proper coloring.
pub fn solutions(instance: &Instance) -> Result<Solutions, ClassicalError> {
    let width = instance.data_width();
    if width > MAX_DATA_BITS {
        return Err(ClassicalError::TooLarge(width));
    }
    let n = instance.num_vertices();
    let c = instance.bits_per_vertex;
    let bitstrings = (0..1usize << width)
        .into_par_iter()
        .filter(|&x| is_proper(&instance.graph, &decode(x, n, c), instance.k))
        .map(|x| bitstring(x, width))
        .collect();
    Ok(Solutions { bitstrings, search_space: 1 << width })
}

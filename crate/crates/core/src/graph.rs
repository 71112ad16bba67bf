//! Input graphs and k-coloring instances.
//!
//! Two text formats are accepted: a square 0/1 adjacency matrix, and an edge
//! list with one `i j` pair per line. Vertices are 0-indexed in both.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed adjacency matrix: {0}")]
    MalformedMatrix(String),
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("malformed edge list, line {line}: {reason}")]
    MalformedEdgeList { line: usize, reason: String },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("color count must be at least 2, got {0}")]
    InvalidK(usize),
}

/// An undirected, unweighted simple graph.
///
/// Edges are stored canonically as `(i, j)` with `i < j`, in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge iterator, rejecting self-loops, duplicates
    /// (in either orientation) and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// The graph on `n` vertices whose edges are the set bits of `mask`,
    /// indexed over the lexicographic list of all vertex pairs.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self, GraphError> {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, pairs.into_iter().enumerate().filter(|(idx, _)| mask >> idx & 1 == 1).map(|(_, e)| e))
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic `(i, j)` order with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Parses a whitespace-separated 0/1 adjacency matrix, one row per line.
    /// Blank lines and `#` comments are skipped.
    #[allow(clippy::needless_range_loop)]
    pub fn parse_adjacency(text: &str) -> Result<Self, GraphError> {
        let rows: Vec<Vec<u8>> = content_lines(text)
            .map(|(_, line)| {
                line.split_whitespace()
                    .map(|tok| match tok {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        other => Err(GraphError::MalformedMatrix(format!("non-binary entry {other:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(GraphError::MalformedMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            if rows[i][i] != 0 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(GraphError::AsymmetricMatrix(i, j));
                }
                if rows[i][j] == 1 {
                    edges.push((i, j));
                }
            }
        }
        Self::new(n, edges)
    }

    /// Parses an edge list. An optional `n <count>` header fixes the vertex
    /// count; otherwise it is one past the largest endpoint.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared_n = None;
        let mut edges = Vec::new();
        for (lineno, line) in content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |reason: &str| GraphError::MalformedEdgeList { line: lineno, reason: reason.into() };
            match toks.as_slice() {
                ["n", count] if edges.is_empty() && declared_n.is_none() => {
                    declared_n = Some(count.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
                }
                [a, b] => {
                    let a = a.parse::<usize>().map_err(|_| bad("endpoint is not an integer"))?;
                    let b = b.parse::<usize>().map_err(|_| bad("endpoint is not an integer"))?;
                    edges.push((a, b));
                }
                _ => return Err(bad("expected two vertex indices")),
            }
        }
        let n = declared_n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
        Self::new(n, edges)
    }

    /// Picks the parser by file extension: `.edg` is an edge list, anything
    /// else an adjacency matrix.
    pub fn parse_by_extension(text: &str, path: &str) -> Result<Self, GraphError> {
        if path.ends_with(".edg") {
            Self::parse_edge_list(text)
        } else {
            Self::parse_adjacency(text)
        }
    }

    /// Canonical adjacency-matrix text.
    pub fn to_adjacency(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n).map(|j| if self.has_edge(i, j) { "1" } else { "0" }).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (idx, (a, b)) in self.edges().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "])")
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// A graph together with a color count `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    /// Bits per vertex, `ceil(log2 k)`.
    pub bits_per_vertex: usize,
    /// Color codes in `[k, 2^bits_per_vertex)`.
    pub invalid_colors: Vec<usize>,
}

impl Instance {
    pub fn new(graph: Graph, k: usize) -> Result<Self, GraphError> {
        if k < 2 {
            return Err(GraphError::InvalidK(k));
        }
        let bits_per_vertex = ceil_log2(k);
        let invalid_colors = (k..1 << bits_per_vertex).collect();
        Ok(Self { graph, k, bits_per_vertex, invalid_colors })
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    /// Width of the color register, `n * ceil(log2 k)`.
    pub fn data_width(&self) -> usize {
        self.graph.num_vertices() * self.bits_per_vertex
    }

    pub fn has_invalid_colors(&self) -> bool {
        !self.invalid_colors.is_empty()
    }
}

/// `ceil(log2 k)` for `k >= 1`.
pub fn ceil_log2(k: usize) -> usize {
    assert!(k >= 1);
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

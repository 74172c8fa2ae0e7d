//! Simple undirected graphs, seeded Erdős–Rényi generation and the edge-list
//! text format.
//!
//! # Random generator
//!
//! Instances are drawn with ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`. Every candidate pair `(u, v)` with `u < v` is
//! visited in lexicographic order and consumes exactly one `next_u64()` draw,
//! which is mapped to a uniform double in `[0, 1)` by taking its top 53 bits.
//! The pair becomes an edge when that double is strictly below `p`, so `p = 0`
//! never adds an edge and `p = 1` always does.

use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

/// Maximum number of draws attempted by [`erdos_renyi_connected`].
pub const CONNECTED_RETRY_CAP: u32 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("vertex count must be at least 1")]
    EmptyGraph,
    #[error("no connected sample for n = {n}, p = {p} after {attempts} draws")]
    NotConnected { n: usize, p: f64, attempts: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing vertex count")]
    MissingHeader,
    #[error("malformed line {0:?}")]
    Malformed(String),
    #[error("endpoint {vertex} out of range (n = {vertex_count})")]
    OutOfRange { vertex: usize, vertex_count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
}

/// A simple undirected graph on vertices `0..vertex_count`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted; adjacency lists are
/// sorted as well. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, collapsing duplicate edges (in either orientation).
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::from_sorted_edges(vertex_count, normalized))
    }

    fn from_sorted_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { vertex_count, edges, adjacency }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_sorted_edges(vertex_count, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_edges(n, edges)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_sorted_edges(n, edges)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`, for `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_sorted_edges(leaves + 1, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Open neighbourhood `N(v)`, sorted ascending.
    pub fn neighbors(&self, v: usize) -> Result<&[usize], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count })
    }

    /// Unchecked variant of [`Graph::neighbors`] for internal hot loops.
    pub(crate) fn adj(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Returns a copy with the extra edge `(u, v)`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        Self::new(self.vertex_count, self.edges.iter().copied().chain([(u, v)]))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        assert_eq!(perm.len(), self.vertex_count, "permutation length mismatch");
        Self::new(self.vertex_count, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Connectivity test; the graph on zero vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }

    /// Renders the edge-list format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.vertex_count, self.edges.len())
    }
}

/// Parameters and outcome of one generated benchmark instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceDescriptor {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub realized_edge_count: usize,
}

impl InstanceDescriptor {
    /// Short identifier such as `er-25-0.2-seed7`.
    pub fn label(&self) -> String {
        format!("er-{}-{}-seed{}", self.n, self.p, self.seed)
    }
}

fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_params(n: usize, p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    Ok(())
}

/// Samples `G(n, p)`; see the module docs for the exact draw order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    check_params(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if unit_interval(&mut rng) < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_edges(n, edges))
}

/// Redraws `G(n, p)` with seeds `seed, seed + 1, ...` until the sample is
/// connected, giving up after [`CONNECTED_RETRY_CAP`] draws.
pub fn erdos_renyi_connected(n: usize, p: f64, seed: u64) -> Result<(Graph, InstanceDescriptor), GraphError> {
    check_params(n, p)?;
    let mut current = seed;
    for _ in 0..CONNECTED_RETRY_CAP {
        let g = erdos_renyi(n, p, current)?;
        if g.is_connected() {
            let descriptor = InstanceDescriptor { n, p, seed: current, realized_edge_count: g.edge_count() };
            return Ok((g, descriptor));
        }
        current = current.wrapping_add(1);
    }
    Err(GraphError::NotConnected { n, p, attempts: CONNECTED_RETRY_CAP })
}

/// Parses the edge-list format: first meaningful line is the vertex count,
/// then one `u v` pair per line. Blank lines and lines starting with `#` are
/// skipped. Line numbers in errors are 1-based.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut vertex_count = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = || ParseError { line, kind: ParseErrorKind::Malformed(trimmed.to_string()) };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let Some(n) = vertex_count else {
            if tokens.len() != 1 {
                return Err(malformed());
            }
            vertex_count = Some(tokens[0].parse::<usize>().map_err(|_| malformed())?);
            continue;
        };
        if tokens.len() != 2 {
            return Err(malformed());
        }
        let u = tokens[0].parse::<usize>().map_err(|_| malformed())?;
        let v = tokens[1].parse::<usize>().map_err(|_| malformed())?;
        for w in [u, v] {
            if w >= n {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::OutOfRange { vertex: w, vertex_count: n },
                });
            }
        }
        if u == v {
            return Err(ParseError { line, kind: ParseErrorKind::SelfLoop(u) });
        }
        edges.push((u, v));
    }
    let n = vertex_count.ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingHeader })?;
    Ok(Graph::new(n, edges).expect("edges were checked while parsing"))
}

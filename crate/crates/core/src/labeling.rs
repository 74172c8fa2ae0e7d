//! Vertex labelings and the triple / quadruple Roman domination validators.
//!
//! Two independent characterizations are implemented: the explicit per-label
//! defense clauses ([`validate_3rdf`], [`validate_4rdf`]) and the general
//! `[k]`-Roman inequality over the active neighbourhood ([`validate_krdf`]).
//! They are checked against each other exhaustively in the test suite.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("protection level k = {0} is not supported here")]
    UnsupportedK(u8),
    #[error("vertex {vertex} has label {label}, above the maximum {max}")]
    LabelOutOfRange { vertex: usize, label: u8, max: u8 },
    #[error("labeling has {labels} entries but the graph has {vertices} vertices")]
    ShapeMismatch { labels: usize, vertices: usize },
    #[error("malformed label {0:?}")]
    Malformed(String),
    #[error("input is not a valid {k}RDF ({violations} violated clauses)")]
    NotValid { k: u8, violations: usize },
    #[error("rewriting vertex {0} produced an invalid labeling")]
    RewriteBroke(usize),
}

/// A labeling `f : V -> {0, ..., k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelFunction {
    labels: Vec<u8>,
    k: u8,
}

impl LabelFunction {
    pub fn new(labels: Vec<u8>, k: u8) -> Result<Self, LabelError> {
        if k == 0 {
            return Err(LabelError::UnsupportedK(k));
        }
        if let Some((vertex, &label)) = labels.iter().enumerate().find(|(_, &l)| l > k + 1) {
            return Err(LabelError::LabelOutOfRange { vertex, label, max: k + 1 });
        }
        Ok(LabelFunction { labels, k })
    }

    pub fn zeros(n: usize, k: u8) -> Self {
        LabelFunction { labels: vec![0; n], k }
    }

    /// Parses whitespace-separated labels in vertex order.
    pub fn parse(text: &str, k: u8) -> Result<Self, LabelError> {
        let labels = text
            .split_whitespace()
            .map(|tok| tok.parse::<u8>().map_err(|_| LabelError::Malformed(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(labels, k)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, v: usize) -> u8 {
        self.labels[v]
    }

    /// `w(f) = sum of all labels`.
    pub fn weight(&self) -> u64 {
        self.labels.iter().map(|&l| u64::from(l)).sum()
    }

    /// Labels moved along a vertex renaming: the result assigns `f(v)` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut labels = vec![0; self.labels.len()];
        for (v, &l) in self.labels.iter().enumerate() {
            labels[perm[v]] = l;
        }
        LabelFunction { labels, k: self.k }
    }

    fn set(&mut self, v: usize, label: u8) {
        self.labels[v] = label;
    }
}

impl fmt::Display for LabelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// `w(f)`.
pub fn weight(f: &LabelFunction) -> u64 {
    f.weight()
}

/// Which defense condition a vertex failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// The explicit condition for a vertex with the given label.
    Label(u8),
    /// `h(AN[u]) >= |AN(u)| + k`.
    ActiveNeighborhood,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Label(l) => write!(f, "f(v)={l}"),
            Clause::ActiveNeighborhood => f.write_str("AN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: usize,
    pub clause: Clause,
    pub reason: String,
}

/// Result of a validator: every failing vertex, in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failing_vertices(&self) -> Vec<usize> {
        self.violations.iter().map(|v| v.vertex).collect()
    }
}

/// Number of neighbours carrying each label, indexed by label (`0..=5`).
pub type LabelCounts = [usize; 6];

pub(crate) fn neighbor_counts(g: &Graph, labels: &[u8], v: usize) -> LabelCounts {
    let mut counts = [0; 6];
    for &u in g.adj(v) {
        counts[labels[u] as usize] += 1;
    }
    counts
}

/// Explicit triple Roman condition for a vertex labelled `label` whose
/// neighbours carry the labels tallied in `c`.
pub fn clause_holds_3(label: u8, c: &LabelCounts) -> bool {
    let at_least_2 = c[2] + c[3] + c[4];
    match label {
        0 => c[2] >= 3 || (c[3] >= 1 && at_least_2 >= 2) || c[4] >= 1,
        1 => c[2] >= 2 || c[3] + c[4] >= 1,
        2 => at_least_2 >= 1,
        _ => true,
    }
}

/// Explicit quadruple Roman condition; see [`clause_holds_3`].
pub fn clause_holds_4(label: u8, c: &LabelCounts) -> bool {
    let at_least_2 = c[2] + c[3] + c[4] + c[5];
    let at_least_3 = c[3] + c[4] + c[5];
    match label {
        0 => {
            c[5] >= 1
                || (c[4] >= 1 && at_least_2 >= 2)
                || at_least_3 >= 2
                || c[2] >= 4
                || (c[2] >= 2 && c[3] >= 1)
        }
        1 => c[4] + c[5] >= 1 || (c[3] >= 1 && at_least_2 >= 2) || c[2] >= 3,
        2 => at_least_3 >= 1 || c[2] >= 2,
        3 => at_least_2 >= 1,
        _ => true,
    }
}

pub(crate) fn clause_holds(k: u8, label: u8, c: &LabelCounts) -> bool {
    if k == 3 {
        clause_holds_3(label, c)
    } else {
        clause_holds_4(label, c)
    }
}

fn clause_reason(k: u8, label: u8) -> &'static str {
    match (k, label) {
        (3, 0) => "needs three 2-neighbours, a 3-neighbour plus another neighbour >= 2, or a 4-neighbour",
        (3, 1) => "needs two 2-neighbours or a neighbour >= 3",
        (3, 2) => "needs a neighbour >= 2",
        (4, 0) => {
            "needs a 5-neighbour, a 4 plus another >= 2, two neighbours >= 3, \
             four 2s, or two 2s and a 3"
        }
        (4, 1) => "needs a neighbour >= 4, a 3 plus another >= 2, or three 2-neighbours",
        (4, 2) => "needs a neighbour >= 3 or two 2-neighbours",
        (4, 3) => "needs a neighbour >= 2",
        _ => "no condition",
    }
}

fn check_shape(g: &Graph, f: &LabelFunction) -> Result<(), LabelError> {
    if f.len() != g.vertex_count() {
        return Err(LabelError::ShapeMismatch { labels: f.len(), vertices: g.vertex_count() });
    }
    Ok(())
}

fn validate_explicit(g: &Graph, f: &LabelFunction, k: u8) -> Result<Verdict, LabelError> {
    if f.k() != k {
        return Err(LabelError::UnsupportedK(f.k()));
    }
    check_shape(g, f)?;
    let violations = (0..g.vertex_count())
        .filter_map(|v| {
            let label = f.get(v);
            let counts = neighbor_counts(g, f.labels(), v);
            (!clause_holds(k, label, &counts)).then(|| Violation {
                vertex: v,
                clause: Clause::Label(label),
                reason: clause_reason(k, label).to_string(),
            })
        })
        .collect();
    Ok(Verdict { violations })
}

/// Checks the explicit triple Roman dominating function conditions.
pub fn validate_3rdf(g: &Graph, f: &LabelFunction) -> Result<Verdict, LabelError> {
    validate_explicit(g, f, 3)
}

/// Checks the explicit quadruple Roman dominating function conditions.
pub fn validate_4rdf(g: &Graph, f: &LabelFunction) -> Result<Verdict, LabelError> {
    validate_explicit(g, f, 4)
}

/// Dispatches to [`validate_3rdf`] or [`validate_4rdf`] on `f.k()`.
pub fn validate(g: &Graph, f: &LabelFunction) -> Result<Verdict, LabelError> {
    match f.k() {
        3 | 4 => validate_explicit(g, f, f.k()),
        other => Err(LabelError::UnsupportedK(other)),
    }
}

/// General `[k]`-Roman check: every `u` with `f(u) <= k` must satisfy
/// `f(u) + sum_{z in AN(u)} f(z) >= |AN(u)| + k`, where `AN(u)` holds the
/// neighbours of `u` with a nonzero label.
pub fn validate_krdf(g: &Graph, f: &LabelFunction, k: u8) -> Result<Verdict, LabelError> {
    if k == 0 {
        return Err(LabelError::UnsupportedK(k));
    }
    check_shape(g, f)?;
    if let Some((vertex, &label)) = f.labels().iter().enumerate().find(|(_, &l)| l > k + 1) {
        return Err(LabelError::LabelOutOfRange { vertex, label, max: k + 1 });
    }
    let mut violations = Vec::new();
    for u in 0..g.vertex_count() {
        let own = u64::from(f.get(u));
        if own > u64::from(k) {
            continue;
        }
        let (active, sum) = g
            .adj(u)
            .iter()
            .map(|&z| u64::from(f.get(z)))
            .filter(|&l| l != 0)
            .fold((0u64, 0u64), |(n, s), l| (n + 1, s + l));
        let lhs = own + sum;
        let rhs = active + u64::from(k);
        if lhs < rhs {
            violations.push(Violation {
                vertex: u,
                clause: Clause::ActiveNeighborhood,
                reason: format!("h(AN[u]) = {lhs} < |AN(u)| + k = {rhs}"),
            });
        }
    }
    Ok(Verdict { violations })
}

fn require_valid(g: &Graph, f: &LabelFunction, k: u8) -> Result<(), LabelError> {
    let verdict = validate_explicit(g, f, k)?;
    if !verdict.is_valid() {
        return Err(LabelError::NotValid { k, violations: verdict.violations.len() });
    }
    Ok(())
}

fn neighbors_with(g: &Graph, f: &LabelFunction, v: usize, label: u8) -> Vec<usize> {
    g.adj(v).iter().copied().filter(|&u| f.get(u) == label).collect()
}

fn recheck(g: &Graph, f: &LabelFunction, v: usize) -> Result<(), LabelError> {
    if validate_explicit(g, f, f.k())?.is_valid() {
        Ok(())
    } else {
        Err(LabelError::RewriteBroke(v))
    }
}

/// Removes every label 1 from a valid 3RDF without increasing its weight.
///
/// Vertices are visited in ascending order; for a 1-vertex `v` the first
/// applicable rewrite wins:
/// 1. two 2-neighbours `u < w`: `v := 0`, `u := 3`;
/// 2. a 3-neighbour `u`: `v := 0`, `u := 4`;
/// 3. a 4-neighbour: `v := 0` (weight drops by one).
pub fn eliminate_ones_3(g: &Graph, f: &LabelFunction) -> Result<LabelFunction, LabelError> {
    require_valid(g, f, 3)?;
    let mut out = f.clone();
    for v in 0..g.vertex_count() {
        if out.get(v) != 1 {
            continue;
        }
        let twos = neighbors_with(g, &out, v, 2);
        let threes = neighbors_with(g, &out, v, 3);
        if twos.len() >= 2 {
            out.set(twos[0], 3);
        } else if let Some(&u) = threes.first() {
            out.set(u, 4);
        } else {
            debug_assert!(!neighbors_with(g, &out, v, 4).is_empty());
        }
        out.set(v, 0);
        recheck(g, &out, v)?;
    }
    Ok(out)
}

/// Removes every label 1 from a valid 4RDF without increasing its weight.
///
/// Rewrites for a 1-vertex `v`, first applicable wins:
/// 1. a 5-neighbour: `v := 0`;
/// 2. a 4-neighbour `u`: `v := 0`, `u := 5`;
/// 3. a 3-neighbour and a 2-neighbour `w`: `v := 0`, `w := 3`;
/// 4. three 2-neighbours `u < w < y`: `v := 0`, `y := 3`;
/// 5. two 3-neighbours and nothing above: `v := 0` (weight drops by one).
pub fn eliminate_ones_4(g: &Graph, f: &LabelFunction) -> Result<LabelFunction, LabelError> {
    require_valid(g, f, 4)?;
    let mut out = f.clone();
    for v in 0..g.vertex_count() {
        if out.get(v) != 1 {
            continue;
        }
        let twos = neighbors_with(g, &out, v, 2);
        let threes = neighbors_with(g, &out, v, 3);
        let fours = neighbors_with(g, &out, v, 4);
        let has_five = !neighbors_with(g, &out, v, 5).is_empty();
        if !has_five {
            if let Some(&u) = fours.first() {
                out.set(u, 5);
            } else if !threes.is_empty() && !twos.is_empty() {
                out.set(twos[0], 3);
            } else if twos.len() >= 3 {
                out.set(twos[2], 3);
            } else {
                debug_assert!(threes.len() >= 2);
            }
        }
        out.set(v, 0);
        recheck(g, &out, v)?;
    }
    Ok(out)
}

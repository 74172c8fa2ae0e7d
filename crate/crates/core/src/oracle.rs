//! Exhaustive ground truth for `gamma_3R` and `gamma_4R` on small graphs.
//!
//! Labels are assigned vertex by vertex in ascending order, each vertex trying
//! its allowed labels in ascending order. Two cuts keep this tractable:
//!
//! * the partial weight already reaches the incumbent;
//! * some labelled vertex fails its defense clause even if every still
//!   unlabelled neighbour receives the top label `k + 1`. This covers the
//!   case of a vertex whose whole closed neighbourhood is labelled.
//!
//! The clauses are monotone in the neighbours' labels, so the second cut never
//! removes a completable prefix.

use thiserror::Error;

use crate::graph::Graph;
use crate::labeling::{clause_holds, LabelCounts, LabelFunction};

pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("k = {0} is not supported (expected 3 or 4)")]
    UnsupportedK(u8),
    #[error("allowed labels must contain 0 and {top}")]
    IncompleteLabels { top: u8 },
    #[error("label {label} exceeds k + 1 = {top}")]
    LabelOutOfRange { label: u8, top: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: u64,
    /// Lexicographically smallest optimal labeling.
    pub witness: LabelFunction,
    /// Search nodes visited.
    pub explored: u64,
}

/// Brute-force solver with a vertex-count cap.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Minimum weight of a `k`RDF using only `allowed` labels.
    pub fn exact_gamma(&self, g: &Graph, k: u8, allowed: &[u8]) -> Result<OracleResult, OracleError> {
        let labels = self.check(g, k, allowed)?;
        let mut search = Search::new(g, k, labels);
        search.minimize(0, 0);
        let best = search.best.expect("labelling everything k + 1 is always valid");
        Ok(OracleResult { optimum: best.weight(), witness: best, explored: search.explored })
    }

    /// Every minimum-weight labeling over the full label set, in
    /// lexicographic order.
    pub fn all_optimal(&self, g: &Graph, k: u8) -> Result<Vec<LabelFunction>, OracleError> {
        let optimum = self.exact_gamma(g, k, &full_labels(k))?.optimum;
        let mut search = Search::new(g, k, full_labels(k));
        let mut found = Vec::new();
        search.enumerate(0, 0, optimum, &mut found);
        Ok(found)
    }

    fn check(&self, g: &Graph, k: u8, allowed: &[u8]) -> Result<Vec<u8>, OracleError> {
        if k != 3 && k != 4 {
            return Err(OracleError::UnsupportedK(k));
        }
        if g.vertex_count() > self.cap {
            return Err(OracleError::TooLarge { n: g.vertex_count(), cap: self.cap });
        }
        let top = k + 1;
        if let Some(&label) = allowed.iter().find(|&&l| l > top) {
            return Err(OracleError::LabelOutOfRange { label, top });
        }
        if !allowed.contains(&0) || !allowed.contains(&top) {
            return Err(OracleError::IncompleteLabels { top });
        }
        let mut labels = allowed.to_vec();
        labels.sort_unstable();
        labels.dedup();
        Ok(labels)
    }
}

/// `{0, 1, ..., k + 1}`.
pub fn full_labels(k: u8) -> Vec<u8> {
    (0..=k + 1).collect()
}

/// `{0, 2, ..., k + 1}`: the full set minus label 1.
pub fn labels_without_one(k: u8) -> Vec<u8> {
    full_labels(k).into_iter().filter(|&l| l != 1).collect()
}

/// [`Oracle::exact_gamma`] with the default cap.
pub fn exact_gamma(g: &Graph, k: u8, allowed: &[u8]) -> Result<OracleResult, OracleError> {
    Oracle::default().exact_gamma(g, k, allowed)
}

/// [`Oracle::all_optimal`] with the default cap.
pub fn all_optimal(g: &Graph, k: u8) -> Result<Vec<LabelFunction>, OracleError> {
    Oracle::default().all_optimal(g, k)
}

struct Search<'g> {
    g: &'g Graph,
    k: u8,
    allowed: Vec<u8>,
    labels: Vec<u8>,
    best: Option<LabelFunction>,
    best_weight: u64,
    explored: u64,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: u8, allowed: Vec<u8>) -> Self {
        Search {
            g,
            k,
            allowed,
            labels: vec![0; g.vertex_count()],
            best: None,
            best_weight: u64::MAX,
            explored: 0,
        }
    }

    /// Clause of `w` with vertices `> last` treated as labelled `k + 1`.
    fn optimistic_ok(&self, w: usize, last: usize) -> bool {
        let mut counts: LabelCounts = [0; 6];
        for &u in self.g.adj(w) {
            let l = if u > last { self.k + 1 } else { self.labels[u] };
            counts[l as usize] += 1;
        }
        clause_holds(self.k, self.labels[w], &counts)
    }

    /// Re-checks the vertices whose optimistic status changed by labelling `v`.
    fn consistent_after(&self, v: usize) -> bool {
        self.optimistic_ok(v, v)
            && self.g.adj(v).iter().take_while(|&&u| u < v).all(|&u| self.optimistic_ok(u, v))
    }

    fn minimize(&mut self, v: usize, weight: u64) {
        self.explored += 1;
        if v == self.labels.len() {
            if weight < self.best_weight {
                self.best_weight = weight;
                self.best =
                    Some(LabelFunction::new(self.labels.clone(), self.k).expect("labels within range"));
            }
            return;
        }
        for i in 0..self.allowed.len() {
            let label = self.allowed[i];
            let next = weight + u64::from(label);
            if next >= self.best_weight {
                break;
            }
            self.labels[v] = label;
            if self.consistent_after(v) {
                self.minimize(v + 1, next);
            }
        }
        self.labels[v] = 0;
    }

    fn enumerate(&mut self, v: usize, weight: u64, target: u64, out: &mut Vec<LabelFunction>) {
        self.explored += 1;
        if v == self.labels.len() {
            if weight == target {
                out.push(LabelFunction::new(self.labels.clone(), self.k).expect("labels within range"));
            }
            return;
        }
        for i in 0..self.allowed.len() {
            let label = self.allowed[i];
            let next = weight + u64::from(label);
            if next > target {
                break;
            }
            self.labels[v] = label;
            if self.consistent_after(v) {
                self.enumerate(v + 1, next, target, out);
            }
        }
        self.labels[v] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::validate;

    fn lf(labels: &[u8], k: u8) -> LabelFunction {
        LabelFunction::new(labels.to_vec(), k).unwrap()
    }

    #[test]
    fn small_optima() {
        let r = exact_gamma(&Graph::complete(2), 3, &full_labels(3)).unwrap();
        assert_eq!(r.optimum, 4);
        assert_eq!(r.witness, lf(&[0, 4], 3));
        assert_eq!(exact_gamma(&Graph::cycle(4), 3, &full_labels(3)).unwrap().optimum, 6);
        let star = exact_gamma(&Graph::star(3), 4, &full_labels(4)).unwrap();
        assert_eq!(star.optimum, 5);
        assert_eq!(star.witness, lf(&[5, 0, 0, 0], 4));
        let p3 = exact_gamma(&Graph::path(3), 3, &full_labels(3)).unwrap();
        assert_eq!(p3.optimum, 4);
        assert_eq!(p3.witness, lf(&[0, 4, 0], 3));
    }

    #[test]
    fn all_optimal_examples() {
        // (1,3) and (2,2) are valid as well: a 1 next to a 3, two adjacent 2s.
        let k2 = Graph::complete(2);
        let expected: Vec<_> = [[0, 4], [1, 3], [2, 2], [3, 1], [4, 0]].iter().map(|l| lf(l, 3)).collect();
        assert_eq!(all_optimal(&k2, 3).unwrap(), expected);
        assert_eq!(all_optimal(&Graph::empty(1), 3).unwrap(), vec![lf(&[3], 3)]);
        let expected: Vec<_> =
            [[0, 5], [1, 4], [2, 3], [3, 2], [4, 1], [5, 0]].iter().map(|l| lf(l, 4)).collect();
        assert_eq!(all_optimal(&k2, 4).unwrap(), expected);
    }

    #[test]
    fn witnesses_validate() {
        for g in [Graph::cycle(5), Graph::path(6), Graph::star(4), Graph::complete(5)] {
            for k in [3, 4] {
                let r = exact_gamma(&g, k, &full_labels(k)).unwrap();
                assert!(validate(&g, &r.witness).unwrap().is_valid());
                assert_eq!(r.witness.weight(), r.optimum);
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let g = Graph::path(3);
        assert_eq!(exact_gamma(&g, 3, &[0, 1, 2, 3]), Err(OracleError::IncompleteLabels { top: 4 }));
        assert_eq!(exact_gamma(&g, 3, &[1, 2, 3, 4]), Err(OracleError::IncompleteLabels { top: 4 }));
        assert_eq!(exact_gamma(&g, 5, &[0, 6]), Err(OracleError::UnsupportedK(5)));
        assert_eq!(exact_gamma(&g, 3, &[0, 4, 5]), Err(OracleError::LabelOutOfRange { label: 5, top: 4 }));
        assert_eq!(
            exact_gamma(&Graph::path(13), 3, &full_labels(3)),
            Err(OracleError::TooLarge { n: 13, cap: 12 })
        );
        assert!(Oracle::with_cap(2).exact_gamma(&g, 3, &full_labels(3)).is_err());
    }

    #[test]
    fn restricted_label_sets() {
        // Only {0, 4}: plain domination scaled by 4.
        let r = exact_gamma(&Graph::path(5), 3, &[0, 4]).unwrap();
        assert_eq!(r.optimum, 8);
        assert_eq!(exact_gamma(&Graph::cycle(4), 3, &labels_without_one(3)).unwrap().optimum, 6);
    }

    #[test]
    fn cap_twelve_is_tractable() {
        let r = exact_gamma(&Graph::cycle(12), 4, &full_labels(4)).unwrap();
        assert!(r.explored > 0);
        assert!(validate(&Graph::cycle(12), &r.witness).unwrap().is_valid());
    }
}

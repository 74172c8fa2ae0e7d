use crate::graph::Graph;
use crate::labeling::LabelFunction;

use super::{
    Assignment, Coef, Fidelity, IlpModel, ModelError, ModelId, ModelMetadata, Sense, VarId, VarKind, VarRole,
};

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Emit M3RDP-3's `3c` row with `<=` as printed instead of the `>=` it
    /// carries over from M3RDP-2.
    pub literal_3c: bool,
    /// Graph description stored in the model metadata.
    pub graph_label: Option<String>,
}

/// Builds `id` over `g` with default options.
pub fn build(g: &Graph, id: ModelId) -> Result<IlpModel, ModelError> {
    build_with(g, id, &BuildOptions::default())
}

pub fn build_with(g: &Graph, id: ModelId, opts: &BuildOptions) -> Result<IlpModel, ModelError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ModelError::EmptyGraph);
    }
    let metadata = ModelMetadata {
        id,
        fidelity: if id.is_active_neighborhood() { Fidelity::Corrected } else { Fidelity::Faithful },
        graph: opts.graph_label.clone().unwrap_or_else(|| format!("n{}-m{}", n, g.edge_count())),
        vertex_count: n,
    };
    let mut b = Builder::new(g, IlpModel::new(metadata), layout(id));
    match id {
        ModelId::M3Rdp1 | ModelId::M3Rdp2 | ModelId::M3Rdp3 => b.triple(id, opts.literal_3c),
        ModelId::M4Rdp1 | ModelId::M4Rdp2 | ModelId::M4Rdp3 => b.quadruple(id),
        ModelId::M3RdpAn | ModelId::M4RdpAn => b.active_neighborhood(id.k()),
    }
    Ok(b.model)
}

/// Variables declared per vertex, in declaration order.
fn layout(id: ModelId) -> Vec<(VarKind, VarRole)> {
    use VarKind::*;
    let label = |kind, value| (kind, VarRole::Label(value));
    let ind = |kind| (kind, VarRole::Indicator);
    match id {
        ModelId::M3Rdp1 => vec![label(P, 1), label(Q, 2), label(R, 3), label(S, 4), ind(T), ind(X)],
        ModelId::M3Rdp2 | ModelId::M3Rdp3 => {
            vec![label(Q, 2), label(R, 3), label(S, 4), ind(T), ind(X)]
        }
        ModelId::M4Rdp1 => vec![
            label(P, 1),
            label(Q, 2),
            label(R, 3),
            label(S, 4),
            label(T, 5),
            ind(X),
            ind(Y),
            ind(Z),
            ind(A),
        ],
        ModelId::M4Rdp2 | ModelId::M4Rdp3 => {
            vec![label(Q, 2), label(R, 3), label(S, 4), label(T, 5), ind(X), ind(Y), ind(Z), ind(A)]
        }
        ModelId::M3RdpAn => vec![label(Q, 2), label(R, 3), label(S, 4)],
        ModelId::M4RdpAn => vec![label(Q, 2), label(R, 3), label(S, 4), label(T, 5)],
    }
}

/// For an indicator: the neighbour label it watches and how many such
/// neighbours it stands for.
fn indicator_condition(k: u8, kind: VarKind) -> (u8, usize) {
    match (k, kind) {
        (3, VarKind::T) => (2, 1),
        (3, VarKind::X) => (3, 1),
        (4, VarKind::X) => (2, 1),
        (4, VarKind::Y) => (3, 1),
        (4, VarKind::Z) => (4, 1),
        (4, VarKind::A) => (2, 2),
        _ => unreachable!("{kind:?} is not an indicator for k = {k}"),
    }
}

fn c(n: i64, d: i64) -> Coef {
    Coef::new(n, d)
}

struct Builder<'g> {
    g: &'g Graph,
    model: IlpModel,
    /// `ids[v][slot]` for the layout slots.
    ids: Vec<Vec<(VarKind, VarId)>>,
}

impl<'g> Builder<'g> {
    fn new(g: &'g Graph, mut model: IlpModel, layout: Vec<(VarKind, VarRole)>) -> Self {
        let ids = (0..g.vertex_count())
            .map(|v| layout.iter().map(|&(kind, role)| (kind, model.add_variable(kind, v, role))).collect())
            .collect();
        let mut b = Builder { g, model, ids };
        b.objective();
        b
    }

    fn var(&self, kind: VarKind, v: usize) -> VarId {
        self.ids[v].iter().find(|(k, _)| *k == kind).map(|&(_, id)| id).expect("kind in layout")
    }

    fn has(&self, kind: VarKind) -> bool {
        self.ids[0].iter().any(|(k, _)| *k == kind)
    }

    fn objective(&mut self) {
        let mut objective = Vec::new();
        for v in 0..self.g.vertex_count() {
            for &(_, id) in &self.ids[v] {
                if let VarRole::Label(value) = self.model.variable(id).role {
                    objective.push((Coef::from_integer(i64::from(value)), id));
                }
            }
        }
        self.model.objective = objective;
    }

    /// `coef * x_u` for every neighbour `u` of `v`.
    fn nsum(&self, kind: VarKind, v: usize, coef: Coef) -> Vec<(Coef, VarId)> {
        self.g.adj(v).iter().map(|&u| (coef, self.var(kind, u))).collect()
    }

    fn own(&self, kinds: &[VarKind], v: usize, coef: Coef) -> Vec<(Coef, VarId)> {
        kinds.iter().filter(|&&k| self.has(k)).map(|&k| (coef, self.var(k, v))).collect()
    }

    fn row(&mut self, terms: Vec<(Coef, VarId)>, sense: Sense, rhs: i64, tag: &str, v: usize) {
        self.model.add_constraint(terms, sense, Coef::from_integer(rhs), format!("{tag}@v{v}"));
    }

    /// `indicator - sum <= 0` (with `2 * a` for the "two 2-neighbours" one).
    fn link(&mut self, v: usize, indicator: VarKind, watched: VarKind, weight: i64) {
        let mut terms = vec![(Coef::from_integer(weight), self.var(indicator, v))];
        terms.extend(self.nsum(watched, v, c(-1, 1)));
        let tag = format!("link-{}", indicator.letter());
        self.row(terms, Sense::Le, 0, &tag, v);
    }

    fn triple(&mut self, id: ModelId, literal_3c: bool) {
        use VarKind::*;
        let (cover, q_row, amo) = match id {
            ModelId::M3Rdp1 => ("1b", "1d", "1e"),
            ModelId::M3Rdp2 => ("2b", "2c", "2d"),
            _ => ("3b", "3c", ""),
        };
        for v in 0..self.g.vertex_count() {
            let mut t = self.own(&[P, Q, R, S], v, c(1, 1));
            t.extend(self.nsum(S, v, c(1, 1)));
            t.extend(self.nsum(Q, v, c(1, 3)));
            t.push((c(1, 2), self.var(T, v)));
            t.push((c(1, 2), self.var(X, v)));
            self.row(t, Sense::Ge, 1, cover, v);

            if id == ModelId::M3Rdp1 {
                let mut t = self.nsum(Q, v, c(1, 2));
                t.extend(self.nsum(S, v, c(1, 1)));
                t.extend(self.nsum(R, v, c(1, 1)));
                t.push((c(-1, 1), self.var(P, v)));
                self.row(t, Sense::Ge, 0, "1c", v);
            }

            let mut t = Vec::new();
            for kind in [Q, R, S] {
                t.extend(self.nsum(kind, v, c(1, 1)));
            }
            t.push((c(-1, 1), self.var(Q, v)));
            let sense = if id == ModelId::M3Rdp3 && literal_3c { Sense::Le } else { Sense::Ge };
            self.row(t, sense, 0, q_row, v);

            if id.has_at_most_one() {
                let t = self.own(&[P, Q, R, S], v, c(1, 1));
                self.row(t, Sense::Le, 1, amo, v);
            }

            self.link(v, T, Q, 1);
            self.link(v, X, R, 1);
        }
    }

    fn quadruple(&mut self, id: ModelId) {
        use VarKind::*;
        let (cover, q_row, r_row, amo) = match id {
            ModelId::M4Rdp1 => ("4b", "4d", "4e", "4f"),
            ModelId::M4Rdp2 => ("5b", "5c", "5d", "5e"),
            _ => ("6b", "6c", "6d", ""),
        };
        let half = c(1, 2);
        for v in 0..self.g.vertex_count() {
            let mut t = self.own(&[P, Q, R, S, T], v, c(1, 1));
            t.extend(self.nsum(T, v, c(1, 1)));
            // (x + z)/2 + (z + y)/2 + (a + y)/2
            for kind in [X, Z, Z, Y, A, Y] {
                t.push((half, self.var(kind, v)));
            }
            t.extend(self.nsum(S, v, half));
            t.extend(self.nsum(R, v, half));
            t.extend(self.nsum(Q, v, c(1, 4)));
            self.row(t, Sense::Ge, 1, cover, v);

            if id == ModelId::M4Rdp1 {
                let mut t = self.nsum(T, v, c(1, 1));
                t.extend(self.nsum(S, v, c(1, 1)));
                t.push((half, self.var(Y, v)));
                t.push((half, self.var(X, v)));
                t.extend(self.nsum(R, v, half));
                t.extend(self.nsum(Q, v, c(1, 3)));
                t.push((c(-1, 1), self.var(P, v)));
                self.row(t, Sense::Ge, 0, "4c", v);
            }

            let mut t = Vec::new();
            for kind in [T, S, R] {
                t.extend(self.nsum(kind, v, c(1, 1)));
            }
            t.extend(self.nsum(Q, v, half));
            t.push((c(-1, 1), self.var(Q, v)));
            self.row(t, Sense::Ge, 0, q_row, v);

            let mut t = Vec::new();
            for kind in [T, S, Q, R] {
                t.extend(self.nsum(kind, v, c(1, 1)));
            }
            t.push((c(-1, 1), self.var(R, v)));
            self.row(t, Sense::Ge, 0, r_row, v);

            if id.has_at_most_one() {
                let t = self.own(&[P, Q, R, S, T], v, c(1, 1));
                self.row(t, Sense::Le, 1, amo, v);
            }

            self.link(v, X, Q, 1);
            self.link(v, Y, R, 1);
            self.link(v, Z, S, 1);
            self.link(v, A, Q, 2);
        }
    }

    /// `sum_{u in N(v)} (label(u) - 1) + min(label(v), k) >= k`, label 1 omitted.
    fn active_neighborhood(&mut self, k: u8) {
        let k = i64::from(k);
        for v in 0..self.g.vertex_count() {
            let slots = self.ids[v].clone();
            let mut t = Vec::new();
            for &(kind, id) in &slots {
                let VarRole::Label(value) = self.model.variable(id).role else { continue };
                let value = i64::from(value);
                t.extend(self.nsum(kind, v, Coef::from_integer(value - 1)));
                t.push((Coef::from_integer(value.min(k)), id));
            }
            self.row(t, Sense::Ge, k, "an", v);
            let t = slots.iter().map(|&(_, id)| (c(1, 1), id)).collect();
            self.row(t, Sense::Le, 1, "amo", v);
        }
    }
}

/// The 0/1 point a labeling corresponds to: label variables from `f`,
/// indicators set exactly when their defining condition holds.
pub fn encode_labeling(g: &Graph, m: &IlpModel, f: &LabelFunction) -> Result<Assignment, ModelError> {
    let n = m.metadata.vertex_count;
    if f.len() != n || g.vertex_count() != n {
        return Err(ModelError::ShapeMismatch { labels: f.len(), vertices: n });
    }
    let k = m.metadata.id.k();
    let mut assignment = Assignment::zeros(m.var_count());
    let mut modelled = vec![false; n];
    for (i, var) in m.variables.iter().enumerate() {
        let value = match var.role {
            VarRole::Label(label) => {
                let hit = f.get(var.vertex) == label;
                modelled[var.vertex] |= hit;
                hit
            }
            VarRole::Indicator => {
                let (watched, needed) = indicator_condition(k, var.kind);
                g.adj(var.vertex).iter().filter(|&&u| f.get(u) == watched).count() >= needed
            }
        };
        assignment.set(VarId(i), value);
    }
    if let Some(vertex) = (0..n).find(|&v| f.get(v) != 0 && !modelled[v]) {
        return Err(ModelError::LabelNotModelled { vertex, label: f.get(vertex), model: m.metadata.id });
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::validate_3rdf;
    use crate::model::{decode_solution, integerize};

    fn lf(labels: &[u8], k: u8) -> LabelFunction {
        LabelFunction::new(labels.to_vec(), k).unwrap()
    }

    #[test]
    fn variable_counts() {
        let g = crate::graph::erdos_renyi(7, 0.4, 3).unwrap();
        let n = 7;
        let m = build(&g, ModelId::M3Rdp1).unwrap();
        assert_eq!(m.label_var_count(), 4 * n);
        assert_eq!(m.var_count(), 6 * n);
        let m = build(&g, ModelId::M3Rdp2).unwrap();
        assert_eq!(m.label_var_count(), 3 * n);
        assert_eq!(m.var_count(), 5 * n);
        assert_eq!(build(&g, ModelId::M4Rdp1).unwrap().label_var_count(), 5 * n);
        assert_eq!(build(&g, ModelId::M4Rdp2).unwrap().label_var_count(), 4 * n);
        assert_eq!(build(&g, ModelId::M4Rdp3).unwrap().var_count(), 8 * n);
    }

    #[test]
    fn printed_constraint_counts() {
        let g = crate::graph::erdos_renyi(9, 0.5, 11).unwrap();
        let expected = [
            (ModelId::M3Rdp1, 5),
            (ModelId::M3Rdp2, 4),
            (ModelId::M3Rdp3, 3),
            (ModelId::M4Rdp1, 6),
            (ModelId::M4Rdp2, 5),
            (ModelId::M4Rdp3, 4),
        ];
        for (id, per_vertex) in expected {
            let m = build(&g, id).unwrap();
            assert_eq!(m.formulation_constraint_count(), per_vertex * 9, "{id}");
        }
    }

    #[test]
    fn active_neighborhood_shape() {
        let m = build(&Graph::cycle(4), ModelId::M3RdpAn).unwrap();
        assert_eq!(m.var_count(), 12);
        assert_eq!(m.constraints.len(), 8);
        assert_eq!(m.metadata.fidelity, Fidelity::Corrected);
        let row = &m.constraints[0];
        assert_eq!(row.tag, "an@v0");
        // q0 r0 s0 then neighbours 1 and 3.
        let coefs: Vec<i64> = row.terms.iter().map(|(c, _)| c.to_integer()).collect();
        assert_eq!(coefs, vec![2, 3, 3, 1, 2, 3, 1, 2, 3]);
        assert_eq!(row.rhs, Coef::from_integer(3));

        let m4 = build(&Graph::complete(2), ModelId::M4RdpAn).unwrap();
        let coefs: Vec<i64> = m4.constraints[0].terms.iter().map(|(c, _)| c.to_integer()).collect();
        assert_eq!(coefs, vec![2, 3, 4, 4, 1, 2, 3, 4]);
    }

    #[test]
    fn objective_uses_label_values() {
        let m = build(&Graph::path(2), ModelId::M4Rdp1).unwrap();
        let coefs: Vec<i64> = m.objective.iter().map(|(c, _)| c.to_integer()).collect();
        assert_eq!(coefs, vec![1, 2, 3, 4, 5, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn literal_3c_flag() {
        let g = Graph::path(3);
        let opts = BuildOptions { literal_3c: true, graph_label: Some("p3".into()) };
        let m = build_with(&g, ModelId::M3Rdp3, &opts).unwrap();
        let row = m.constraints.iter().find(|c| c.tag == "3c@v1").unwrap();
        assert_eq!(row.sense, Sense::Le);
        assert_eq!(m.metadata.graph, "p3");
        let m = build(&g, ModelId::M3Rdp3).unwrap();
        assert_eq!(m.constraints.iter().find(|c| c.tag == "3c@v1").unwrap().sense, Sense::Ge);
        assert!(build(&Graph::empty(0), ModelId::M3Rdp1).is_err());
    }

    #[test]
    fn c4_two_two_two_zero_gap() {
        let g = Graph::cycle(4);
        let m = build(&g, ModelId::M3Rdp2).unwrap();
        let f = lf(&[2, 2, 2, 0], 3);
        let a = encode_labeling(&g, &m, &f).unwrap();
        assert!(m.violated_rows(&a).is_empty());
        assert!(integerize(&m).violated_rows(&a).is_empty());
        assert!(!validate_3rdf(&g, &f).unwrap().is_valid());
        let exact = build(&g, ModelId::M3RdpAn).unwrap();
        let a = encode_labeling(&g, &exact, &f).unwrap();
        assert_eq!(exact.violated_rows(&a), vec!["an@v3".to_string()]);
    }

    #[test]
    fn two_threes_rejected_by_faithful_cover_row() {
        // Valid 3RDF (each 0-vertex sees two 3s) that the printed 2b row misses.
        let g = Graph::cycle(4);
        let f = lf(&[3, 0, 3, 0], 3);
        assert!(validate_3rdf(&g, &f).unwrap().is_valid());
        let m = build(&g, ModelId::M3Rdp2).unwrap();
        let a = encode_labeling(&g, &m, &f).unwrap();
        assert_eq!(m.violated_rows(&a), vec!["2b@v1".to_string(), "2b@v3".to_string()]);
    }

    #[test]
    fn encode_round_trips_through_decode() {
        let g = Graph::star(3);
        let m = build(&g, ModelId::M4Rdp2).unwrap();
        let f = lf(&[4, 0, 0, 0], 4);
        let a = encode_labeling(&g, &m, &f).unwrap();
        assert_eq!(decode_solution(&m, &a).unwrap().labels, f);
        assert!(a.get(m.find(VarKind::Z, 1).unwrap()));
        assert!(!a.get(m.find(VarKind::Z, 0).unwrap()));
        assert!(matches!(
            encode_labeling(&g, &m, &lf(&[1, 0, 0, 0], 4)),
            Err(ModelError::LabelNotModelled { vertex: 0, label: 1, .. })
        ));
        assert!(encode_labeling(&g, &m, &lf(&[1, 0], 4)).is_err());
    }
}

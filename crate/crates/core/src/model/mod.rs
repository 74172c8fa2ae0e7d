//! A small 0/1 integer program representation, with exact rational
//! coefficients, plus builders for the triple and quadruple Roman domination
//! formulations.

mod build;
mod lp;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::labeling::LabelFunction;

pub use build::{build, build_with, encode_labeling, BuildOptions};
pub use lp::export_lp;

/// Exact coefficient type.
pub type Coef = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("cannot build a model for the empty graph")]
    EmptyGraph,
    #[error("unknown model id {0:?}")]
    UnknownModel(String),
    #[error("unknown fidelity {0:?}")]
    UnknownFidelity(String),
    #[error("assignment is missing variable {0}")]
    MissingVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("labeling has {labels} entries but the model covers {vertices} vertices")]
    ShapeMismatch { labels: usize, vertices: usize },
    #[error("label {label} at vertex {vertex} has no variable in {model}")]
    LabelNotModelled { vertex: usize, label: u8, model: ModelId },
}

/// The formulations this crate can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    M3Rdp1,
    M3Rdp2,
    M3Rdp3,
    M4Rdp1,
    M4Rdp2,
    M4Rdp3,
    /// Exact active-neighbourhood model for `k = 3`.
    M3RdpAn,
    /// Exact active-neighbourhood model for `k = 4`.
    M4RdpAn,
}

impl ModelId {
    pub const ALL: [ModelId; 8] = [
        ModelId::M3Rdp1,
        ModelId::M3Rdp2,
        ModelId::M3Rdp3,
        ModelId::M4Rdp1,
        ModelId::M4Rdp2,
        ModelId::M4Rdp3,
        ModelId::M3RdpAn,
        ModelId::M4RdpAn,
    ];

    /// Protection level of the problem the model encodes.
    pub fn k(self) -> u8 {
        match self {
            ModelId::M3Rdp1 | ModelId::M3Rdp2 | ModelId::M3Rdp3 | ModelId::M3RdpAn => 3,
            _ => 4,
        }
    }

    pub fn is_active_neighborhood(self) -> bool {
        matches!(self, ModelId::M3RdpAn | ModelId::M4RdpAn)
    }

    /// The exact model for the same problem.
    pub fn corrected(self) -> ModelId {
        if self.k() == 3 {
            ModelId::M3RdpAn
        } else {
            ModelId::M4RdpAn
        }
    }

    /// Whether the model keeps the one-label-per-vertex row.
    pub fn has_at_most_one(self) -> bool {
        !matches!(self, ModelId::M3Rdp3 | ModelId::M4Rdp3)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelId::M3Rdp1 => "M3RDP1",
            ModelId::M3Rdp2 => "M3RDP2",
            ModelId::M3Rdp3 => "M3RDP3",
            ModelId::M4Rdp1 => "M4RDP1",
            ModelId::M4Rdp2 => "M4RDP2",
            ModelId::M4Rdp3 => "M4RDP3",
            ModelId::M3RdpAn => "M3RDP_AN",
            ModelId::M4RdpAn => "M4RDP_AN",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = ModelError;

    /// Accepts `M3RDP2`, `m3rdp-2`, `M3RDP_AN`, `m4rdp-an` and similar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String =
            s.chars().filter(|c| !matches!(c, '-' | '_')).collect::<String>().to_ascii_uppercase();
        ModelId::ALL
            .into_iter()
            .find(|id| id.name().replace('_', "") == key)
            .ok_or_else(|| ModelError::UnknownModel(s.to_string()))
    }
}

/// Faithful models reproduce the printed formulations; corrected means the
/// exact active-neighbourhood model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fidelity {
    Faithful,
    Corrected,
}

impl Fidelity {
    /// The model actually built when `id` is requested at this fidelity.
    pub fn resolve(self, id: ModelId) -> ModelId {
        match self {
            Fidelity::Faithful => id,
            Fidelity::Corrected => id.corrected(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fidelity::Faithful => "faithful",
            Fidelity::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fidelity {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "faithful" => Ok(Fidelity::Faithful),
            "corrected" => Ok(Fidelity::Corrected),
            _ => Err(ModelError::UnknownFidelity(s.to_string())),
        }
    }
}

/// Variable letter. Whether a letter is a label or an indicator depends on
/// the model family: `t` is "label 5" in the quadruple models but
/// "has a 2-neighbour" in the triple ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    P,
    Q,
    R,
    S,
    T,
    X,
    Y,
    Z,
    A,
}

impl VarKind {
    pub fn letter(self) -> char {
        match self {
            VarKind::P => 'p',
            VarKind::Q => 'q',
            VarKind::R => 'r',
            VarKind::S => 's',
            VarKind::T => 't',
            VarKind::X => 'x',
            VarKind::Y => 'y',
            VarKind::Z => 'z',
            VarKind::A => 'a',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// Set iff the vertex carries this label.
    Label(u8),
    /// Side condition on the neighbourhood.
    Indicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// A binary decision variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub kind: VarKind,
    pub vertex: usize,
    pub role: VarRole,
}

impl Variable {
    /// LP name, e.g. `q3`.
    pub fn name(&self) -> String {
        format!("{}{}", self.kind.letter(), self.vertex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    /// Terms sorted by variable id, one per variable, no zero coefficients.
    pub terms: Vec<(Coef, VarId)>,
    pub sense: Sense,
    pub rhs: Coef,
    /// Clause identifier such as `1b@v3` or `link-t@v0`.
    pub tag: String,
}

impl LinearConstraint {
    /// Rows that tie an indicator to the sum it stands for.
    pub fn is_linking(&self) -> bool {
        self.tag.starts_with("link-")
    }

    pub fn lhs(&self, assignment: &Assignment) -> Coef {
        self.terms
            .iter()
            .filter(|(_, v)| assignment.get(*v))
            .fold(Coef::from_integer(0), |acc, (c, _)| acc + c)
    }

    pub fn is_satisfied(&self, assignment: &Assignment) -> bool {
        let lhs = self.lhs(assignment);
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }

    /// Scales by the LCM of all denominators, then divides by the GCD of the
    /// resulting integers.
    pub fn integerized(&self) -> LinearConstraint {
        let denominators = self.terms.iter().map(|(c, _)| *c.denom()).chain([*self.rhs.denom()]);
        let lcm = denominators.fold(1i64, |acc, d| acc.lcm(&d));
        let scaled: Vec<i64> = self.terms.iter().map(|(c, _)| (c * lcm).to_integer()).collect();
        let rhs = (self.rhs * lcm).to_integer();
        let gcd = scaled.iter().chain([&rhs]).fold(0i64, |acc, x| acc.gcd(x)).max(1);
        LinearConstraint {
            terms: scaled
                .into_iter()
                .zip(&self.terms)
                .map(|(c, (_, v))| (Coef::from_integer(c / gcd), *v))
                .collect(),
            sense: self.sense,
            rhs: Coef::from_integer(rhs / gcd),
            tag: self.tag.clone(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.rhs.is_integer() && self.terms.iter().all(|(c, _)| c.is_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMetadata {
    pub id: ModelId,
    pub fidelity: Fidelity,
    /// Free-form description of the source graph, e.g. `er-25-0.2-seed7`.
    pub graph: String,
    pub vertex_count: usize,
}

/// A minimization problem over binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub variables: Vec<Variable>,
    pub objective: Vec<(Coef, VarId)>,
    pub constraints: Vec<LinearConstraint>,
    pub metadata: ModelMetadata,
}

impl IlpModel {
    /// An empty model, mostly useful for hand-built test instances.
    pub fn new(metadata: ModelMetadata) -> Self {
        IlpModel { variables: Vec::new(), objective: Vec::new(), constraints: Vec::new(), metadata }
    }

    pub fn add_variable(&mut self, kind: VarKind, vertex: usize, role: VarRole) -> VarId {
        self.variables.push(Variable { kind, vertex, role });
        VarId(self.variables.len() - 1)
    }

    /// Adds a row, merging repeated variables and dropping zero terms.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (Coef, VarId)>,
        sense: Sense,
        rhs: Coef,
        tag: impl Into<String>,
    ) {
        let mut merged: Vec<(Coef, VarId)> = Vec::new();
        let mut sorted: Vec<(Coef, VarId)> = terms.into_iter().collect();
        sorted.sort_by_key(|&(_, v)| v);
        for (c, v) in sorted {
            match merged.last_mut() {
                Some((acc, last)) if *last == v => *acc += c,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(c, _)| *c != Coef::from_integer(0));
        self.constraints.push(LinearConstraint { terms: merged, sense, rhs, tag: tag.into() });
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn find(&self, kind: VarKind, vertex: usize) -> Option<VarId> {
        self.variables.iter().position(|v| v.kind == kind && v.vertex == vertex).map(VarId)
    }

    pub fn find_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name() == name).map(VarId)
    }

    /// Number of label variables (the "decision variables" the formulations
    /// count), excluding indicators.
    pub fn label_var_count(&self) -> usize {
        self.variables.iter().filter(|v| matches!(v.role, VarRole::Label(_))).count()
    }

    /// Row count under the printed convention: every non-linking row plus one
    /// integrality declaration per vertex.
    pub fn formulation_constraint_count(&self) -> usize {
        self.constraints.iter().filter(|c| !c.is_linking()).count() + self.metadata.vertex_count
    }

    pub fn is_integral(&self) -> bool {
        self.constraints.iter().all(LinearConstraint::is_integral)
            && self.objective.iter().all(|(c, _)| c.is_integer())
    }

    /// Objective value of an assignment.
    pub fn objective_value(&self, assignment: &Assignment) -> Coef {
        self.objective
            .iter()
            .filter(|(_, v)| assignment.get(*v))
            .fold(Coef::from_integer(0), |acc, (c, _)| acc + c)
    }

    /// Tags of all rows the assignment violates, in row order.
    pub fn violated_rows(&self, assignment: &Assignment) -> Vec<String> {
        self.constraints.iter().filter(|c| !c.is_satisfied(assignment)).map(|c| c.tag.clone()).collect()
    }
}

/// Integer-coefficient copy of the model with the same feasible set.
pub fn integerize(m: &IlpModel) -> IlpModel {
    IlpModel { constraints: m.constraints.iter().map(LinearConstraint::integerized).collect(), ..m.clone() }
}

/// A 0/1 value for every variable of a model, indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn zeros(len: usize) -> Self {
        Assignment(vec![false; len])
    }

    pub fn from_values(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    /// Builds an assignment from `(name, value)` pairs; every model variable
    /// must be named exactly once.
    pub fn from_named<'a>(
        m: &IlpModel,
        values: impl IntoIterator<Item = (&'a str, bool)>,
    ) -> Result<Self, ModelError> {
        let mut out: Vec<Option<bool>> = vec![None; m.var_count()];
        for (name, value) in values {
            let id = m.find_by_name(name).ok_or_else(|| ModelError::UnknownVariable(name.into()))?;
            out[id.0] = Some(value);
        }
        out.iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ModelError::MissingVariable(m.variables[i].name())))
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VarId) -> bool {
        self.0[v.0]
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.0[v.0] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}

/// Labeling recovered from a solver assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub labels: LabelFunction,
    /// Vertices with more than one label variable set; these take the highest
    /// such label.
    pub multi_set: Vec<usize>,
}

impl Decoded {
    pub fn is_multi_set(&self) -> bool {
        !self.multi_set.is_empty()
    }
}

/// `f(v) = sum of label * x` over the vertex's label variables, taking the
/// highest set label when several are set.
pub fn decode_solution(m: &IlpModel, assignment: &Assignment) -> Result<Decoded, ModelError> {
    if assignment.len() < m.var_count() {
        return Err(ModelError::MissingVariable(m.variables[assignment.len()].name()));
    }
    let n = m.metadata.vertex_count;
    let mut labels = vec![0u8; n];
    let mut set_count = vec![0usize; n];
    for (i, var) in m.variables.iter().enumerate() {
        if let VarRole::Label(value) = var.role {
            if assignment.get(VarId(i)) {
                labels[var.vertex] = labels[var.vertex].max(value);
                set_count[var.vertex] += 1;
            }
        }
    }
    let multi_set: BTreeSet<usize> =
        set_count.iter().enumerate().filter(|(_, &c)| c > 1).map(|(v, _)| v).collect();
    let labels = LabelFunction::new(labels, m.metadata.id.k()).expect("labels come from the model");
    Ok(Decoded { labels, multi_set: multi_set.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn r(n: i64, d: i64) -> Coef {
        Coef::new(n, d)
    }

    fn metadata(n: usize) -> ModelMetadata {
        ModelMetadata {
            id: ModelId::M3RdpAn,
            fidelity: Fidelity::Corrected,
            graph: "test".into(),
            vertex_count: n,
        }
    }

    #[test]
    fn model_id_parsing() {
        assert_eq!("M3RDP2".parse::<ModelId>().unwrap(), ModelId::M3Rdp2);
        assert_eq!("m4rdp-3".parse::<ModelId>().unwrap(), ModelId::M4Rdp3);
        assert_eq!("M3RDP_AN".parse::<ModelId>().unwrap(), ModelId::M3RdpAn);
        assert_eq!("m4rdp-an".parse::<ModelId>().unwrap(), ModelId::M4RdpAn);
        assert!("M5RDP1".parse::<ModelId>().is_err());
        for id in ModelId::ALL {
            assert_eq!(id.name().parse::<ModelId>().unwrap(), id);
        }
        assert_eq!(Fidelity::Corrected.resolve(ModelId::M4Rdp2), ModelId::M4RdpAn);
        assert_eq!(Fidelity::Faithful.resolve(ModelId::M4Rdp2), ModelId::M4Rdp2);
    }

    #[test]
    fn integerize_eq_1b_coefficients() {
        let mut m = IlpModel::new(metadata(1));
        let vars: Vec<VarId> = [VarKind::Q, VarKind::R, VarKind::S, VarKind::T]
            .map(|k| m.add_variable(k, 0, VarRole::Indicator))
            .to_vec();
        m.add_constraint(
            [(r(1, 1), vars[0]), (r(1, 1), vars[1]), (r(1, 3), vars[2]), (r(1, 2), vars[3])],
            Sense::Ge,
            r(1, 1),
            "1b@v0",
        );
        let row = &integerize(&m).constraints[0];
        let coefs: Vec<i64> = row.terms.iter().map(|(c, _)| c.to_integer()).collect();
        assert_eq!(coefs, vec![6, 6, 2, 3]);
        assert_eq!(row.rhs, r(6, 1));
    }

    #[test]
    fn integerize_normalizes_gcd_and_quarters() {
        let mut m = IlpModel::new(metadata(1));
        let a = m.add_variable(VarKind::Q, 0, VarRole::Indicator);
        let b = m.add_variable(VarKind::R, 0, VarRole::Indicator);
        m.add_constraint([(r(2, 1), a), (r(4, 1), b)], Sense::Le, r(6, 1), "even");
        m.add_constraint([(r(1, 4), a), (r(1, 2), b)], Sense::Ge, r(1, 1), "quarters");
        m.add_constraint([(r(3, 1), a)], Sense::Ge, r(0, 1), "zero-rhs");
        let out = integerize(&m);
        assert_eq!(out.constraints[0].terms[0].0, r(1, 1));
        assert_eq!(out.constraints[0].terms[1].0, r(2, 1));
        assert_eq!(out.constraints[0].rhs, r(3, 1));
        assert_eq!(out.constraints[1].terms[0].0, r(1, 1));
        assert_eq!(out.constraints[1].terms[1].0, r(2, 1));
        assert_eq!(out.constraints[1].rhs, r(4, 1));
        assert_eq!(out.constraints[2].terms[0].0, r(1, 1));
        assert!(out.is_integral());
        assert!(!m.is_integral());
    }

    #[test]
    fn add_constraint_merges_terms() {
        let mut m = IlpModel::new(metadata(1));
        let z = m.add_variable(VarKind::Z, 0, VarRole::Indicator);
        let y = m.add_variable(VarKind::Y, 0, VarRole::Indicator);
        m.add_constraint(
            [(r(1, 2), y), (r(1, 2), z), (r(1, 2), z), (r(1, 2), y), (r(0, 1), y)],
            Sense::Ge,
            r(1, 1),
            "merge",
        );
        assert_eq!(m.constraints[0].terms, vec![(r(1, 1), z), (r(1, 1), y)]);
    }

    #[test]
    fn decode_examples() {
        let g = Graph::complete(2);
        let m = build(&g, ModelId::M3RdpAn).unwrap();
        let mut a = Assignment::zeros(m.var_count());
        a.set(m.find(VarKind::S, 0).unwrap(), true);
        let d = decode_solution(&m, &a).unwrap();
        assert_eq!(d.labels.labels(), &[4, 0]);
        assert!(!d.is_multi_set());

        let zero = decode_solution(&m, &Assignment::zeros(m.var_count())).unwrap();
        assert_eq!(zero.labels.weight(), 0);

        let relaxed = build(&g, ModelId::M3Rdp3).unwrap();
        let mut a = Assignment::zeros(relaxed.var_count());
        a.set(relaxed.find(VarKind::Q, 1).unwrap(), true);
        a.set(relaxed.find(VarKind::R, 1).unwrap(), true);
        let d = decode_solution(&relaxed, &a).unwrap();
        assert_eq!(d.labels.labels(), &[0, 3]);
        assert_eq!(d.multi_set, vec![1]);

        assert_eq!(decode_solution(&m, &Assignment::zeros(2)), Err(ModelError::MissingVariable("s0".into())));
    }

    #[test]
    fn named_assignments() {
        let m = build(&Graph::empty(1), ModelId::M3RdpAn).unwrap();
        let a = Assignment::from_named(&m, [("q0", false), ("r0", true), ("s0", false)]).unwrap();
        assert!(a.get(m.find(VarKind::R, 0).unwrap()));
        assert_eq!(
            Assignment::from_named(&m, [("q0", false)]),
            Err(ModelError::MissingVariable("r0".into()))
        );
        assert_eq!(
            Assignment::from_named(&m, [("w0", false)]),
            Err(ModelError::UnknownVariable("w0".into()))
        );
    }
}

//! Exact depth-first branch and bound for [`IlpModel`]s over binary variables.
//!
//! Rows are normalized to `sum a_j x_j >= b` with integer coefficients. For
//! every row the solver tracks the contribution of variables fixed to one and
//! the total positive coefficient still free, which gives the largest value the
//! left-hand side can reach. A row whose largest value falls below `b` is a
//! conflict; a free variable whose coefficient exceeds the row's slack is
//! forced (to one when positive, to zero when negative).
//!
//! Objective costs are non-negative, so the cost of the variables fixed to one
//! is a lower bound on every completion. Any free variable whose cost alone
//! would reach the incumbent is fixed to zero, and nodes whose bound reaches the
//! incumbent are cut. On top of that a lower bound sums, over rows with
//! pairwise disjoint free variables, the cheapest fractional way to cover each
//! row's remaining demand.
//!
//! Each node branches inside the unmet row with the least slack (lowest index
//! on ties), on its free variable that comes first in a static order:
//! descending objective coefficient, then ascending vertex, then declaration
//! order. The value one is tried first. Once every row is met by the variables
//! fixed to one, the rest are set to zero and the node becomes a leaf. The
//! traversal, and hence the optimum reported, is fully deterministic.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{Assignment, IlpModel, Sense};

/// How often (in nodes) the time budget is checked.
const BUDGET_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("time budget must be positive, got {0} s")]
    InvalidBudget(f64),
    #[error("row {0} has a fractional coefficient; integerize the model first")]
    NotIntegral(String),
    #[error("objective coefficient of {0} is not a non-negative integer")]
    BadObjective(String),
    #[error("coefficient overflow in row {0}")]
    Overflow(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    TimedOut,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: Status,
    /// Optimal value, or the incumbent's value after a timeout.
    pub objective: Option<i64>,
    pub assignment: Option<Assignment>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub feasible: bool,
    pub violated: Vec<String>,
}

/// Evaluates every row exactly and lists the tags of violated ones.
pub fn verify(m: &IlpModel, assignment: &Assignment) -> Verification {
    let violated = m.violated_rows(assignment);
    Verification { feasible: violated.is_empty(), violated }
}

/// Solves `m` to optimality or until `budget_seconds` elapse.
pub fn solve(m: &IlpModel, budget_seconds: f64) -> Result<Solution, SolveError> {
    if budget_seconds.is_nan() || budget_seconds <= 0.0 || !budget_seconds.is_finite() {
        return Err(SolveError::InvalidBudget(budget_seconds));
    }
    let budget = Duration::from_secs_f64(budget_seconds);
    let start = Instant::now();
    let problem = Problem::from_model(m)?;
    let mut search = Search::new(&problem, start, budget);
    search.run();

    let wall_time = start.elapsed();
    let incumbent = search.best.map(|values| {
        (search.best_cost, Assignment::from_values(values.into_iter().map(|v| v == 1).collect()))
    });
    let status = match (search.aborted, &incumbent) {
        (true, _) => Status::TimedOut,
        (false, Some(_)) => Status::Optimal,
        (false, None) => Status::Infeasible,
    };
    let (objective, assignment) = match incumbent {
        Some((cost, a)) => (Some(cost), Some(a)),
        None => (None, None),
    };
    if let (Status::Optimal, Some(a)) = (status, &assignment) {
        debug_assert!(verify(m, a).feasible, "solver returned an infeasible optimum");
    }
    Ok(Solution { status, objective, assignment, nodes_explored: search.nodes, wall_time })
}

/// A `>=` row over variable indices with integer coefficients.
#[derive(Debug, Clone)]
struct Row {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

#[derive(Debug)]
struct Problem {
    costs: Vec<i64>,
    rows: Vec<Row>,
    /// `(row, coefficient)` for each variable.
    occurrences: Vec<Vec<(usize, i64)>>,
    /// Static priority order.
    order: Vec<usize>,
    /// Position of each variable in `order`.
    rank: Vec<usize>,
}

impl Problem {
    fn from_model(m: &IlpModel) -> Result<Self, SolveError> {
        let n = m.var_count();
        let mut costs = vec![0i64; n];
        for (c, v) in &m.objective {
            let name = || m.variable(*v).name();
            if !c.is_integer() || *c.numer() < 0 {
                return Err(SolveError::BadObjective(name()));
            }
            costs[v.0] =
                costs[v.0].checked_add(c.to_integer()).ok_or_else(|| SolveError::Overflow(name()))?;
        }
        let mut rows = Vec::new();
        for c in &m.constraints {
            if !c.is_integral() {
                return Err(SolveError::NotIntegral(c.tag.clone()));
            }
            let terms: Vec<(usize, i64)> = c.terms.iter().map(|(a, v)| (v.0, a.to_integer())).collect();
            let rhs = c.rhs.to_integer();
            let negated = || Row { terms: terms.iter().map(|&(v, a)| (v, -a)).collect(), rhs: -rhs };
            match c.sense {
                Sense::Ge => rows.push(Row { terms: terms.clone(), rhs }),
                Sense::Le => rows.push(negated()),
                Sense::Eq => {
                    rows.push(Row { terms: terms.clone(), rhs });
                    rows.push(negated());
                }
            }
        }
        let mut occurrences = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(v, a) in &row.terms {
                occurrences[v].push((r, a));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(costs[i]), m.variables[i].vertex, i));
        let mut rank = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        Ok(Problem { costs, rows, occurrences, order, rank })
    }
}

const FREE: i8 = -1;

struct Search<'p> {
    p: &'p Problem,
    values: Vec<i8>,
    trail: Vec<usize>,
    /// Sum of coefficients of variables fixed to one, per row.
    fixed: Vec<i64>,
    /// Sum of positive coefficients of free variables, per row.
    free_pos: Vec<i64>,
    fixed_cost: i64,
    queue: Vec<usize>,
    queued: Vec<bool>,
    best: Option<Vec<i8>>,
    best_cost: i64,
    nodes: u64,
    start: Instant,
    budget: Duration,
    aborted: bool,
    /// Scratch marks for the disjoint-row bound.
    claimed: Vec<u32>,
    stamp: u32,
}

impl<'p> Search<'p> {
    fn new(p: &'p Problem, start: Instant, budget: Duration) -> Self {
        let free_pos = p.rows.iter().map(|r| r.terms.iter().map(|&(_, a)| a.max(0)).sum()).collect();
        Search {
            p,
            values: vec![FREE; p.costs.len()],
            trail: Vec::new(),
            fixed: vec![0; p.rows.len()],
            free_pos,
            fixed_cost: 0,
            queue: (0..p.rows.len()).collect(),
            queued: vec![true; p.rows.len()],
            best: None,
            best_cost: i64::MAX,
            nodes: 0,
            start,
            budget,
            aborted: false,
            claimed: vec![0; p.costs.len()],
            stamp: 0,
        }
    }

    fn run(&mut self) {
        if self.propagate() {
            self.dfs();
        }
    }

    fn assign(&mut self, var: usize, value: i8) {
        debug_assert_eq!(self.values[var], FREE);
        self.values[var] = value;
        self.trail.push(var);
        if value == 1 {
            self.fixed_cost += self.p.costs[var];
        }
        for &(r, a) in &self.p.occurrences[var] {
            if a > 0 {
                self.free_pos[r] -= a;
            }
            if value == 1 {
                self.fixed[r] += a;
            }
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail above mark");
            let value = self.values[var];
            self.values[var] = FREE;
            if value == 1 {
                self.fixed_cost -= self.p.costs[var];
            }
            for &(r, a) in &self.p.occurrences[var] {
                if a > 0 {
                    self.free_pos[r] += a;
                }
                if value == 1 {
                    self.fixed[r] -= a;
                }
            }
        }
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    /// Row propagation to a fixpoint; false on conflict.
    fn propagate_rows(&mut self) -> bool {
        let p = self.p;
        while let Some(r) = self.queue.pop() {
            self.queued[r] = false;
            let row = &p.rows[r];
            let slack = self.fixed[r] + self.free_pos[r] - row.rhs;
            if slack < 0 {
                self.clear_queue();
                return false;
            }
            for &(var, a) in &row.terms {
                if self.values[var] != FREE || a.abs() <= slack {
                    continue;
                }
                self.assign(var, if a > 0 { 1 } else { 0 });
            }
        }
        true
    }

    /// Row and objective propagation; false when the node can be discarded.
    fn propagate(&mut self) -> bool {
        loop {
            if !self.propagate_rows() {
                return false;
            }
            let gap = self.best_cost.saturating_sub(self.fixed_cost);
            if gap <= 0 {
                return false;
            }
            let mut changed = false;
            for idx in 0..self.p.order.len() {
                let var = self.p.order[idx];
                if self.p.costs[var] < gap {
                    break;
                }
                if self.values[var] == FREE {
                    self.assign(var, 0);
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Sum over rows with disjoint free supports of the cheapest fractional
    /// cover of each row's unmet demand.
    fn row_bound(&mut self) -> i64 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.claimed.iter_mut().for_each(|c| *c = 0);
            self.stamp = 1;
        }
        let p = self.p;
        let mut total = 0i64;
        for (r, row) in p.rows.iter().enumerate() {
            let demand = row.rhs - self.fixed[r];
            if demand <= 0 {
                continue;
            }
            // cheapest cost per unit of coverage, as a fraction cost/coef
            let mut best: Option<(i64, i64)> = None;
            let mut overlaps = false;
            for &(var, a) in &row.terms {
                if a <= 0 || self.values[var] != FREE {
                    continue;
                }
                if self.claimed[var] == self.stamp {
                    overlaps = true;
                    break;
                }
                let cost = p.costs[var];
                if best.is_none_or(|(bc, ba)| cost * ba < bc * a) {
                    best = Some((cost, a));
                }
            }
            let Some((cost, a)) = best else { continue };
            if overlaps || cost == 0 {
                continue;
            }
            for &(var, a) in &row.terms {
                if a > 0 && self.values[var] == FREE {
                    self.claimed[var] = self.stamp;
                }
            }
            // ceil(demand * cost / a)
            total += (demand * cost + a - 1) / a;
        }
        total
    }

    /// A free variable of the tightest unmet row, or `None` once every row is
    /// met by the variables already fixed to one.
    fn next_branch_var(&self) -> Option<usize> {
        let p = self.p;
        let mut tightest: Option<(i64, usize)> = None;
        for (r, row) in p.rows.iter().enumerate() {
            if row.rhs - self.fixed[r] <= 0 {
                continue;
            }
            let slack = self.fixed[r] + self.free_pos[r] - row.rhs;
            if tightest.is_none_or(|(s, _)| slack < s) {
                tightest = Some((slack, r));
            }
        }
        let (_, r) = tightest?;
        p.rows[r]
            .terms
            .iter()
            .filter(|&&(v, a)| a > 0 && self.values[v] == FREE)
            .map(|&(v, _)| v)
            .min_by_key(|&v| p.rank[v])
    }

    fn out_of_time(&mut self) -> bool {
        if self.nodes % BUDGET_CHECK_INTERVAL == 1 && self.start.elapsed() > self.budget {
            self.aborted = true;
        }
        self.aborted
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.out_of_time() {
            return;
        }
        let Some(var) = self.next_branch_var() else {
            // every row is met with the remaining free variables at zero
            self.best_cost = self.fixed_cost;
            self.best = Some(self.values.iter().map(|&x| x.max(0)).collect());
            return;
        };
        if self.best.is_some() && self.fixed_cost + self.row_bound() >= self.best_cost {
            return;
        }
        for value in [1, 0] {
            let mark = self.trail.len();
            self.assign(var, value);
            if self.propagate() {
                self.dfs();
            } else {
                self.clear_queue();
            }
            self.undo_to(mark);
            if self.aborted {
                return;
            }
        }
    }
}

//! The dynamic program: walks an irredundant clique-width expression
//! top-down over `(local ordering, activation-from-outside)` states,
//! memoizing the minimal target-set size per `(node, state)` pair.
//!
//! Join nodes filter states through the niceness check and adjust credits,
//! union nodes try every order-preserving split of the ordering, relabel
//! nodes try every way of undoing the relabel inside the ordering, and
//! leaves pay 1 exactly when their credit does not cover their threshold.

mod state;
mod transfer;

pub use state::{Afo, LocalOrdering, State};
pub use transfer::{
    enumerate_completions, enumerate_relabel_states, enumerate_union_splits, eta_transform_afo,
    is_nice_local,
};

use std::collections::HashMap;
use std::ops::Add;

use thiserror::Error;

use crate::cwexpr::{check_irredundant, node_stats, CwExpr, ExprError, Node, NodeId, NodeStats};
use crate::graph::{ThresholdMap, VertexSet};

/// A target-set size, with an explicit absorbing infinity for states no
/// global ordering can realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(u32),
    Infinite,
}

impl Add for Value {
    type Output = Value;

    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Finite(k) => write!(f, "{k}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("state budget of {budget} exceeded{}", node_suffix(.node))]
    StateBudgetExceeded { budget: usize, node: Option<String> },
    #[error("expression is not irredundant: the join at {path} re-adds existing edges")]
    RedundantExpression { path: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(
        "solver parameters too large: width {width} with t_max {t_max} \
             does not fit the state encoding (width * (t_max + 1) must be <= 255)"
    )]
    ParametersTooLarge { width: u32, t_max: u32 },
    #[error("relabel node reached with tuples of the relabeled-away label still present")]
    InvalidRelabelState,
    #[error("no activating ordering exists for this instance")]
    NoSolution,
    #[error("internal inconsistency during witness reconstruction: {0}")]
    ReconstructionFailed(String),
}

fn node_suffix(node: &Option<String>) -> String {
    match node {
        Some(n) => format!(" while expanding {n}"),
        None => String::new(),
    }
}

/// Counts every materialized state (enumerated or memoized) against a cap.
#[derive(Debug)]
pub struct BudgetGuard {
    limit: usize,
    used: usize,
}

impl BudgetGuard {
    pub fn new(limit: usize) -> Self {
        BudgetGuard { limit, used: 0 }
    }

    pub fn charge(&mut self, amount: usize) -> Result<(), SolveError> {
        self.used += amount;
        if self.used > self.limit {
            Err(SolveError::StateBudgetExceeded {
                budget: self.limit,
                node: None,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> usize {
        self.used
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Cap on materialized states (memo entries plus enumerator output).
    pub max_states: usize,
    /// Discard non-nice orderings at join nodes. Disabling this explores a
    /// superset of states; it exists for the cross-check that the discard
    /// never changes the optimum.
    pub nice_filter: bool,
    /// Disable to recompute every state from scratch (cross-checks only).
    pub use_memo: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_states: 50_000_000,
            nice_filter: true,
            use_memo: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub min_target_size: u32,
    /// Distinct `(node, state)` pairs evaluated and memoized.
    pub states_expanded: usize,
}

/// Minimum target-set size of the graph described by `expr`.
pub fn solve(
    expr: &CwExpr,
    thr: &ThresholdMap,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolveError> {
    let mut solver = Solver::new(expr, thr, opts.clone())?;
    let value = solver.solve()?;
    match value {
        Value::Finite(k) => Ok(SolveOutcome {
            min_target_size: k,
            states_expanded: solver.states_expanded(),
        }),
        Value::Infinite => Err(SolveError::NoSolution),
    }
}

/// Like [`solve`], and additionally assembles a minimum target set by
/// following one optimal choice per memo entry down to the leaves.
pub fn solve_with_witness(
    expr: &CwExpr,
    thr: &ThresholdMap,
    opts: &SolveOptions,
) -> Result<(SolveOutcome, VertexSet), SolveError> {
    let mut solver = Solver::new(expr, thr, opts.clone())?;
    let value = solver.solve()?;
    let Value::Finite(k) = value else {
        return Err(SolveError::NoSolution);
    };
    let witness = solver.reconstruct()?;
    debug_assert_eq!(witness.len() as u32, k);
    Ok((
        SolveOutcome {
            min_target_size: k,
            states_expanded: solver.states_expanded(),
        },
        witness,
    ))
}

/// One solving context: owns the memo tables and the state budget.
pub struct Solver<'a> {
    expr: &'a CwExpr,
    thr: &'a ThresholdMap,
    stats: NodeStats,
    opts: SolveOptions,
    /// Minimal value per complete state, one map per node.
    memo: Vec<HashMap<Vec<u8>, Value>>,
    /// Minimum over all completions of a starred state, one map per node.
    completion_memo: Vec<HashMap<Vec<u8>, Value>>,
    budget: BudgetGuard,
}

impl<'a> Solver<'a> {
    pub fn new(
        expr: &'a CwExpr,
        thr: &'a ThresholdMap,
        opts: SolveOptions,
    ) -> Result<Self, SolveError> {
        let stats = node_stats(expr, thr)?;
        if (expr.width() as u64) * (thr.t_max() as u64 + 1) > 255 || expr.width() > 255 {
            return Err(SolveError::ParametersTooLarge {
                width: expr.width(),
                t_max: thr.t_max(),
            });
        }
        if let Some(&bad) = check_irredundant(expr).first() {
            return Err(SolveError::RedundantExpression {
                path: expr.node_path(bad),
            });
        }
        let budget = BudgetGuard::new(opts.max_states);
        let n = expr.len();
        Ok(Solver {
            expr,
            thr,
            stats,
            opts,
            memo: vec![HashMap::new(); n],
            completion_memo: vec![HashMap::new(); n],
            budget,
        })
    }

    pub fn stats(&self) -> &NodeStats {
        &self.stats
    }

    /// Distinct `(node, state)` entries evaluated so far.
    pub fn states_expanded(&self) -> usize {
        self.memo.iter().map(HashMap::len).sum()
    }

    fn root_star(&self) -> State {
        State {
            ordering: LocalOrdering::default(),
            afo: Afo::zeros(0, self.stats.labset(self.expr.root())),
        }
    }

    /// Minimum over all complete root states with zero outside credit.
    pub fn solve(&mut self) -> Result<Value, SolveError> {
        let star = self.root_star();
        self.completions_min(self.expr.root(), &star, None)
    }

    /// Minimum over the completions of a possibly incomplete state.
    fn completions_min(
        &mut self,
        node: NodeId,
        starred: &State,
        merged: Option<(crate::cwexpr::LabelId, crate::cwexpr::LabelId)>,
    ) -> Result<Value, SolveError> {
        let key = starred.encode();
        if self.opts.use_memo {
            if let Some(&v) = self.completion_memo[node.0 as usize].get(&key) {
                return Ok(v);
            }
        }
        let states = self.complete(node, starred, merged)?;
        let mut best = Value::Infinite;
        for st in &states {
            best = best.min(self.solve_node(node, st)?);
        }
        if self.opts.use_memo {
            self.charge_at(node, 1)?;
            self.completion_memo[node.0 as usize].insert(key, best);
        }
        Ok(best)
    }

    fn complete(
        &mut self,
        node: NodeId,
        starred: &State,
        merged: Option<(crate::cwexpr::LabelId, crate::cwexpr::LabelId)>,
    ) -> Result<Vec<State>, SolveError> {
        enumerate_completions(
            node,
            &self.stats,
            &starred.ordering,
            &starred.afo,
            merged,
            &mut self.budget,
        )
        .map_err(|e| self.name_node(e, node))
    }

    /// Value of a complete state at a node.
    pub fn solve_node(&mut self, node: NodeId, state: &State) -> Result<Value, SolveError> {
        debug_assert_eq!(
            state
                .afo
                .by_label
                .iter()
                .map(|&(l, _)| l)
                .collect::<Vec<_>>(),
            self.stats.labset(node),
            "credit domain must be exactly the node's label set"
        );
        debug_assert_eq!(state.afo.by_pos.len(), state.ordering.len());
        let key = state.encode();
        if self.opts.use_memo {
            if let Some(&v) = self.memo[node.0 as usize].get(&key) {
                return Ok(v);
            }
        }
        let value = match *self.expr.node(node) {
            Node::Vertex { ext_id, label } => {
                let thr_v = self.thr.get(CwExpr::internal_vertex(ext_id));
                if state.ordering.tuples.as_slice() == [(label, thr_v)] {
                    if state.afo.position_value(1) >= thr_v {
                        Value::Finite(0)
                    } else {
                        Value::Finite(1)
                    }
                } else {
                    Value::Infinite
                }
            }
            Node::Eta { a, b, child } => {
                if self.opts.nice_filter && !is_nice_local(&state.ordering, a, b, &self.stats, node)
                {
                    Value::Infinite
                } else {
                    let child_state = self.eta_child_state(state, a, b, child);
                    self.solve_node(child, &child_state)?
                }
            }
            Node::Union { left, right } => {
                let splits = self.split(state, node, left, right)?;
                let mut best = Value::Infinite;
                for (s1, s2) in &splits {
                    let v1 = self.completions_min(left, s1, None)?;
                    if v1 == Value::Infinite {
                        continue;
                    }
                    let v2 = self.completions_min(right, s2, None)?;
                    best = best.min(v1 + v2);
                }
                best
            }
            Node::Rho { from, to, child } => {
                let starred = self.relabel(state, node, from, to, child)?;
                let mut best = Value::Infinite;
                for s in &starred {
                    best = best.min(self.completions_min(child, s, Some((from, to)))?);
                }
                best
            }
        };
        if self.opts.use_memo {
            self.charge_at(node, 1)?;
            self.memo[node.0 as usize].insert(key, value);
        }
        Ok(value)
    }

    fn eta_child_state(
        &self,
        state: &State,
        a: crate::cwexpr::LabelId,
        b: crate::cwexpr::LabelId,
        child: NodeId,
    ) -> State {
        let transformed = eta_transform_afo(&state.ordering, &state.afo, a, b, self.stats.t_max());
        State {
            ordering: state.ordering.clone(),
            afo: transformed.restricted_to(self.stats.labset(child)),
        }
    }

    fn split(
        &mut self,
        state: &State,
        node: NodeId,
        left: NodeId,
        right: NodeId,
    ) -> Result<Vec<(State, State)>, SolveError> {
        enumerate_union_splits(
            state,
            left,
            right,
            self.stats.labset(left),
            self.stats.labset(right),
            &self.stats,
            &mut self.budget,
        )
        .map_err(|e| self.name_node(e, node))
    }

    fn relabel(
        &mut self,
        state: &State,
        node: NodeId,
        from: crate::cwexpr::LabelId,
        to: crate::cwexpr::LabelId,
        child: NodeId,
    ) -> Result<Vec<State>, SolveError> {
        enumerate_relabel_states(
            state,
            from,
            to,
            child,
            self.stats.labset(child),
            &self.stats,
            &mut self.budget,
        )
        .map_err(|e| self.name_node(e, node))
    }

    fn charge_at(&mut self, node: NodeId, amount: usize) -> Result<(), SolveError> {
        self.budget
            .charge(amount)
            .map_err(|e| self.name_node(e, node))
    }

    fn name_node(&self, e: SolveError, node: NodeId) -> SolveError {
        match e {
            SolveError::StateBudgetExceeded { budget, node: None } => {
                SolveError::StateBudgetExceeded {
                    budget,
                    node: Some(self.describe(node)),
                }
            }
            other => other,
        }
    }

    fn describe(&self, node: NodeId) -> String {
        let kind = match *self.expr.node(node) {
            Node::Vertex { ext_id, label } => {
                format!("v {} {}", ext_id, self.expr.label_name(label))
            }
            Node::Union { .. } => "u".to_string(),
            Node::Eta { a, b, .. } => {
                format!(
                    "eta {} {}",
                    self.expr.label_name(a),
                    self.expr.label_name(b)
                )
            }
            Node::Rho { from, to, .. } => {
                format!(
                    "rho {} {}",
                    self.expr.label_name(from),
                    self.expr.label_name(to)
                )
            }
        };
        format!("node #{} ({kind}) at {}", node.0, self.expr.node_path(node))
    }

    /// Rebuilds a minimum target set by retracing one optimal choice per
    /// node, charging the leaves that pay for themselves. Requires a prior
    /// successful [`Solver::solve`] on this context.
    pub fn reconstruct(&mut self) -> Result<VertexSet, SolveError> {
        let star = self.root_star();
        let total = self.completions_min(self.expr.root(), &star, None)?;
        let Value::Finite(_) = total else {
            return Err(SolveError::NoSolution);
        };
        let root_state = self.argmin_completion(self.expr.root(), &star, None, total)?;
        let mut witness = VertexSet::new();
        self.walk(self.expr.root(), &root_state, total, &mut witness)?;
        Ok(witness)
    }

    fn argmin_completion(
        &mut self,
        node: NodeId,
        starred: &State,
        merged: Option<(crate::cwexpr::LabelId, crate::cwexpr::LabelId)>,
        target: Value,
    ) -> Result<State, SolveError> {
        let states = self.complete(node, starred, merged)?;
        for st in states {
            if self.solve_node(node, &st)? == target {
                return Ok(st);
            }
        }
        Err(SolveError::ReconstructionFailed(format!(
            "no completion of {} reaches {target}",
            self.describe(node)
        )))
    }

    fn walk(
        &mut self,
        node: NodeId,
        state: &State,
        value: Value,
        witness: &mut VertexSet,
    ) -> Result<(), SolveError> {
        match *self.expr.node(node) {
            Node::Vertex { ext_id, .. } => {
                if value == Value::Finite(1) {
                    witness.insert(CwExpr::internal_vertex(ext_id));
                }
                Ok(())
            }
            Node::Eta { a, b, child } => {
                let child_state = self.eta_child_state(state, a, b, child);
                self.walk(child, &child_state, value, witness)
            }
            Node::Union { left, right } => {
                let splits = self.split(state, node, left, right)?;
                for (s1, s2) in &splits {
                    let v1 = self.completions_min(left, s1, None)?;
                    if v1 == Value::Infinite {
                        continue;
                    }
                    let v2 = self.completions_min(right, s2, None)?;
                    if v1 + v2 == value {
                        let c1 = self.argmin_completion(left, s1, None, v1)?;
                        self.walk(left, &c1, v1, witness)?;
                        let c2 = self.argmin_completion(right, s2, None, v2)?;
                        return self.walk(right, &c2, v2, witness);
                    }
                }
                Err(SolveError::ReconstructionFailed(format!(
                    "no split of {} adds up to {value}",
                    self.describe(node)
                )))
            }
            Node::Rho { from, to, child } => {
                let starred = self.relabel(state, node, from, to, child)?;
                for s in &starred {
                    if self.completions_min(child, s, Some((from, to)))? == value {
                        let c = self.argmin_completion(child, s, Some((from, to)), value)?;
                        return self.walk(child, &c, value, witness);
                    }
                }
                Err(SolveError::ReconstructionFailed(format!(
                    "no relabel choice at {} reaches {value}",
                    self.describe(node)
                )))
            }
        }
    }
}

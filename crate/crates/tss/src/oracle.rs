//! Ground-truth semantics: round-based activation, exhaustive minimum
//! target-set searches, and the ordering machinery (condense, deact,
//! niceness, and the ordering repair) that the dynamic program relies on.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use itertools::Itertools;
use thiserror::Error;

use crate::cwexpr::{CwExpr, LabelId, Node, NodeId, NodeView};
use crate::graph::{
    deficiency, GlobalOrdering, Graph, GraphError, ThresholdMap, VertexId, VertexSet,
};

/// Hard cap for the subset-enumeration oracle.
pub const SUBSET_ORACLE_LIMIT: u32 = 20;
/// Hard cap for the permutation-enumeration oracle.
pub const ORDERING_ORACLE_LIMIT: u32 = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance with {n} vertices exceeds the oracle limit of {limit}")]
    TooLarge { n: u32, limit: u32 },
    #[error("cap {cap} for label class of size {size} exceeds the class")]
    CapExceedsClass { cap: u32, size: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Least fixpoint of `active <- S ∪ {v : |N(v) ∩ active| >= thr(v)}`.
///
/// Deterministic and order-independent; vertices with threshold 0 activate
/// unconditionally.
pub fn simulate_activation(g: &Graph, thr: &ThresholdMap, seed: &VertexSet) -> VertexSet {
    let n = g.vertex_count() as usize;
    let mut active = vec![false; n];
    let mut active_neighbors = vec![0u32; n];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for v in g.vertices() {
        if seed.contains(&v) || thr.get(v) == 0 {
            active[v as usize] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if active[u as usize] {
                continue;
            }
            active_neighbors[u as usize] += 1;
            if active_neighbors[u as usize] >= thr.get(u) {
                active[u as usize] = true;
                queue.push_back(u);
            }
        }
    }
    active
        .iter()
        .enumerate()
        .filter_map(|(v, &a)| a.then_some(v as VertexId))
        .collect()
}

/// Whether activating `s` eventually activates every vertex.
pub fn is_target_set(g: &Graph, thr: &ThresholdMap, s: &VertexSet) -> bool {
    simulate_activation(g, thr, s).len() == g.vertex_count() as usize
}

/// Result of an exhaustive search, with the number of candidates examined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub k: u32,
    /// Witness target set; the ordering oracle reports only the size.
    pub witness: Option<VertexSet>,
    pub candidates: usize,
}

/// Smallest `k` with a `k`-subset that activates everything, together with
/// the lexicographically least witness of that size. Enumerates subsets in
/// size-then-lexicographic order, so the witness is deterministic.
pub fn brute_force_min_target(
    g: &Graph,
    thr: &ThresholdMap,
) -> Result<(u32, VertexSet), OracleError> {
    brute_force_min_target_with_limit(g, thr, SUBSET_ORACLE_LIMIT)
}

pub fn brute_force_min_target_with_limit(
    g: &Graph,
    thr: &ThresholdMap,
    limit: u32,
) -> Result<(u32, VertexSet), OracleError> {
    let run = subset_oracle_run(g, thr, limit)?;
    Ok((
        run.k,
        run.witness.expect("subset oracle always returns a witness"),
    ))
}

pub fn subset_oracle_run(
    g: &Graph,
    thr: &ThresholdMap,
    limit: u32,
) -> Result<OracleRun, OracleError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    thr.check_covers(g)?;
    let mut candidates = 0;
    for k in 0..=n {
        for subset in (0..n).combinations(k as usize) {
            candidates += 1;
            let s: VertexSet = subset.iter().copied().collect();
            if is_target_set(g, thr, &s) {
                return Ok(OracleRun {
                    k,
                    witness: Some(s),
                    candidates,
                });
            }
        }
    }
    unreachable!("the full vertex set is always a target set")
}

/// Minimum over all global orderings of the deficiency size. Agrees with
/// [`brute_force_min_target`]; the two formulations of the problem are
/// equivalent.
pub fn min_target_via_orderings(g: &Graph, thr: &ThresholdMap) -> Result<u32, OracleError> {
    min_target_via_orderings_with_limit(g, thr, ORDERING_ORACLE_LIMIT)
}

pub fn min_target_via_orderings_with_limit(
    g: &Graph,
    thr: &ThresholdMap,
    limit: u32,
) -> Result<u32, OracleError> {
    Ok(ordering_oracle_run(g, thr, limit)?.k)
}

pub fn ordering_oracle_run(
    g: &Graph,
    thr: &ThresholdMap,
    limit: u32,
) -> Result<OracleRun, OracleError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    thr.check_covers(g)?;
    let mut best = n;
    let mut candidates = 0;
    for perm in (0..n).permutations(n as usize) {
        candidates += 1;
        let sigma = GlobalOrdering::from_sequence(&perm)?;
        let d = deficiency(g, thr, &sigma)?;
        best = best.min(d.len() as u32);
        if best == 0 {
            break;
        }
    }
    Ok(OracleRun {
        k: best,
        witness: None,
        candidates,
    })
}

/// A per-label-capped prefix of a global ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedList {
    /// Retained vertices, in `sigma` order.
    pub vertices: Vec<VertexId>,
    /// How many vertices of each label were kept.
    pub kept: BTreeMap<LabelId, u32>,
}

/// Keeps, per label, only the first `caps[label]` vertices of that label in
/// `sigma` order. Labels absent from `caps` are dropped entirely.
pub fn condense(
    sigma: &GlobalOrdering,
    labels: &[LabelId],
    caps: &BTreeMap<LabelId, u32>,
) -> Result<CondensedList, OracleError> {
    for (&label, &cap) in caps {
        let size = labels.iter().filter(|&&l| l == label).count() as u32;
        if cap > size {
            return Err(OracleError::CapExceedsClass { cap, size });
        }
    }
    let mut kept: BTreeMap<LabelId, u32> = BTreeMap::new();
    let mut vertices = Vec::new();
    for v in sigma.sequence() {
        let label = labels[v as usize];
        let cap = caps.get(&label).copied().unwrap_or(0);
        let seen = kept.entry(label).or_insert(0);
        if *seen < cap {
            *seen += 1;
            vertices.push(v);
        }
    }
    kept.retain(|_, c| *c > 0);
    Ok(CondensedList { vertices, kept })
}

/// Address of a vertex relative to a condensed prefix: its 1-based position
/// when referenced, otherwise its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deact {
    Position(usize),
    Label(LabelId),
}

/// Where `v` sits relative to `condense(sigma, caps)`.
pub fn deact(
    sigma: &GlobalOrdering,
    labels: &[LabelId],
    caps: &BTreeMap<LabelId, u32>,
    v: VertexId,
) -> Result<Deact, OracleError> {
    let condensed = condense(sigma, labels, caps)?;
    match condensed.vertices.iter().position(|&u| u == v) {
        Some(i) => Ok(Deact::Position(i + 1)),
        None => Ok(Deact::Label(labels[v as usize])),
    }
}

/// All join nodes of `e` in pre-order (root first, left before right).
pub fn eta_nodes_preorder(e: &CwExpr) -> Vec<NodeId> {
    fn walk(e: &CwExpr, id: NodeId, out: &mut Vec<NodeId>) {
        match *e.node(id) {
            Node::Vertex { .. } => {}
            Node::Union { left, right } => {
                walk(e, left, out);
                walk(e, right, out);
            }
            Node::Eta { child, .. } => {
                out.push(id);
                walk(e, child, out);
            }
            Node::Rho { child, .. } => walk(e, child, out),
        }
    }
    let mut out = Vec::new();
    walk(e, e.root(), &mut out);
    out
}

/// Members of a label class at a node, ascending by `sigma` position.
fn class_by_sigma(view: &NodeView, label: LabelId, sigma: &GlobalOrdering) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = view.class(label).to_vec();
    vs.sort_by_key(|&v| sigma.position(v));
    vs
}

/// Checks the niceness of `sigma` towards the subexpression `sub`: the
/// `(t_max + 1)`-st vertex of either joined label must come after the first
/// `min(t_max, class size)` vertices of the other. Non-join nodes are
/// vacuously nice. Classes are taken within the subexpression's own graph.
pub fn is_nice_global(
    sigma: &GlobalOrdering,
    e: &CwExpr,
    views: &[NodeView],
    t_max: u32,
    sub: NodeId,
) -> bool {
    let Node::Eta { a, b, child: _ } = *e.node(sub) else {
        return true;
    };
    let view = &views[sub.0 as usize];
    let va = class_by_sigma(view, a, sigma);
    let vb = class_by_sigma(view, b, sigma);
    nice_pair_holds(&va, &vb, sigma, t_max) && nice_pair_holds(&vb, &va, sigma, t_max)
}

/// `sigma(x[t_max + 1]) > sigma(y[min(t_max, |y|)])`, skipped when either
/// indexed vertex does not exist.
fn nice_pair_holds(x: &[VertexId], y: &[VertexId], sigma: &GlobalOrdering, t_max: u32) -> bool {
    let crucial = (t_max as usize).min(y.len());
    if x.len() < t_max as usize + 1 || crucial == 0 {
        return true;
    }
    sigma.position(x[t_max as usize]) > sigma.position(y[crucial - 1])
}

/// Repairs `sigma` into an ordering that is nice to every subexpression.
///
/// Joins are visited top-down (pre-order); a violation where the
/// `(t_max + 1)`-st vertex of one label precedes the early vertices of the
/// other is repaired by pulling the missing early vertices directly before
/// it, delaying everything else. Because a repair deep in the tree can move
/// vertices that sit in an ancestor's class prefix, the pass is swept until
/// a whole traversal finds no violation. Every single repair keeps the
/// deficiency a subset of what it was (the pulled vertices gain `t_max`
/// earlier join partners, everyone else keeps its predecessors), so
/// `k`-activating orderings stay `k`-activating however many sweeps run.
pub fn niceify(sigma: &GlobalOrdering, e: &CwExpr, t_max: u32) -> GlobalOrdering {
    let views = crate::cwexpr::node_views(e);
    let etas = eta_nodes_preorder(e);
    let mut seq = sigma.sequence();
    let sweep_limit = 64 + 4 * etas.len() * seq.len();
    for _ in 0..sweep_limit {
        let mut repaired_any = false;
        for &sub in &etas {
            let Node::Eta { a, b, child: _ } = *e.node(sub) else {
                unreachable!();
            };
            let view = &views[sub.0 as usize];
            // Within one join, fixing one direction cannot break the other.
            loop {
                let order = GlobalOrdering::from_sequence(&seq).expect("seq stays a permutation");
                let va = class_by_sigma(view, a, &order);
                let vb = class_by_sigma(view, b, &order);
                if !nice_pair_holds(&va, &vb, &order, t_max) {
                    repair(&mut seq, &order, &va, &vb, t_max);
                } else if !nice_pair_holds(&vb, &va, &order, t_max) {
                    repair(&mut seq, &order, &vb, &va, t_max);
                } else {
                    break;
                }
                repaired_any = true;
            }
        }
        if !repaired_any {
            return GlobalOrdering::from_sequence(&seq).expect("repair preserves the permutation");
        }
    }
    unreachable!("ordering repair did not reach a fixpoint within {sweep_limit} sweeps");
}

/// Moves the not-yet-ordered early `y`-vertices directly before position `i`
/// of `x[t_max + 1]`, preserving their relative order.
fn repair(
    seq: &mut Vec<VertexId>,
    order: &GlobalOrdering,
    x: &[VertexId],
    y: &[VertexId],
    t_max: u32,
) {
    let i = order.position(x[t_max as usize]) as usize;
    let crucial = (t_max as usize).min(y.len());
    let moved: Vec<VertexId> = y[..crucial]
        .iter()
        .copied()
        .filter(|&v| order.position(v) as usize > i)
        .collect();
    let mut rebuilt = Vec::with_capacity(seq.len());
    rebuilt.extend_from_slice(&seq[..i]);
    rebuilt.extend_from_slice(&moved);
    rebuilt.extend(seq[i..].iter().copied().filter(|v| !moved.contains(v)));
    *seq = rebuilt;
}

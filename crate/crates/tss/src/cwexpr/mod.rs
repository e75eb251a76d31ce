//! Clique-width expressions: an algebraic language that builds a labeled
//! graph from single labeled vertices using disjoint union (`u`), complete
//! join between two label classes (`eta`), and relabeling (`rho`).
//!
//! Expressions are stored as an arena in post-order, so `NodeId`s of children
//! are always smaller than their parent's and bottom-up passes are plain
//! scans. The concrete `.cwe` syntax lives in [`parse`]; graph families come
//! from the builders ([`naive`], [`path`], [`clique`], [`complete_bipartite`]).

mod build;
mod parse;

pub use build::{clique, complete_bipartite, naive, path};
pub use parse::{parse, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, ThresholdMap, VertexId};

/// Interned label. Ids follow first appearance in the expression text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u16);

/// Index of a subexpression in the arena; the root has the largest id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// A single vertex with its external (1-based) id and initial label.
    Vertex {
        ext_id: u32,
        label: LabelId,
    },
    Union {
        left: NodeId,
        right: NodeId,
    },
    /// Adds every edge between the `a`-class and the `b`-class.
    Eta {
        a: LabelId,
        b: LabelId,
        child: NodeId,
    },
    /// Relabels every `from`-vertex to `to`.
    Rho {
        from: LabelId,
        to: LabelId,
        child: NodeId,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("vertex id {0} introduced more than once")]
    DuplicateVertexId(u32),
    #[error("vertex ids must be exactly 1..={expected}, found {found} instead")]
    NonContiguousIds { expected: u32, found: u32 },
    #[error("join labels must differ, got ({0}, {0})")]
    EqualJoinLabels(String),
    #[error("relabel labels must differ, got ({0}, {0})")]
    EqualRelabelLabels(String),
    #[error("expression has {expr} vertices but the threshold map covers {thr}")]
    ThresholdMismatch { expr: u32, thr: u32 },
    #[error(
        "join at {path} re-adds some but not all of its class pairs; \
             only fully redundant joins can be normalized away"
    )]
    PartialRedundancy { path: String },
}

/// A parsed and validated clique-width expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwExpr {
    nodes: Vec<Node>,
    labels: Vec<String>,
    vertex_count: u32,
}

impl CwExpr {
    pub fn root(&self) -> NodeId {
        NodeId(self.nodes.len() as u32 - 1)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    /// Number of operations, the expression length `|f|`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in post-order (children before parents).
    pub fn postorder(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Number of distinct labels, the expression width.
    pub fn width(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.0 as usize]
    }

    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> {
        (0..self.labels.len() as u16).map(LabelId)
    }

    /// Internal vertex id of a leaf (external ids are dense, starting at 1).
    pub fn internal_vertex(ext_id: u32) -> VertexId {
        ext_id - 1
    }

    /// Path of a node from the root, e.g. `root/1/0`, where numbers pick the
    /// child of a union (0 = left).
    pub fn node_path(&self, target: NodeId) -> String {
        fn walk(e: &CwExpr, at: NodeId, target: NodeId, trail: &mut Vec<String>) -> bool {
            if at == target {
                return true;
            }
            match *e.node(at) {
                Node::Vertex { .. } => false,
                Node::Union { left, right } => {
                    trail.push("0".into());
                    if walk(e, left, target, trail) {
                        return true;
                    }
                    trail.pop();
                    trail.push("1".into());
                    if walk(e, right, target, trail) {
                        return true;
                    }
                    trail.pop();
                    false
                }
                Node::Eta { child, .. } | Node::Rho { child, .. } => {
                    trail.push("0".into());
                    if walk(e, child, target, trail) {
                        return true;
                    }
                    trail.pop();
                    false
                }
            }
        }
        let mut trail = vec!["root".to_string()];
        walk(self, self.root(), target, &mut trail);
        trail.join("/")
    }

    fn display_node(&self, id: NodeId, out: &mut String) {
        match *self.node(id) {
            Node::Vertex { ext_id, label } => {
                out.push_str(&format!("(v {} {})", ext_id, self.label_name(label)));
            }
            Node::Union { left, right } => {
                out.push_str("(u ");
                self.display_node(left, out);
                out.push(' ');
                self.display_node(right, out);
                out.push(')');
            }
            Node::Eta { a, b, child } => {
                out.push_str(&format!(
                    "(eta {} {} ",
                    self.label_name(a),
                    self.label_name(b)
                ));
                self.display_node(child, out);
                out.push(')');
            }
            Node::Rho { from, to, child } => {
                out.push_str(&format!(
                    "(rho {} {} ",
                    self.label_name(from),
                    self.label_name(to)
                ));
                self.display_node(child, out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for CwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.display_node(self.root(), &mut out);
        f.write_str(&out)
    }
}

/// Incremental arena construction shared by the parser and the builders.
#[derive(Debug, Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    labels: Vec<String>,
    seen_ids: BTreeSet<u32>,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn label(&mut self, name: &str) -> LabelId {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            LabelId(i as u16)
        } else {
            self.labels.push(name.to_string());
            LabelId(self.labels.len() as u16 - 1)
        }
    }

    pub fn vertex(&mut self, ext_id: u32, label: LabelId) -> Result<NodeId, ExprError> {
        if !self.seen_ids.insert(ext_id) {
            return Err(ExprError::DuplicateVertexId(ext_id));
        }
        self.push(Node::Vertex { ext_id, label })
    }

    pub fn union(&mut self, left: NodeId, right: NodeId) -> Result<NodeId, ExprError> {
        self.push(Node::Union { left, right })
    }

    pub fn eta(&mut self, a: LabelId, b: LabelId, child: NodeId) -> Result<NodeId, ExprError> {
        if a == b {
            return Err(ExprError::EqualJoinLabels(
                self.labels[a.0 as usize].clone(),
            ));
        }
        self.push(Node::Eta { a, b, child })
    }

    pub fn rho(&mut self, from: LabelId, to: LabelId, child: NodeId) -> Result<NodeId, ExprError> {
        if from == to {
            return Err(ExprError::EqualRelabelLabels(
                self.labels[from.0 as usize].clone(),
            ));
        }
        self.push(Node::Rho { from, to, child })
    }

    fn push(&mut self, node: Node) -> Result<NodeId, ExprError> {
        self.nodes.push(node);
        Ok(NodeId(self.nodes.len() as u32 - 1))
    }

    /// Validates vertex-id density and finishes the expression.
    pub fn finish(self, root: NodeId) -> Result<CwExpr, ExprError> {
        debug_assert_eq!(
            root.0 as usize,
            self.nodes.len() - 1,
            "root must be the last node"
        );
        let n = self.seen_ids.len() as u32;
        for (want, &got) in (1..=n).zip(self.seen_ids.iter()) {
            if got != want {
                return Err(ExprError::NonContiguousIds {
                    expected: n,
                    found: got,
                });
            }
        }
        Ok(CwExpr {
            nodes: self.nodes,
            labels: self.labels,
            vertex_count: n,
        })
    }
}

/// A graph together with the final label of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// Final label per internal vertex id.
    pub labels: Vec<LabelId>,
}

/// Per-node view of the graph under construction: label classes and edges.
#[derive(Debug, Clone, Default)]
pub struct NodeView {
    /// Members of each label class, ascending by vertex id.
    pub classes: BTreeMap<LabelId, Vec<VertexId>>,
    /// Accumulated edges as `(min, max)` pairs.
    pub edges: BTreeSet<(VertexId, VertexId)>,
}

impl NodeView {
    pub fn vertex_count(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn class(&self, l: LabelId) -> &[VertexId] {
        self.classes.get(&l).map_or(&[], Vec::as_slice)
    }

    /// Final label of `v`; panics if `v` is not described by this node.
    pub fn label_of(&self, v: VertexId) -> LabelId {
        *self
            .classes
            .iter()
            .find_map(|(l, vs)| vs.contains(&v).then_some(l))
            .expect("vertex not in this subexpression")
    }
}

/// Computes the labeled view of every subexpression, bottom-up.
pub fn node_views(e: &CwExpr) -> Vec<NodeView> {
    let mut views: Vec<NodeView> = Vec::with_capacity(e.len());
    for id in e.postorder() {
        let view = match *e.node(id) {
            Node::Vertex { ext_id, label } => {
                let mut classes = BTreeMap::new();
                classes.insert(label, vec![CwExpr::internal_vertex(ext_id)]);
                NodeView {
                    classes,
                    edges: BTreeSet::new(),
                }
            }
            Node::Union { left, right } => {
                let mut view = views[left.0 as usize].clone();
                let other = &views[right.0 as usize];
                for (&l, vs) in &other.classes {
                    let entry = view.classes.entry(l).or_default();
                    entry.extend(vs);
                    entry.sort_unstable();
                }
                view.edges.extend(other.edges.iter().copied());
                view
            }
            Node::Eta { a, b, child } => {
                let mut view = views[child.0 as usize].clone();
                let pairs: Vec<(VertexId, VertexId)> = view
                    .class(a)
                    .iter()
                    .flat_map(|&u| view.class(b).iter().map(move |&w| (u.min(w), u.max(w))))
                    .collect();
                view.edges.extend(pairs);
                view
            }
            Node::Rho { from, to, child } => {
                let mut view = views[child.0 as usize].clone();
                if let Some(moved) = view.classes.remove(&from) {
                    let entry = view.classes.entry(to).or_default();
                    entry.extend(moved);
                    entry.sort_unstable();
                }
                view
            }
        };
        views.push(view);
    }
    views
}

/// Evaluates the expression to the graph it describes, with final labels.
pub fn evaluate(e: &CwExpr) -> LabeledGraph {
    let views = node_views(e);
    let root = &views[e.root().0 as usize];
    let n = e.vertex_count();
    let graph = Graph::from_edges(n, root.edges.iter().copied())
        .expect("expression view produced an invalid edge");
    let mut labels = vec![LabelId(0); n as usize];
    for (&l, vs) in &root.classes {
        for &v in vs {
            labels[v as usize] = l;
        }
    }
    LabeledGraph { graph, labels }
}

/// Join nodes whose two classes already share at least one edge in the child.
pub fn check_irredundant(e: &CwExpr) -> Vec<NodeId> {
    let views = node_views(e);
    let mut violations = Vec::new();
    for id in e.postorder() {
        if let Node::Eta { a, b, child } = *e.node(id) {
            let child_view = &views[child.0 as usize];
            let existing = cross_edges_present(child_view, a, b);
            if existing > 0 {
                violations.push(id);
            }
        }
    }
    violations
}

fn cross_edges_present(view: &NodeView, a: LabelId, b: LabelId) -> usize {
    view.class(a)
        .iter()
        .flat_map(|&u| view.class(b).iter().map(move |&w| (u.min(w), u.max(w))))
        .filter(|p| view.edges.contains(p))
        .count()
}

/// Removes join nodes that add no new edge (all class pairs pre-exist, which
/// includes joins over an empty class). A join that re-adds only part of its
/// class pairs is rejected.
pub fn normalize(e: &CwExpr) -> Result<CwExpr, ExprError> {
    let views = node_views(e);
    let mut builder = ExprBuilder::new();
    let mut mapped: Vec<Option<NodeId>> = vec![None; e.len()];
    for id in e.postorder() {
        let new_id = match *e.node(id) {
            Node::Vertex { ext_id, label } => {
                let l = builder.label(e.label_name(label));
                builder.vertex(ext_id, l)?
            }
            Node::Union { left, right } => {
                let l = mapped[left.0 as usize].unwrap();
                let r = mapped[right.0 as usize].unwrap();
                builder.union(l, r)?
            }
            Node::Eta { a, b, child } => {
                let child_view = &views[child.0 as usize];
                let total = child_view.class(a).len() * child_view.class(b).len();
                let existing = cross_edges_present(child_view, a, b);
                let mapped_child = mapped[child.0 as usize].unwrap();
                if existing == total {
                    // Fully redundant: drop the node.
                    mapped_child
                } else if existing == 0 {
                    let a = builder.label(e.label_name(a));
                    let b = builder.label(e.label_name(b));
                    builder.eta(a, b, mapped_child)?
                } else {
                    return Err(ExprError::PartialRedundancy {
                        path: e.node_path(id),
                    });
                }
            }
            Node::Rho { from, to, child } => {
                let c = mapped[child.0 as usize].unwrap();
                let from = builder.label(e.label_name(from));
                let to = builder.label(e.label_name(to));
                builder.rho(from, to, c)?
            }
        };
        mapped[id.0 as usize] = Some(new_id);
    }
    let root = mapped[e.root().0 as usize].unwrap();
    builder.finish(root)
}

/// Per-node, per-label counting data used by the solver and the ordering
/// utilities: class sizes, threshold histograms, and the two caps derived
/// from `t_max`.
#[derive(Debug, Clone)]
pub struct NodeStats {
    t_max: u32,
    /// Labels used syntactically in each subexpression, sorted.
    labsets: Vec<Vec<LabelId>>,
    /// `sizes[node][label]` = number of vertices of that label.
    sizes: Vec<BTreeMap<LabelId, u32>>,
    /// `thr_hist[node][label][t]` = vertices of that label with threshold `t`.
    thr_hist: Vec<BTreeMap<LabelId, Vec<u32>>>,
}

impl NodeStats {
    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn labset(&self, node: NodeId) -> &[LabelId] {
        &self.labsets[node.0 as usize]
    }

    pub fn class_size(&self, node: NodeId, l: LabelId) -> u32 {
        self.sizes[node.0 as usize].get(&l).copied().unwrap_or(0)
    }

    /// `min(t_max + 1, class size)`: tuples a complete local ordering carries.
    pub fn tuple_cap(&self, node: NodeId, l: LabelId) -> u32 {
        (self.t_max + 1).min(self.class_size(node, l))
    }

    /// `min(t_max, class size)`: the early vertices that decide niceness.
    pub fn crucial_cap(&self, node: NodeId, l: LabelId) -> u32 {
        self.t_max.min(self.class_size(node, l))
    }

    /// Threshold histogram of the label class, indexed by threshold.
    pub fn thresholds(&self, node: NodeId, l: LabelId) -> &[u32] {
        static EMPTY: [u32; 0] = [];
        self.thr_hist[node.0 as usize]
            .get(&l)
            .map_or(&EMPTY[..], Vec::as_slice)
    }
}

/// Computes [`NodeStats`] for every subexpression, bottom-up.
pub fn node_stats(e: &CwExpr, thr: &ThresholdMap) -> Result<NodeStats, ExprError> {
    if thr.vertex_count() != e.vertex_count() {
        return Err(ExprError::ThresholdMismatch {
            expr: e.vertex_count(),
            thr: thr.vertex_count(),
        });
    }
    let t_max = thr.t_max();
    let mut labsets: Vec<Vec<LabelId>> = Vec::with_capacity(e.len());
    let mut sizes: Vec<BTreeMap<LabelId, u32>> = Vec::with_capacity(e.len());
    let mut thr_hist: Vec<BTreeMap<LabelId, Vec<u32>>> = Vec::with_capacity(e.len());
    for id in e.postorder() {
        let (labset, size, hist) = match *e.node(id) {
            Node::Vertex { ext_id, label } => {
                let v = CwExpr::internal_vertex(ext_id);
                let mut h = vec![0; t_max as usize + 1];
                h[thr.get(v) as usize] = 1;
                (
                    vec![label],
                    BTreeMap::from([(label, 1)]),
                    BTreeMap::from([(label, h)]),
                )
            }
            Node::Union { left, right } => {
                let mut labset = labsets[left.0 as usize].clone();
                for &l in &labsets[right.0 as usize] {
                    if !labset.contains(&l) {
                        labset.push(l);
                    }
                }
                labset.sort_unstable();
                let mut size = sizes[left.0 as usize].clone();
                for (&l, &c) in &sizes[right.0 as usize] {
                    *size.entry(l).or_insert(0) += c;
                }
                let mut hist = thr_hist[left.0 as usize].clone();
                for (&l, h) in &thr_hist[right.0 as usize] {
                    let entry = hist.entry(l).or_insert_with(|| vec![0; t_max as usize + 1]);
                    for (acc, add) in entry.iter_mut().zip(h) {
                        *acc += add;
                    }
                }
                (labset, size, hist)
            }
            Node::Eta { a, b, child } => {
                let mut labset = labsets[child.0 as usize].clone();
                for l in [a, b] {
                    if !labset.contains(&l) {
                        labset.push(l);
                    }
                }
                labset.sort_unstable();
                (
                    labset,
                    sizes[child.0 as usize].clone(),
                    thr_hist[child.0 as usize].clone(),
                )
            }
            Node::Rho { from, to, child } => {
                let mut labset = labsets[child.0 as usize].clone();
                for l in [from, to] {
                    if !labset.contains(&l) {
                        labset.push(l);
                    }
                }
                labset.sort_unstable();
                let mut size = sizes[child.0 as usize].clone();
                if let Some(moved) = size.remove(&from) {
                    if moved > 0 {
                        *size.entry(to).or_insert(0) += moved;
                    }
                }
                let mut hist = thr_hist[child.0 as usize].clone();
                if let Some(moved) = hist.remove(&from) {
                    let entry = hist
                        .entry(to)
                        .or_insert_with(|| vec![0; t_max as usize + 1]);
                    for (acc, add) in entry.iter_mut().zip(&moved) {
                        *acc += add;
                    }
                }
                (labset, size, hist)
            }
        };
        labsets.push(labset);
        sizes.push(size);
        thr_hist.push(hist);
    }
    Ok(NodeStats {
        t_max,
        labsets,
        sizes,
        thr_hist,
    })
}

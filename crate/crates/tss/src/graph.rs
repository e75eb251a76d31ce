//! Simple undirected graphs, per-vertex activation thresholds, and global
//! orderings (permutations of the vertex set).
//!
//! Vertices are `0..n` internally; file formats and reports use 1-based ids.

use std::collections::BTreeSet;

use thiserror::Error;

/// Internal vertex id, `0..n`. External (file / report) ids are `id + 1`.
pub type VertexId = u32;

/// A set of vertices, ordered for deterministic iteration and printing.
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id {0} (graph has {1} vertices)")]
    UnknownVertex(VertexId, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("threshold {got} of vertex {vertex} exceeds t_max = {t_max}")]
    ThresholdOutOfRange {
        vertex: VertexId,
        got: u32,
        t_max: u32,
    },
    #[error("threshold map covers {got} vertices, graph has {expected}")]
    ThresholdCountMismatch { got: usize, expected: usize },
    #[error("ordering is not a permutation of 0..{0}")]
    NotAPermutation(u32),
}

/// A simple, finite, undirected graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Sorted neighbor lists, one per vertex.
    adj: Vec<Vec<VertexId>>,
}

impl Graph {
    pub fn new(vertex_count: u32) -> Self {
        Graph {
            adj: vec![Vec::new(); vertex_count as usize],
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops and duplicates.
    pub fn from_edges(
        vertex_count: u32,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if u >= n {
            return Err(GraphError::UnknownVertex(u, n));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let pos_v = self.adj[u as usize].binary_search(&v).unwrap_err();
        self.adj[u as usize].insert(pos_v, v);
        let pos_u = self.adj[v as usize].binary_search(&u).unwrap_err();
        self.adj[v as usize].insert(pos_u, u);
        Ok(())
    }

    pub fn vertex_count(&self) -> u32 {
        self.adj.len() as u32
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|ns| ns.binary_search(&v).is_ok())
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.vertex_count()
    }

    /// All edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in self.vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v, self.vertex_count()))
        }
    }
}

/// Per-vertex activation thresholds together with the bound `t_max`.
///
/// Thresholds may exceed the vertex degree; such a vertex can only activate
/// through outside help or by being selected into the target set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdMap {
    thr: Vec<u32>,
    t_max: u32,
}

impl ThresholdMap {
    pub fn new(thr: Vec<u32>, t_max: u32) -> Result<Self, GraphError> {
        for (v, &t) in thr.iter().enumerate() {
            if t > t_max {
                return Err(GraphError::ThresholdOutOfRange {
                    vertex: v as VertexId,
                    got: t,
                    t_max,
                });
            }
        }
        Ok(ThresholdMap { thr, t_max })
    }

    /// Derives `t_max` as the maximum threshold present.
    pub fn from_thresholds(thr: Vec<u32>) -> Self {
        let t_max = thr.iter().copied().max().unwrap_or(0);
        ThresholdMap { thr, t_max }
    }

    pub fn vertex_count(&self) -> u32 {
        self.thr.len() as u32
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.thr[v as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.thr
    }

    pub fn check_covers(&self, g: &Graph) -> Result<(), GraphError> {
        if self.thr.len() != g.vertex_count() as usize {
            return Err(GraphError::ThresholdCountMismatch {
                got: self.thr.len(),
                expected: g.vertex_count() as usize,
            });
        }
        Ok(())
    }
}

/// A permutation of the vertices, read as the order in which they activate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalOrdering {
    /// `pos[v]` = 0-based position of vertex `v`.
    pos: Vec<u32>,
}

impl GlobalOrdering {
    /// Builds an ordering from 0-based positions per vertex.
    pub fn from_positions(pos: Vec<u32>) -> Result<Self, GraphError> {
        let n = pos.len() as u32;
        let mut seen = vec![false; pos.len()];
        for &p in &pos {
            if p >= n || seen[p as usize] {
                return Err(GraphError::NotAPermutation(n));
            }
            seen[p as usize] = true;
        }
        Ok(GlobalOrdering { pos })
    }

    /// Builds an ordering from the vertex sequence `order[0], order[1], ...`.
    pub fn from_sequence(order: &[VertexId]) -> Result<Self, GraphError> {
        let n = order.len() as u32;
        let mut pos = vec![u32::MAX; order.len()];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v as usize] != u32::MAX {
                return Err(GraphError::NotAPermutation(n));
            }
            pos[v as usize] = i as u32;
        }
        Ok(GlobalOrdering { pos })
    }

    /// The identity ordering `v ↦ v`.
    pub fn identity(n: u32) -> Self {
        GlobalOrdering {
            pos: (0..n).collect(),
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.pos.len() as u32
    }

    /// 0-based position of `v`.
    pub fn position(&self, v: VertexId) -> u32 {
        self.pos[v as usize]
    }

    /// Vertices in activation order.
    pub fn sequence(&self) -> Vec<VertexId> {
        let mut order = vec![0; self.pos.len()];
        for (v, &p) in self.pos.iter().enumerate() {
            order[p as usize] = v as VertexId;
        }
        order
    }

    fn check_total(&self, g: &Graph) -> Result<(), GraphError> {
        if self.pos.len() != g.vertex_count() as usize {
            return Err(GraphError::NotAPermutation(g.vertex_count()));
        }
        Ok(())
    }
}

/// Number of neighbors of `v` ordered before `v`.
pub fn incoming_count(g: &Graph, sigma: &GlobalOrdering, v: VertexId) -> Result<u32, GraphError> {
    g.check_vertex(v)?;
    sigma.check_total(g)?;
    let pv = sigma.position(v);
    Ok(g.neighbors(v)
        .iter()
        .filter(|&&u| sigma.position(u) < pv)
        .count() as u32)
}

/// The deficient vertices of `sigma`: those with fewer earlier neighbors than
/// their threshold. `sigma` is `k`-activating exactly when the result has at
/// most `k` vertices, and the result itself is a minimal witness target set.
pub fn deficiency(
    g: &Graph,
    thr: &ThresholdMap,
    sigma: &GlobalOrdering,
) -> Result<VertexSet, GraphError> {
    thr.check_covers(g)?;
    sigma.check_total(g)?;
    let mut deficient = VertexSet::new();
    for v in g.vertices() {
        let incoming = incoming_count(g, sigma, v)?;
        if incoming < thr.get(v) {
            deficient.insert(v);
        }
    }
    Ok(deficient)
}

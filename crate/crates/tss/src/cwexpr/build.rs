//! Builders for expression test corpora: a width-`n` expression of an
//! arbitrary graph plus constant-width families (paths, cliques, bicliques).

use super::{CwExpr, ExprBuilder, NodeId};
use crate::graph::Graph;

/// One label per vertex, one join per edge; width equals the vertex count.
pub fn naive(g: &Graph) -> CwExpr {
    let n = g.vertex_count();
    assert!(n >= 1, "builders need at least one vertex");
    let mut b = ExprBuilder::new();
    let labels: Vec<_> = (0..n).map(|v| b.label(&format!("l{}", v + 1))).collect();
    let mut acc: Option<NodeId> = None;
    for v in 0..n {
        let leaf = b.vertex(v + 1, labels[v as usize]).unwrap();
        acc = Some(match acc {
            None => leaf,
            Some(prev) => b.union(prev, leaf).unwrap(),
        });
    }
    let mut root = acc.unwrap();
    for (u, v) in g.edges() {
        root = b.eta(labels[u as usize], labels[v as usize], root).unwrap();
    }
    b.finish(root).unwrap()
}

/// Path `1 - 2 - ... - n` using three labels: the newest vertex keeps label
/// `b`, settled vertices are parked on `c`, and each join attaches the fresh
/// `a`-vertex to the previous endpoint.
pub fn path(n: u32) -> CwExpr {
    assert!(n >= 1, "builders need at least one vertex");
    let mut builder = ExprBuilder::new();
    let a = builder.label("a");
    let b = builder.label("b");
    let c = builder.label("c");
    let mut root = builder.vertex(1, b).unwrap();
    for i in 2..=n {
        let leaf = builder.vertex(i, a).unwrap();
        let joined = builder.union(root, leaf).unwrap();
        let edged = builder.eta(a, b, joined).unwrap();
        let parked = builder.rho(b, c, edged).unwrap();
        root = builder.rho(a, b, parked).unwrap();
    }
    builder.finish(root).unwrap()
}

/// Complete graph on `n` vertices with two labels: join the fresh `b`-vertex
/// to everything, then merge it into `a`.
pub fn clique(n: u32) -> CwExpr {
    assert!(n >= 1, "builders need at least one vertex");
    let mut builder = ExprBuilder::new();
    let a = builder.label("a");
    let b = builder.label("b");
    let mut root = builder.vertex(1, a).unwrap();
    for i in 2..=n {
        let leaf = builder.vertex(i, b).unwrap();
        let joined = builder.union(root, leaf).unwrap();
        let edged = builder.eta(a, b, joined).unwrap();
        root = builder.rho(b, a, edged).unwrap();
    }
    builder.finish(root).unwrap()
}

/// Complete bipartite graph on `left + right` vertices with two labels and a
/// single join. Vertices `1..=left` form one side.
pub fn complete_bipartite(left: u32, right: u32) -> CwExpr {
    assert!(
        left >= 1 && right >= 1,
        "builders need at least one vertex per side"
    );
    let mut builder = ExprBuilder::new();
    let a = builder.label("a");
    let b = builder.label("b");
    let mut root = builder.vertex(1, a).unwrap();
    for i in 2..=left {
        let leaf = builder.vertex(i, a).unwrap();
        root = builder.union(root, leaf).unwrap();
    }
    for i in left + 1..=left + right {
        let leaf = builder.vertex(i, b).unwrap();
        root = builder.union(root, leaf).unwrap();
    }
    let root = builder.eta(a, b, root).unwrap();
    builder.finish(root).unwrap()
}

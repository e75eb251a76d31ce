//! A hand-checked 11-vertex instance of clique-width 3 used across the test
//! suites: the graph, its thresholds (`t_max` = 2), and a matching
//! irredundant 3-expression. Its minimum target set has size 1.

use crate::cwexpr::{self, CwExpr};
use crate::graph::{Graph, ThresholdMap};

/// External-id edge list of the instance.
pub const EDGES: [(u32, u32); 22] = [
    (2, 4),
    (2, 5),
    (2, 1),
    (2, 3),
    (4, 1),
    (4, 3),
    (5, 1),
    (5, 3),
    (10, 1),
    (10, 3),
    (1, 6),
    (1, 8),
    (1, 11),
    (1, 9),
    (3, 6),
    (3, 8),
    (3, 11),
    (3, 9),
    (7, 6),
    (7, 8),
    (7, 11),
    (7, 9),
];

/// Thresholds of vertices 1..=11.
pub const THRESHOLDS: [u32; 11] = [1, 1, 1, 2, 2, 2, 1, 2, 2, 2, 2];

/// The graph and thresholds of the instance.
pub fn eleven_vertex_instance() -> (Graph, ThresholdMap) {
    let g = Graph::from_edges(11, EDGES.iter().map(|&(u, v)| (u - 1, v - 1))).unwrap();
    let thr = ThresholdMap::new(THRESHOLDS.to_vec(), 2).unwrap();
    (g, thr)
}

/// `.cwe` source of a 3-expression describing the instance's graph.
pub const EXPRESSION: &str = "\
(eta b c
  (u (u (u (u (u (v 6 c) (v 8 c)) (v 11 c)) (v 9 c)) (v 7 b))
     (rho c a
       (eta b c
         (u (v 10 c)
            (rho c a
              (eta a b
                (eta a c
                  (eta b c
                    (u (u (u (u (v 2 c) (v 1 b)) (v 3 b)) (v 4 a)) (v 5 a)))))))))))";

/// The parsed expression of [`EXPRESSION`].
pub fn eleven_vertex_expression() -> CwExpr {
    cwexpr::parse(EXPRESSION).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_consistent() {
        let (g, thr) = eleven_vertex_instance();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.edge_count(), 22);
        assert_eq!(thr.t_max(), 2);
        let e = eleven_vertex_expression();
        assert_eq!(cwexpr::evaluate(&e).graph, g);
    }
}

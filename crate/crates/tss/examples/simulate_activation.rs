//! Round-based activation: seed a set, watch the cascade, and test target
//! sets.
//!
//! ```bash
//! cargo run --example simulate_activation
//! ```

use tss::graph::{Graph, ThresholdMap, VertexSet};
use tss::oracle::{is_target_set, simulate_activation};

fn main() {
    // A star: center 1 with leaves 2..=5. Leaves activate after one active
    // neighbor, the center needs two.
    let star = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
    let thr = ThresholdMap::new(vec![2, 1, 1, 1, 1], 2).unwrap();

    let from_center = simulate_activation(&star, &thr, &VertexSet::from([0]));
    println!(
        "seeding the center activates {} of 5 vertices",
        from_center.len()
    );

    let from_leaf = simulate_activation(&star, &thr, &VertexSet::from([1]));
    println!(
        "seeding one leaf activates   {} of 5 vertices",
        from_leaf.len()
    );

    let from_two_leaves = simulate_activation(&star, &thr, &VertexSet::from([1, 2]));
    println!(
        "seeding two leaves activates {} of 5 vertices",
        from_two_leaves.len()
    );

    assert!(is_target_set(&star, &thr, &VertexSet::from([0])));
    assert!(!is_target_set(&star, &thr, &VertexSet::from([1])));
    assert!(is_target_set(&star, &thr, &VertexSet::from([1, 2])));

    // Threshold-0 vertices activate on their own and can start a cascade
    // without any seed.
    let chain = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let thr = ThresholdMap::new(vec![0, 1, 1, 1], 1).unwrap();
    let unseeded = simulate_activation(&chain, &thr, &VertexSet::new());
    println!(
        "\nchain with a free endpoint, empty seed: {} of 4 active",
        unseeded.len()
    );
    assert_eq!(unseeded.len(), 4);
}

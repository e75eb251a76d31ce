//! Recover an optimal target set, not just its size, and verify it by
//! simulation.
//!
//! ```bash
//! cargo run --example reconstruct_witness
//! ```

use tss::cwexpr;
use tss::fixtures;
use tss::graph::ThresholdMap;
use tss::oracle::simulate_activation;
use tss::solver::{solve_with_witness, SolveOptions};

fn main() {
    let expr = fixtures::eleven_vertex_expression();
    let (graph, thr) = fixtures::eleven_vertex_instance();

    let (outcome, witness) =
        solve_with_witness(&expr, &thr, &SolveOptions::default()).expect("solves");
    let ids: Vec<u32> = witness.iter().map(|&v| v + 1).collect();
    println!(
        "minimum target set size {} with witness {ids:?}",
        outcome.min_target_size
    );

    let active = simulate_activation(&graph, &thr, &witness);
    println!(
        "activating the witness reaches {} of {} vertices",
        active.len(),
        graph.vertex_count()
    );
    assert_eq!(active.len() as u32, graph.vertex_count());

    // Zero thresholds need no seed at all; the witness is empty.
    let free = ThresholdMap::new(vec![0; 11], 0).unwrap();
    let (outcome, witness) = solve_with_witness(&expr, &free, &SolveOptions::default()).unwrap();
    println!(
        "\nall thresholds zero: k={} witness={witness:?}",
        outcome.min_target_size
    );

    // Disconnected demand: two isolated vertices that both need a neighbor
    // can only be covered by seeding both.
    let expr = cwexpr::parse("(u (v 1 a) (v 2 a))").unwrap();
    let thr = ThresholdMap::new(vec![1, 1], 1).unwrap();
    let (outcome, witness) = solve_with_witness(&expr, &thr, &SolveOptions::default()).unwrap();
    let ids: Vec<u32> = witness.iter().map(|&v| v + 1).collect();
    println!(
        "two isolated threshold-1 vertices: k={} witness={ids:?}",
        outcome.min_target_size
    );
}

//! Solve an instance exactly with the expression-guided dynamic program.
//!
//! ```bash
//! cargo run --release --example solve_min_target
//! ```

use tss::cwexpr;
use tss::fixtures;
use tss::graph::ThresholdMap;
use tss::solver::{solve, SolveOptions};

fn main() {
    // The bundled 11-vertex instance of width 3 with thresholds up to 2.
    let expr = fixtures::eleven_vertex_expression();
    let (graph, thr) = fixtures::eleven_vertex_instance();
    println!(
        "instance: n={} m={} t_max={} width={} |f|={}",
        graph.vertex_count(),
        graph.edge_count(),
        thr.t_max(),
        expr.width(),
        expr.len()
    );

    let outcome = solve(&expr, &thr, &SolveOptions::default()).expect("irredundant instance");
    println!("minimum target set size: {}", outcome.min_target_size);
    println!("states expanded: {}", outcome.states_expanded);

    // The solver walks the expression, so its work scales with the
    // expression length, not with the number of possible vertex subsets.
    for n in [25u32, 50, 100] {
        let expr = cwexpr::path(n);
        let thr = ThresholdMap::new(vec![1; n as usize], 1).unwrap();
        let t0 = std::time::Instant::now();
        let outcome = solve(&expr, &thr, &SolveOptions::default()).unwrap();
        println!(
            "path({n:>3}): k={} states={:>5} in {:?}",
            outcome.min_target_size,
            outcome.states_expanded,
            t0.elapsed()
        );
    }

    // A budget caps the explored state space; exceeding it is an error
    // rather than an unbounded run.
    let tight = SolveOptions {
        max_states: 100,
        ..SolveOptions::default()
    };
    let expr = fixtures::eleven_vertex_expression();
    match solve(&expr, &thr, &tight) {
        Err(e) => println!("\nwith max_states=100: {e}"),
        Ok(_) => unreachable!("the sample needs thousands of states"),
    }
}

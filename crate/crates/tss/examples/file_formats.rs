//! The `.tss` and `.cwe` file formats: write an instance, read it back, and
//! run the same validation the command-line tool applies.
//!
//! ```bash
//! cargo run --example file_formats
//! ```

use tss::cwexpr;
use tss::format::{read_tss, write_tss};
use tss::graph::ThresholdMap;
use tss::solver::{solve, SolveOptions};

fn main() {
    // Build a 5-clique instance and serialize the graph side as .tss.
    let expr = cwexpr::clique(5);
    let graph = cwexpr::evaluate(&expr).graph;
    let thr = ThresholdMap::new(vec![2, 2, 1, 2, 2], 2).unwrap();

    let tss_text = write_tss(&graph, &thr);
    println!("--- instance.tss ---\n{tss_text}");
    println!("--- instance.cwe ---\n{expr}\n");

    // Reading recovers the same instance; t_max is the maximum threshold.
    let (parsed_graph, parsed_thr) = read_tss(&tss_text).expect("well-formed .tss");
    assert_eq!(parsed_graph, graph);
    assert_eq!(parsed_thr, thr);

    let reparsed = cwexpr::parse(&expr.to_string()).expect("well-formed .cwe");
    assert_eq!(cwexpr::evaluate(&reparsed).graph, graph);

    // The command-line `solve` insists that the expression produces exactly
    // the graph from the file before solving; the library equivalent is an
    // equality check on the evaluated graph.
    assert_eq!(cwexpr::evaluate(&reparsed).graph, parsed_graph);
    let outcome = solve(&reparsed, &parsed_thr, &SolveOptions::default()).unwrap();
    println!(
        "minimum target set size of the round-tripped instance: {}",
        outcome.min_target_size
    );

    // Malformed files carry line diagnostics.
    let broken = "p tss 2 1\nn 1 0\nn 2 1\ne 2 2\n";
    match read_tss(broken) {
        Err(e) => println!("\nbroken file rejected: {e}"),
        Ok(_) => unreachable!("self-loops are invalid"),
    }
}

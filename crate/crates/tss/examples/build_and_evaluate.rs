//! Build clique-width expressions, print their `.cwe` text, and evaluate
//! them back to graphs.
//!
//! ```bash
//! cargo run --example build_and_evaluate
//! ```

use tss::cwexpr::{self, parse};
use tss::graph::Graph;

fn main() {
    // Constant-width families come from builders.
    let p4 = cwexpr::path(4);
    println!("path(4) as .cwe  : {p4}");
    println!("  width           : {}", p4.width());
    println!("  operations |f|  : {}", p4.len());

    let lg = cwexpr::evaluate(&p4);
    println!("  evaluated edges : {:?}", lg.graph.edges());

    // Any graph has a width-n expression with one label per vertex.
    let diamond = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
    let naive = cwexpr::naive(&diamond);
    println!(
        "\ndiamond as width-{} expression:\n  {naive}",
        naive.width()
    );
    assert_eq!(cwexpr::evaluate(&naive).graph, diamond);

    // Expressions round-trip through their text form.
    let source = "(eta a b (u (v 1 a) (u (v 2 b) (v 3 b))))";
    let star = parse(source).expect("valid .cwe");
    println!("\nparsed `{source}`");
    println!("  prints back as  : {star}");
    let lg = cwexpr::evaluate(&star);
    for v in lg.graph.vertices() {
        println!(
            "  vertex {} has label {} and degree {}",
            v + 1,
            star.label_name(lg.labels[v as usize]),
            lg.graph.degree(v)
        );
    }

    // Joins that re-add existing edges are detected and can be normalized
    // away when they add nothing at all.
    let doubled = parse("(eta a b (eta a b (u (v 1 a) (v 2 b))))").unwrap();
    let violations = cwexpr::check_irredundant(&doubled);
    println!(
        "\nredundant joins in doubled expression: {}",
        violations.len()
    );
    let normal = cwexpr::normalize(&doubled).expect("fully redundant joins are removable");
    println!("normalized        : {normal}");
}

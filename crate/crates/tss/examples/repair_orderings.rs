//! Activation orderings and their repair: condensed views, niceness towards
//! join nodes, and the top-down fix that never grows the deficiency.
//!
//! ```bash
//! cargo run --example repair_orderings
//! ```

use std::collections::BTreeMap;

use tss::cwexpr::{evaluate, node_stats, node_views};
use tss::fixtures;
use tss::graph::{deficiency, GlobalOrdering};
use tss::oracle::{condense, is_nice_global, niceify};

fn main() {
    let expr = fixtures::eleven_vertex_expression();
    let (graph, thr) = fixtures::eleven_vertex_instance();
    let labels = evaluate(&expr).labels;
    let stats = node_stats(&expr, &thr).unwrap();
    let views = node_views(&expr);
    let t_max = thr.t_max();

    // The identity ordering activates the instance with one deficient
    // vertex...
    let sigma = GlobalOrdering::identity(11);
    let deficient = deficiency(&graph, &thr, &sigma).unwrap();
    println!(
        "identity ordering is {}-activating (deficient: {:?})",
        deficient.len(),
        deficient.iter().map(|&v| v + 1).collect::<Vec<_>>()
    );

    // ... and its condensed view keeps the per-label early vertices only.
    let caps: BTreeMap<_, _> = stats
        .labset(expr.root())
        .iter()
        .map(|&l| (l, stats.tuple_cap(expr.root(), l)))
        .collect();
    let condensed = condense(&sigma, &labels, &caps).unwrap();
    println!(
        "condensed view: {:?}",
        condensed
            .vertices
            .iter()
            .map(|&v| v + 1)
            .collect::<Vec<_>>()
    );

    // The solver only trusts orderings that are nice to every join: early
    // vertices of joined classes must interleave tightly enough.
    let nice_at_root = is_nice_global(&sigma, &expr, &views, t_max, expr.root());
    println!("identity ordering nice to the root join: {nice_at_root}");

    // The repair makes the ordering nice everywhere without growing the
    // deficient set.
    let fixed = niceify(&sigma, &expr, t_max);
    println!(
        "repaired ordering: {:?}",
        fixed.sequence().iter().map(|&v| v + 1).collect::<Vec<_>>()
    );
    let all_nice = expr
        .postorder()
        .all(|sub| is_nice_global(&fixed, &expr, &views, t_max, sub));
    let fixed_deficient = deficiency(&graph, &thr, &fixed).unwrap();
    println!(
        "nice everywhere: {all_nice}; deficient now: {:?}",
        fixed_deficient.iter().map(|&v| v + 1).collect::<Vec<_>>()
    );
    assert!(all_nice);
    assert!(fixed_deficient.is_subset(&deficient));
}

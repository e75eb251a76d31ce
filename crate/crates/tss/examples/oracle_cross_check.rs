//! Cross-validate the dynamic program against exhaustive search on random
//! small instances, the same way the self-test suites do.
//!
//! ```bash
//! cargo run --release --example oracle_cross_check
//! ```

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tss::corpus;
use tss::cwexpr;
use tss::oracle;
use tss::solver::{solve, SolveOptions};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    let cases = 300;
    let mut checked_orderings = 0;

    for case in 0..cases {
        // A random irredundant expression over up to 7 vertices.
        let n = rng.gen_range(2..=7);
        let labels = rng.gen_range(2..=4);
        let expr = corpus::random_irredundant_expr(&mut rng, n, labels);
        let t_max = rng.gen_range(1..=2);
        let thr = corpus::random_thresholds(&mut rng, expr.vertex_count(), t_max);
        let graph = cwexpr::evaluate(&expr).graph;

        let dp = solve(&expr, &thr, &SolveOptions::default())
            .expect("solves")
            .min_target_size;
        let (by_subsets, witness) = oracle::brute_force_min_target(&graph, &thr).unwrap();
        assert_eq!(
            dp, by_subsets,
            "case {case}: solver disagrees with subsets ({expr})"
        );
        assert!(oracle::is_target_set(&graph, &thr, &witness));

        // The permutation oracle checks the other problem formulation.
        if graph.vertex_count() <= 6 {
            let by_orderings = oracle::min_target_via_orderings(&graph, &thr).unwrap();
            assert_eq!(dp, by_orderings, "case {case}: formulations disagree");
            checked_orderings += 1;
        }
    }
    println!("{cases} random instances: dynamic program == subset oracle");
    println!("{checked_orderings} of them also checked against the ordering oracle");

    // The packaged self-test runs the full battery behind one call.
    let outcome = tss::selftest::run(7, 40, &tss::selftest::default_solver);
    for (suite, n) in &outcome.suites {
        println!("selftest suite {suite}: {n} cases");
    }
    assert!(outcome.passed());
    println!("selftest passed");
}

//! Seeded self-test suites: solver-versus-oracle equivalence, equivalence of
//! the two problem formulations, the join credit identity, and the ordering
//! repair postconditions. Every failure carries replayable `.tss`/`.cwe`
//! text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::cwexpr::{self, CwExpr, Node};
use crate::format::write_tss;
use crate::graph::{deficiency, ThresholdMap};
use crate::oracle::{self, Deact};
use crate::solver::{self, Afo, LocalOrdering, SolveError, SolveOptions};

/// Solver under test; the default is [`default_solver`]. Tests inject a
/// corrupted one to prove the harness catches disagreements.
pub type SolverFn<'a> = dyn Fn(&CwExpr, &ThresholdMap) -> Result<u32, SolveError> + 'a;

pub fn default_solver(e: &CwExpr, thr: &ThresholdMap) -> Result<u32, SolveError> {
    Ok(solver::solve(e, thr, &SolveOptions::default())?.min_target_size)
}

/// A reproducible failing instance.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub suite: &'static str,
    pub detail: String,
    /// `.tss` text of the instance graph and thresholds.
    pub tss_text: String,
    /// `.cwe` text of the expression, when one is involved.
    pub cwe_text: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// `(suite name, cases run)` in execution order.
    pub suites: Vec<(&'static str, u32)>,
    pub failures: Vec<Counterexample>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs all suites with `cases` instances each, deterministically in `seed`.
pub fn run(seed: u64, cases: u32, solve: &SolverFn) -> Outcome {
    let mut outcome = Outcome::default();
    solver_matches_subset_oracle(seed, cases, solve, &mut outcome);
    formulations_agree(seed, cases, &mut outcome);
    join_credit_identity(seed, cases, &mut outcome);
    repair_preserves_activation(seed, cases, &mut outcome);
    outcome
}

fn solver_matches_subset_oracle(seed: u64, cases: u32, solve: &SolverFn, outcome: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    for case in 0..cases {
        let (expr, thr) = random_instance(&mut rng, case);
        let g = cwexpr::evaluate(&expr).graph;
        let expected = match oracle::brute_force_min_target(&g, &thr) {
            Ok((k, _)) => k,
            Err(e) => unreachable!("corpus stays under the oracle limit: {e}"),
        };
        let got = solve(&expr, &thr);
        if got.as_ref() != Ok(&expected) {
            outcome.failures.push(Counterexample {
                suite: "solver-vs-subset-oracle",
                detail: format!("case {case}: solver returned {got:?}, oracle says {expected}"),
                tss_text: write_tss(&g, &thr),
                cwe_text: Some(expr.to_string()),
            });
        }
    }
    outcome.suites.push(("solver-vs-subset-oracle", cases));
}

fn formulations_agree(seed: u64, cases: u32, outcome: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
    for case in 0..cases {
        let n = rng.gen_range(1..=6);
        let g = corpus::random_graph(&mut rng, n, 0.5);
        let t_max = rng.gen_range(1..=2);
        let thr = corpus::random_thresholds(&mut rng, n, t_max);
        let by_subsets = oracle::brute_force_min_target(&g, &thr).expect("n <= 6").0;
        let by_orderings = oracle::min_target_via_orderings(&g, &thr).expect("n <= 6");
        if by_subsets != by_orderings {
            outcome.failures.push(Counterexample {
                suite: "formulation-equivalence",
                detail: format!(
                    "case {case}: subsets say {by_subsets}, orderings say {by_orderings}"
                ),
                tss_text: write_tss(&g, &thr),
                cwe_text: None,
            });
        }
    }
    outcome.suites.push(("formulation-equivalence", cases));
}

/// For a join root, a repaired ordering, and arbitrary credits: transforming
/// the credit map must agree, on every vertex, with directly counting the
/// vertex's earlier join partners (capped at `t_max`).
fn join_credit_identity(seed: u64, cases: u32, outcome: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0003);
    for case in 0..cases {
        let n = rng.gen_range(2..=7);
        let labels = rng.gen_range(2..=4);
        let expr = corpus::random_eta_rooted_expr(&mut rng, n, labels);
        let t_max = rng.gen_range(1..=2);
        let thr = corpus::random_thresholds(&mut rng, expr.vertex_count(), t_max);
        if let Some(detail) = check_join_credit_identity(&mut rng, &expr, &thr) {
            let g = cwexpr::evaluate(&expr).graph;
            outcome.failures.push(Counterexample {
                suite: "join-credit-identity",
                detail: format!("case {case}: {detail}"),
                tss_text: write_tss(&g, &thr),
                cwe_text: Some(expr.to_string()),
            });
        }
    }
    outcome.suites.push(("join-credit-identity", cases));
}

/// One identity check; `None` means it held for every vertex.
pub fn check_join_credit_identity(
    rng: &mut impl Rng,
    expr: &CwExpr,
    thr: &ThresholdMap,
) -> Option<String> {
    let Node::Eta { a, b, .. } = *expr.node(expr.root()) else {
        return Some("expression root is not a join".into());
    };
    let t_max = thr.t_max();
    let n = expr.vertex_count();
    let lg = cwexpr::evaluate(expr);
    let stats = cwexpr::node_stats(expr, thr).expect("thresholds cover the expression");

    let sigma = oracle::niceify(&corpus::random_ordering(rng, n), expr, t_max);
    let caps: BTreeMap<_, _> = stats
        .labset(expr.root())
        .iter()
        .map(|&l| (l, stats.tuple_cap(expr.root(), l)))
        .collect();
    let condensed = oracle::condense(&sigma, &lg.labels, &caps).expect("caps within classes");
    let ordering = LocalOrdering::new(
        condensed
            .vertices
            .iter()
            .map(|&v| (lg.labels[v as usize], thr.get(v)))
            .collect(),
    );
    let afo = Afo {
        by_pos: (0..ordering.len())
            .map(|_| rng.gen_range(0..=t_max))
            .collect(),
        by_label: stats
            .labset(expr.root())
            .iter()
            .map(|&l| (l, rng.gen_range(0..=t_max)))
            .collect(),
    };

    let transformed = solver::eta_transform_afo(&ordering, &afo, a, b, t_max);
    for v in 0..n {
        let address = oracle::deact(&sigma, &lg.labels, &caps, v).expect("caps verified");
        let (before, after) = match address {
            Deact::Position(i) => (afo.position_value(i), transformed.position_value(i)),
            Deact::Label(l) => (afo.label_value(l), transformed.label_value(l)),
        };
        let lv = lg.labels[v as usize];
        let partner = if lv == a {
            b
        } else if lv == b {
            a
        } else {
            lv
        };
        let new_partners = if partner == lv {
            0
        } else {
            (0..n)
                .filter(|&u| {
                    lg.labels[u as usize] == partner && sigma.position(u) < sigma.position(v)
                })
                .count() as u32
        };
        let expected = t_max.min(before + new_partners);
        if after != expected {
            return Some(format!(
                "vertex {} at {address:?}: transform gives {after}, direct count gives \
                 {expected} (credit {before} + {new_partners} earlier partners)",
                v + 1,
            ));
        }
    }
    None
}

/// The ordering repair must produce an ordering nice to every subexpression
/// without growing the deficiency.
fn repair_preserves_activation(seed: u64, cases: u32, outcome: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0004);
    for case in 0..cases {
        let n = rng.gen_range(2..=7);
        let labels = rng.gen_range(2..=4);
        let expr = corpus::random_irredundant_expr(&mut rng, n, labels);
        let t_max = rng.gen_range(1..=2);
        let thr = corpus::random_thresholds(&mut rng, expr.vertex_count(), t_max);
        let g = cwexpr::evaluate(&expr).graph;
        let sigma = corpus::random_ordering(&mut rng, expr.vertex_count());
        let fixed = oracle::niceify(&sigma, &expr, t_max);

        let views = cwexpr::node_views(&expr);
        let not_nice: Vec<_> = expr
            .postorder()
            .filter(|&sub| !oracle::is_nice_global(&fixed, &expr, &views, t_max, sub))
            .collect();
        let before = deficiency(&g, &thr, &sigma).expect("consistent instance");
        let after = deficiency(&g, &thr, &fixed).expect("consistent instance");
        if !not_nice.is_empty() || !after.is_subset(&before) {
            let mut detail = format!("case {case}:");
            if !not_nice.is_empty() {
                let _ = write!(
                    detail,
                    " result not nice at {} subexpressions;",
                    not_nice.len()
                );
            }
            if !after.is_subset(&before) {
                let _ = write!(
                    detail,
                    " deficiency grew from {:?} to {:?} (input ordering {:?});",
                    before,
                    after,
                    sigma.sequence(),
                );
            }
            outcome.failures.push(Counterexample {
                suite: "ordering-repair",
                detail,
                tss_text: write_tss(&g, &thr),
                cwe_text: Some(expr.to_string()),
            });
        }
    }
    outcome.suites.push(("ordering-repair", cases));
}

/// A mix of builder families, exhaustive-style naive expressions, and grown
/// random expressions, all within the subset oracle's limit.
fn random_instance(rng: &mut impl Rng, case: u32) -> (CwExpr, ThresholdMap) {
    let t_max = rng.gen_range(1..=2);
    let expr = match case % 5 {
        0 => cwexpr::path(rng.gen_range(2..=8)),
        1 => cwexpr::clique(rng.gen_range(2..=6)),
        2 => cwexpr::complete_bipartite(rng.gen_range(1..=3), rng.gen_range(1..=3)),
        3 => {
            let n = rng.gen_range(1..=5);
            cwexpr::naive(&corpus::random_graph(rng, n, 0.5))
        }
        _ => {
            let n = rng.gen_range(2..=7);
            let labels = rng.gen_range(2..=4);
            corpus::random_irredundant_expr(rng, n, labels)
        }
    };
    let thr = corpus::random_thresholds(rng, expr.vertex_count(), t_max);
    (expr, thr)
}

//! Exact Target Set Selection over clique-width expressions.
//!
//! Target Set Selection asks for a smallest vertex set whose activation
//! cascades to the whole graph, where a vertex may activate once at least
//! `thr(v)` of its neighbors are active. This crate solves the problem
//! exactly with a dynamic program that walks a clique-width expression of
//! the graph, with running time linear in the expression length for fixed
//! width and maximum threshold. Small-instance brute-force oracles
//! cross-validate every part of the pipeline.
//!
//! The main entry points:
//!
//! - [`cwexpr`]: the expression language (`.cwe` syntax), evaluation,
//!   irredundancy checking, and graph-family builders;
//! - [`solver`]: the dynamic program, [`solver::solve`] and
//!   [`solver::solve_with_witness`];
//! - [`oracle`]: round-based activation and exhaustive minimum-target-set
//!   searches for cross-checks;
//! - [`cli`]: the `tss` command-line front end over `.tss` graph files.
//!
//! See the `examples/` directory for one runnable program per capability:
//!
//! ```bash
//! cargo run --example solve_min_target
//! cargo run --example oracle_cross_check
//! ```

pub mod cli;
pub mod corpus;
pub mod cwexpr;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod oracle;
pub mod selftest;
pub mod solver;

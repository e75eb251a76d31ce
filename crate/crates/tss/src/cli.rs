//! Command-line front end: `.tss`/`.cwe` ingestion, command dispatch, JSON
//! reports, and the self-test runner.
//!
//! Exit codes: 0 success, 1 self-test failure, 2 input or validation error,
//! 3 resource limit exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::cwexpr::{self, CwExpr, ParseError};
use crate::format::{read_tss, write_tss, TssFormatError};
use crate::graph::{Graph, ThresholdMap, VertexSet};
use crate::oracle::{self, OracleError, ORDERING_ORACLE_LIMIT, SUBSET_ORACLE_LIMIT};
use crate::selftest;
use crate::solver::{self, SolveError, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TEST_FAILURE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_RESOURCE_LIMIT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    GraphFormat {
        path: PathBuf,
        source: TssFormatError,
    },
    #[error("{path}: {source}")]
    ExprFormat { path: PathBuf, source: ParseError },
    #[error("expression does not describe the graph file: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    BadArgument(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(OracleError::TooLarge { .. })
            | CliError::Solve(SolveError::StateBudgetExceeded { .. }) => EXIT_RESOURCE_LIMIT,
            _ => EXIT_INPUT_ERROR,
        }
    }
}

/// Exact Target Set Selection over clique-width expressions.
#[derive(Debug, Parser)]
#[command(name = "tss", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance exactly with the expression-guided dynamic program.
    Solve(SolveArgs),
    /// Solve a small instance by exhaustive search (cross-validation).
    Oracle(OracleArgs),
    /// Inspect, normalize, evaluate, or generate expressions.
    Expr(ExprArgs),
    /// Run the seeded cross-validation suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Zero out timing fields so identical runs emit identical bytes.
    #[arg(long)]
    stable: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance graph and thresholds (.tss).
    graph: PathBuf,
    /// Clique-width expression describing the same graph (.cwe).
    expr: PathBuf,
    /// Also assemble a minimum target set.
    #[arg(long)]
    reconstruct: bool,
    /// Cap on materialized solver states.
    #[arg(long, value_name = "N")]
    max_states: Option<usize>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Instance graph and thresholds (.tss).
    graph: PathBuf,
    /// Search strategy: enumerate vertex subsets or global orderings.
    #[arg(long, value_parser = ["subsets", "orderings"], default_value = "subsets")]
    method: String,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Args)]
struct ExprArgs {
    #[command(subcommand)]
    action: ExprAction,
}

#[derive(Debug, Subcommand)]
enum ExprAction {
    /// Check structural validity and irredundancy.
    Validate { expr: PathBuf },
    /// Drop joins that add no edges; fails on partially redundant joins.
    Normalize { expr: PathBuf },
    /// Evaluate to the described graph, printed as .tss plus label comments.
    Eval { expr: PathBuf },
    /// Emit a .cwe expression for a built-in graph family.
    Build {
        /// Family: path <n> | clique <n> | biclique <a> <b> | naive <graph.tss>
        family: String,
        args: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Seed for the deterministic case generators.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Cases per suite.
    #[arg(long, default_value_t = 100)]
    cases: u32,
}

/// Per-run instance facts echoed into every report.
#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct InstanceInfo {
    pub n: u32,
    pub m: usize,
    pub t_max: u32,
    /// Number of labels of the expression; absent for oracle runs.
    pub width: Option<u32>,
}

/// The report printed by `solve` and `oracle` (stable field order).
#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct RunReport {
    pub min_target_size: Option<u32>,
    /// External 1-based vertex ids, ascending; present when reconstructed.
    pub target_set: Option<Vec<u32>>,
    pub method: String,
    pub states_expanded: usize,
    pub elapsed_ms: u64,
    pub instance: InstanceInfo,
}

impl RunReport {
    fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance: n={} m={} t_max={}{}",
            self.instance.n,
            self.instance.m,
            self.instance.t_max,
            match self.instance.width {
                Some(w) => format!(" width={w}"),
                None => String::new(),
            }
        );
        match self.min_target_size {
            Some(k) => {
                let _ = writeln!(
                    out,
                    "minimum target set size: {k} (method: {})",
                    self.method
                );
            }
            None => {
                let _ = writeln!(out, "no value computed (method: {})", self.method);
            }
        }
        if let Some(target) = &self.target_set {
            let ids: Vec<String> = target.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "target set: {{{}}}", ids.join(", "));
        }
        let _ = writeln!(
            out,
            "states expanded: {}, elapsed: {} ms",
            self.states_expanded, self.elapsed_ms
        );
        out
    }
}

/// Parses arguments, runs the command, prints to stdout/stderr, and returns
/// the exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text.
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Expr(args) => cmd_expr(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<(Graph, ThresholdMap), CliError> {
    read_tss(&read_file(path)?).map_err(|source| CliError::GraphFormat {
        path: path.to_path_buf(),
        source,
    })
}

fn load_expr(path: &Path) -> Result<CwExpr, CliError> {
    cwexpr::parse(&read_file(path)?).map_err(|source| CliError::ExprFormat {
        path: path.to_path_buf(),
        source,
    })
}

/// The expression must evaluate to exactly the graph from the file: same
/// vertex ids, same edge set (labels are not part of the comparison).
fn check_expression_matches(expr: &CwExpr, g: &Graph) -> Result<(), CliError> {
    let evaluated = cwexpr::evaluate(expr).graph;
    if evaluated.vertex_count() != g.vertex_count() {
        return Err(CliError::Mismatch(format!(
            "expression has {} vertices, graph file has {}",
            evaluated.vertex_count(),
            g.vertex_count()
        )));
    }
    for (u, v) in evaluated.edges() {
        if !g.has_edge(u, v) {
            return Err(CliError::Mismatch(format!(
                "expression adds edge ({}, {}) that the graph file does not list",
                u + 1,
                v + 1
            )));
        }
    }
    for (u, v) in g.edges() {
        if !evaluated.has_edge(u, v) {
            return Err(CliError::Mismatch(format!(
                "graph file lists edge ({}, {}) that the expression does not produce",
                u + 1,
                v + 1
            )));
        }
    }
    Ok(())
}

fn external_ids(s: &VertexSet) -> Vec<u32> {
    s.iter().map(|&v| v + 1).collect()
}

fn cmd_solve(args: SolveArgs) -> Result<i32, CliError> {
    let (graph, thr) = load_graph(&args.graph)?;
    let expr = load_expr(&args.expr)?;
    check_expression_matches(&expr, &graph)?;

    let mut opts = SolveOptions::default();
    if let Some(n) = args.max_states {
        opts.max_states = n;
    }
    let started = Instant::now();
    let (outcome, witness) = if args.reconstruct {
        let (outcome, witness) = solver::solve_with_witness(&expr, &thr, &opts)?;
        (outcome, Some(witness))
    } else {
        (solver::solve(&expr, &thr, &opts)?, None)
    };
    let elapsed_ms = if args.report.stable {
        0
    } else {
        started.elapsed().as_millis() as u64
    };

    let report = RunReport {
        min_target_size: Some(outcome.min_target_size),
        target_set: witness.as_ref().map(external_ids),
        method: "dp".into(),
        states_expanded: outcome.states_expanded,
        elapsed_ms,
        instance: InstanceInfo {
            n: graph.vertex_count(),
            m: graph.edge_count(),
            t_max: thr.t_max(),
            width: Some(expr.width()),
        },
    };
    print!("{}", report.render(args.report.json));
    Ok(EXIT_OK)
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, CliError> {
    let (graph, thr) = load_graph(&args.graph)?;
    let started = Instant::now();
    let (run, method) = match args.method.as_str() {
        "subsets" => (
            oracle::subset_oracle_run(&graph, &thr, SUBSET_ORACLE_LIMIT)?,
            "oracle-subsets",
        ),
        "orderings" => (
            oracle::ordering_oracle_run(&graph, &thr, ORDERING_ORACLE_LIMIT)?,
            "oracle-orderings",
        ),
        other => return Err(CliError::BadArgument(format!("unknown method '{other}'"))),
    };
    let elapsed_ms = if args.report.stable {
        0
    } else {
        started.elapsed().as_millis() as u64
    };

    let report = RunReport {
        min_target_size: Some(run.k),
        target_set: run.witness.as_ref().map(external_ids),
        method: method.into(),
        states_expanded: run.candidates,
        elapsed_ms,
        instance: InstanceInfo {
            n: graph.vertex_count(),
            m: graph.edge_count(),
            t_max: thr.t_max(),
            width: None,
        },
    };
    print!("{}", report.render(args.report.json));
    Ok(EXIT_OK)
}

fn cmd_expr(args: ExprArgs) -> Result<i32, CliError> {
    match args.action {
        ExprAction::Validate { expr } => {
            let e = load_expr(&expr)?;
            let violations = cwexpr::check_irredundant(&e);
            if violations.is_empty() {
                println!("irredundant");
                Ok(EXIT_OK)
            } else {
                for node in &violations {
                    println!("redundant join at {}", e.node_path(*node));
                }
                Ok(EXIT_INPUT_ERROR)
            }
        }
        ExprAction::Normalize { expr } => {
            let e = load_expr(&expr)?;
            let normal = cwexpr::normalize(&e).map_err(SolveError::Expr)?;
            println!("{normal}");
            Ok(EXIT_OK)
        }
        ExprAction::Eval { expr } => {
            let e = load_expr(&expr)?;
            let lg = cwexpr::evaluate(&e);
            let zero_thr = ThresholdMap::from_thresholds(vec![0; lg.graph.vertex_count() as usize]);
            print!("{}", write_tss(&lg.graph, &zero_thr));
            for (v, &l) in lg.labels.iter().enumerate() {
                println!("c label {} {}", v + 1, e.label_name(l));
            }
            Ok(EXIT_OK)
        }
        ExprAction::Build { family, args } => {
            let e = build_family(&family, &args)?;
            println!("{e}");
            Ok(EXIT_OK)
        }
    }
}

fn build_family(family: &str, args: &[String]) -> Result<CwExpr, CliError> {
    let parse_n = |idx: usize| -> Result<u32, CliError> {
        args.get(idx)
            .and_then(|s| s.parse::<u32>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::BadArgument(format!(
                    "family '{family}' needs a positive size at position {}",
                    idx + 1
                ))
            })
    };
    match family {
        "path" => Ok(cwexpr::path(parse_n(0)?)),
        "clique" => Ok(cwexpr::clique(parse_n(0)?)),
        "biclique" => Ok(cwexpr::complete_bipartite(parse_n(0)?, parse_n(1)?)),
        "naive" => {
            let path = args.first().ok_or_else(|| {
                CliError::BadArgument("family 'naive' needs a .tss graph path".into())
            })?;
            let (graph, _) = load_graph(Path::new(path))?;
            Ok(cwexpr::naive(&graph))
        }
        other => Err(CliError::BadArgument(format!(
            "unknown family '{other}' (expected path, clique, biclique or naive)"
        ))),
    }
}

fn cmd_selftest(args: SelftestArgs) -> Result<i32, CliError> {
    let outcome = selftest::run(args.seed, args.cases, &selftest::default_solver);
    for (suite, cases) in &outcome.suites {
        let failed = outcome
            .failures
            .iter()
            .filter(|f| f.suite == *suite)
            .count();
        let status = if failed == 0 { "pass" } else { "FAIL" };
        println!("[{status}] {suite}: {cases} cases, {failed} failures");
    }
    for failure in &outcome.failures {
        println!("--- counterexample ({}) ---", failure.suite);
        println!("{}", failure.detail);
        println!("# instance (.tss)");
        print!("{}", failure.tss_text);
        if let Some(cwe) = &failure.cwe_text {
            println!("# expression (.cwe)");
            println!("{cwe}");
        }
    }
    if outcome.passed() {
        println!(
            "selftest passed (seed {}, {} cases per suite)",
            args.seed, args.cases
        );
        Ok(EXIT_OK)
    } else {
        println!(
            "selftest FAILED: {} counterexamples",
            outcome.failures.len()
        );
        Ok(EXIT_TEST_FAILURE)
    }
}

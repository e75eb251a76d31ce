//! The `.tss` graph file format.
//!
//! UTF-8 text, one record per line: `c ...` comments, a single header
//! `p tss <n> <m>`, one `n <id> <thr>` line per vertex (ids `1..=n`), and one
//! `e <u> <v>` line per edge with `u != v`, each edge listed once.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, ThresholdMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TssFormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { line: usize, id: i64, n: u32 },
    #[error("line {line}: duplicate threshold for vertex {id}")]
    DuplicateVertex { line: usize, id: u32 },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: u32 },
    #[error("missing threshold for vertex {id}")]
    MissingVertex { id: u32 },
    #[error("header says {expected} edges, file lists {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("missing 'p tss <n> <m>' header")]
    MissingHeader,
}

/// Parses `.tss` text into a graph and its thresholds (`t_max` is the
/// maximum threshold present).
pub fn read_tss(text: &str) -> Result<(Graph, ThresholdMap), TssFormatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut thresholds: Vec<Option<u32>> = Vec::new();
    let mut graph = Graph::new(0);
    let mut edges_seen = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let malformed = |message: String| TssFormatError::Malformed { line, message };
        match fields.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(malformed("duplicate 'p' header".into()));
                }
                if fields.len() != 4 || fields[1] != "tss" {
                    return Err(malformed("expected 'p tss <n> <m>'".into()));
                }
                let n: u32 = fields[2]
                    .parse()
                    .map_err(|_| malformed(format!("bad vertex count '{}'", fields[2])))?;
                let m: usize = fields[3]
                    .parse()
                    .map_err(|_| malformed(format!("bad edge count '{}'", fields[3])))?;
                thresholds = vec![None; n as usize];
                graph = Graph::new(n);
                header = Some((n, m));
            }
            Some("n") => {
                let (n, _) = header.ok_or(TssFormatError::MissingHeader)?;
                if fields.len() != 3 {
                    return Err(malformed("expected 'n <id> <thr>'".into()));
                }
                let id: i64 = fields[1]
                    .parse()
                    .map_err(|_| malformed(format!("bad vertex id '{}'", fields[1])))?;
                if id < 1 || id > n as i64 {
                    return Err(TssFormatError::VertexOutOfRange { line, id, n });
                }
                let id = id as u32;
                let thr: u32 = fields[2]
                    .parse()
                    .map_err(|_| malformed(format!("bad threshold '{}'", fields[2])))?;
                let slot = &mut thresholds[(id - 1) as usize];
                if slot.is_some() {
                    return Err(TssFormatError::DuplicateVertex { line, id });
                }
                *slot = Some(thr);
            }
            Some("e") => {
                let (n, _) = header.ok_or(TssFormatError::MissingHeader)?;
                if fields.len() != 3 {
                    return Err(malformed("expected 'e <u> <v>'".into()));
                }
                let mut ids = [0u32; 2];
                for (slot, f) in ids.iter_mut().zip(&fields[1..]) {
                    let id: i64 = f
                        .parse()
                        .map_err(|_| malformed(format!("bad vertex id '{f}'")))?;
                    if id < 1 || id > n as i64 {
                        return Err(TssFormatError::VertexOutOfRange { line, id, n });
                    }
                    *slot = id as u32;
                }
                let [u, v] = ids;
                if u == v {
                    return Err(TssFormatError::SelfLoop { line, id: u });
                }
                if graph.has_edge(u - 1, v - 1) {
                    return Err(TssFormatError::DuplicateEdge {
                        line,
                        u: u.min(v),
                        v: u.max(v),
                    });
                }
                graph.add_edge(u - 1, v - 1).expect("bounds checked above");
                edges_seen += 1;
            }
            Some(other) => {
                return Err(malformed(format!("unknown record '{other}'")));
            }
        }
    }

    let (_, m) = header.ok_or(TssFormatError::MissingHeader)?;
    if edges_seen != m {
        return Err(TssFormatError::EdgeCountMismatch {
            expected: m,
            found: edges_seen,
        });
    }
    let mut thr = Vec::with_capacity(thresholds.len());
    for (i, t) in thresholds.iter().enumerate() {
        match t {
            Some(t) => thr.push(*t),
            None => return Err(TssFormatError::MissingVertex { id: i as u32 + 1 }),
        }
    }
    Ok((graph, ThresholdMap::from_thresholds(thr)))
}

/// Serializes a graph and thresholds as `.tss` text.
pub fn write_tss(g: &Graph, thr: &ThresholdMap) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p tss {} {}", g.vertex_count(), g.edge_count());
    for v in g.vertices() {
        let _ = writeln!(out, "n {} {}", v + 1, thr.get(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

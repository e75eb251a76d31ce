//! Deterministic instance generators for the cross-validation suites:
//! exhaustive small-graph families and seeded random graphs, thresholds,
//! orderings, and irredundant expressions.

use rand::prelude::SliceRandom;
use rand::Rng;

use crate::cwexpr::{CwExpr, ExprBuilder, LabelId, NodeId};
use crate::graph::{GlobalOrdering, Graph, ThresholdMap, VertexId};

/// Every simple graph on `n` labeled vertices (one per edge-subset mask).
pub fn all_graphs(n: u32) -> Vec<Graph> {
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::from_edges(n, edges).expect("mask edges are simple")
        })
        .collect()
}

/// Every threshold assignment `V -> [0, t_max]`, odometer order.
pub fn all_threshold_maps(n: u32, t_max: u32) -> Vec<ThresholdMap> {
    let mut out = Vec::new();
    let mut thr = vec![0u32; n as usize];
    loop {
        out.push(ThresholdMap::new(thr.clone(), t_max).expect("values bounded by t_max"));
        let mut i = 0;
        loop {
            if i == thr.len() {
                return out;
            }
            thr[i] += 1;
            if thr[i] <= t_max {
                break;
            }
            thr[i] = 0;
            i += 1;
        }
    }
}

pub fn random_graph(rng: &mut impl Rng, n: u32, edge_prob: f64) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(edge_prob))
        .collect::<Vec<_>>();
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

pub fn random_thresholds(rng: &mut impl Rng, n: u32, t_max: u32) -> ThresholdMap {
    ThresholdMap::new((0..n).map(|_| rng.gen_range(0..=t_max)).collect(), t_max)
        .expect("sampled within bounds")
}

pub fn random_ordering(rng: &mut impl Rng, n: u32) -> GlobalOrdering {
    let mut seq: Vec<VertexId> = (0..n).collect();
    seq.shuffle(rng);
    GlobalOrdering::from_sequence(&seq).expect("shuffle keeps a permutation")
}

const LABEL_NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// Incrementally grown random expression that stays irredundant: joins are
/// only applied to nonempty classes with no cross edge yet.
struct GrownExpr {
    builder: ExprBuilder,
    root: NodeId,
    labels: Vec<LabelId>,
    /// Members per label, indexed like `labels`.
    classes: Vec<Vec<VertexId>>,
    edges: std::collections::BTreeSet<(VertexId, VertexId)>,
    next_ext_id: u32,
}

impl GrownExpr {
    fn new(rng: &mut impl Rng, label_count: usize) -> Self {
        let mut builder = ExprBuilder::new();
        let labels: Vec<LabelId> = LABEL_NAMES[..label_count]
            .iter()
            .map(|n| builder.label(n))
            .collect();
        let first = rng.gen_range(0..labels.len());
        let root = builder.vertex(1, labels[first]).expect("fresh id");
        let mut classes = vec![Vec::new(); labels.len()];
        classes[first].push(0);
        GrownExpr {
            builder,
            root,
            labels,
            classes,
            edges: Default::default(),
            next_ext_id: 2,
        }
    }

    fn add_vertex(&mut self, rng: &mut impl Rng) {
        let li = rng.gen_range(0..self.labels.len());
        let leaf = self
            .builder
            .vertex(self.next_ext_id, self.labels[li])
            .expect("fresh id");
        self.classes[li].push(self.next_ext_id - 1);
        self.next_ext_id += 1;
        self.root = self.builder.union(self.root, leaf).expect("arena push");
    }

    /// Label pairs whose join would be irredundant and add at least one edge.
    fn joinable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            for j in i + 1..self.labels.len() {
                if self.classes[i].is_empty() || self.classes[j].is_empty() {
                    continue;
                }
                let clean = self.classes[i].iter().all(|&u| {
                    self.classes[j]
                        .iter()
                        .all(|&v| !self.edges.contains(&(u.min(v), u.max(v))))
                });
                if clean {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn join(&mut self, i: usize, j: usize) {
        for ci in 0..self.classes[i].len() {
            for cj in 0..self.classes[j].len() {
                let (u, v) = (self.classes[i][ci], self.classes[j][cj]);
                self.edges.insert((u.min(v), u.max(v)));
            }
        }
        self.root = self
            .builder
            .eta(self.labels[i], self.labels[j], self.root)
            .expect("labels differ");
    }

    fn relabel(&mut self, from: usize, to: usize) {
        let moved = std::mem::take(&mut self.classes[from]);
        self.classes[to].extend(moved);
        self.classes[to].sort_unstable();
        self.root = self
            .builder
            .rho(self.labels[from], self.labels[to], self.root)
            .expect("labels differ");
    }

    fn finish(self) -> CwExpr {
        self.builder
            .finish(self.root)
            .expect("ids are dense by construction")
    }
}

/// A random irredundant expression on `n` vertices over at most
/// `label_count` labels (2..=4).
pub fn random_irredundant_expr(rng: &mut impl Rng, n: u32, label_count: usize) -> CwExpr {
    grow(rng, n, label_count).finish()
}

/// Like [`random_irredundant_expr`] but the root is a join of two nonempty
/// classes. A fresh vertex on an empty label is joined in when no natural
/// candidate pair exists.
pub fn random_eta_rooted_expr(rng: &mut impl Rng, n: u32, label_count: usize) -> CwExpr {
    let mut grown = grow(rng, n.max(2) - 1, label_count);
    let pairs = grown.joinable_pairs();
    if let Some(&(i, j)) = pairs.as_slice().choose(rng) {
        grown.join(i, j);
    } else {
        // Free up a label by moving everything off it, then join the fresh
        // vertex against any nonempty class.
        let empty = match grown.classes.iter().position(Vec::is_empty) {
            Some(i) => i,
            None => {
                let from = rng.gen_range(0..grown.labels.len());
                let to = (from + 1) % grown.labels.len();
                grown.relabel(from, to);
                from
            }
        };
        let leaf = grown
            .builder
            .vertex(grown.next_ext_id, grown.labels[empty])
            .expect("fresh id");
        grown.classes[empty].push(grown.next_ext_id - 1);
        grown.next_ext_id += 1;
        grown.root = grown.builder.union(grown.root, leaf).expect("arena push");
        let partner = (0..grown.labels.len())
            .find(|&i| i != empty && !grown.classes[i].is_empty())
            .expect("at least one other vertex exists");
        grown.join(empty.min(partner), empty.max(partner));
    }
    grown.finish()
}

fn grow(rng: &mut impl Rng, n: u32, label_count: usize) -> GrownExpr {
    let label_count = label_count.clamp(2, LABEL_NAMES.len());
    let mut grown = GrownExpr::new(rng, label_count);
    while grown.next_ext_id <= n {
        grown.add_vertex(rng);
        // A few structural operations between vertex introductions.
        for _ in 0..rng.gen_range(0..3) {
            match rng.gen_range(0..3) {
                0 | 1 => {
                    let pairs = grown.joinable_pairs();
                    if let Some(&(i, j)) = pairs.as_slice().choose(rng) {
                        grown.join(i, j);
                    }
                }
                _ => {
                    let nonempty: Vec<usize> = (0..grown.labels.len())
                        .filter(|&i| !grown.classes[i].is_empty())
                        .collect();
                    let from = *nonempty.as_slice().choose(rng).expect("one vertex exists");
                    let to = (0..grown.labels.len())
                        .filter(|&i| i != from)
                        .nth(rng.gen_range(0..grown.labels.len() - 1))
                        .expect("two labels exist");
                    grown.relabel(from, to);
                }
            }
        }
    }
    grown
}

//! State transfers of the dynamic program: the local niceness filter, the
//! join credit transform, completion of partial orderings, and the state
//! families for union and relabel nodes.

use std::collections::HashSet;

use crate::cwexpr::{LabelId, NodeId, NodeStats};

use super::state::{Afo, LocalOrdering, State};
use super::{BudgetGuard, SolveError};

/// Local counterpart of the global niceness check: if the ordering has a
/// `(t_max + 1)`-st tuple of one joined label, it must sit after the
/// `min(t_max, class size)`-th tuple of the other label. Absent indexed
/// tuples make a clause hold vacuously.
pub fn is_nice_local(
    a: &LocalOrdering,
    la: LabelId,
    lb: LabelId,
    stats: &NodeStats,
    node: NodeId,
) -> bool {
    let t_max = stats.t_max();
    let pos_a = a.positions_of(la);
    let pos_b = a.positions_of(lb);
    nice_side(&pos_a, &pos_b, t_max, stats.crucial_cap(node, lb))
        && nice_side(&pos_b, &pos_a, t_max, stats.crucial_cap(node, la))
}

fn nice_side(pos_x: &[usize], pos_y: &[usize], t_max: u32, crucial_y: u32) -> bool {
    let Some(&extra_x) = pos_x.get(t_max as usize) else {
        return true;
    };
    if crucial_y == 0 {
        return true;
    }
    match pos_y.get(crucial_y as usize - 1) {
        Some(&py) => extra_x > py,
        None => true,
    }
}

/// Credit adjustment for a join of `la` and `lb`: every key gains the number
/// of join partners ordered before it, capped at `t_max`. Positions count
/// earlier positions of the other label; label keys (ordered after all
/// positions) count every position of the other label.
pub fn eta_transform_afo(
    a: &LocalOrdering,
    afo: &Afo,
    la: LabelId,
    lb: LabelId,
    t_max: u32,
) -> Afo {
    let other = |l: LabelId| {
        if l == la {
            Some(lb)
        } else if l == lb {
            Some(la)
        } else {
            None
        }
    };
    let mut by_pos = afo.by_pos.clone();
    for (i, &(l, _)) in a.tuples.iter().enumerate() {
        if let Some(partner) = other(l) {
            let add = a.tuples[..i].iter().filter(|&&(x, _)| x == partner).count() as u32;
            by_pos[i] = t_max.min(by_pos[i] + add);
        }
    }
    let by_label = afo
        .by_label
        .iter()
        .map(|&(l, v)| match other(l) {
            Some(partner) => (l, t_max.min(v + a.count_of(partner))),
            None => (l, v),
        })
        .collect();
    Afo { by_pos, by_label }
}

/// All complete states of `node` whose ordering keeps `a_star` as the
/// per-label prefix: appended tuples draw their thresholds from the
/// remaining class thresholds, interleave freely after their label's
/// retained tuples, and inherit their label's credit.
///
/// When the caller's node merged two labels into one class (a relabel),
/// `merged` names the pair: an appended tuple of either label stands for a
/// vertex beyond the merged class's condensed prefix, so it must be placed
/// after every retained tuple of both labels, not just its own.
///
/// Returns an empty family when `a_star` oversteps a tuple cap or its
/// thresholds are not a sub-multiset of the class thresholds.
pub fn enumerate_completions(
    node: NodeId,
    stats: &NodeStats,
    a_star: &LocalOrdering,
    afo_star: &Afo,
    merged: Option<(LabelId, LabelId)>,
    budget: &mut BudgetGuard,
) -> Result<Vec<State>, SolveError> {
    let t_max = stats.t_max();
    let labset = stats.labset(node);

    // Reject tuples that no set of class vertices can realize.
    for &l in labset {
        let used = a_star.threshold_histogram(l, t_max);
        let class = stats.thresholds(node, l);
        for (t, &u) in used.iter().enumerate() {
            if u > class.get(t).copied().unwrap_or(0) {
                return Ok(Vec::new());
            }
        }
        if a_star.count_of(l) > stats.tuple_cap(node, l) {
            return Ok(Vec::new());
        }
    }
    if a_star.tuples.iter().any(|(l, _)| !labset.contains(l)) {
        return Ok(Vec::new());
    }

    // Threshold sequences per label that still needs tuples.
    let mut per_label: Vec<(LabelId, Vec<Vec<u32>>)> = Vec::new();
    for &l in labset {
        let need = stats.tuple_cap(node, l) - a_star.count_of(l);
        if need == 0 {
            continue;
        }
        let used = a_star.threshold_histogram(l, t_max);
        let mut remaining: Vec<u32> = stats
            .thresholds(node, l)
            .iter()
            .zip(used.iter().chain(std::iter::repeat(&0)))
            .map(|(&c, &u)| c - u)
            .collect();
        let mut seqs = Vec::new();
        threshold_sequences(&mut remaining, need as usize, &mut Vec::new(), &mut seqs);
        per_label.push((l, seqs));
    }

    // Index of the last retained tuple per label (appended tuples of a label
    // may only be placed once all of these are consumed). For a merged label
    // pair the barrier covers the retained tuples of both labels.
    let last_retained: Vec<Option<usize>> = per_label
        .iter()
        .map(|&(l, _)| {
            let group = match merged {
                Some((x, y)) if l == x || l == y => [x, y],
                _ => [l, l],
            };
            group
                .iter()
                .flat_map(|&bl| a_star.positions_of(bl))
                .max()
                .map(|p| p - 1)
        })
        .collect();

    let mut out = Vec::new();
    let mut choice: Vec<usize> = vec![0; per_label.len()];
    pick_sequences(0, &per_label, &mut choice, &mut |chosen| {
        let appended: Vec<(LabelId, &[u32])> = per_label
            .iter()
            .zip(chosen)
            .map(|(&(l, ref seqs), &c)| (l, seqs[c].as_slice()))
            .collect();
        merge_interleavings(
            a_star,
            afo_star,
            &appended,
            &last_retained,
            budget,
            &mut out,
        )
    })?;
    Ok(out)
}

/// Distinct ordered draws of length `need` from a threshold multiset.
fn threshold_sequences(
    remaining: &mut Vec<u32>,
    need: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if current.len() == need {
        out.push(current.clone());
        return;
    }
    for t in 0..remaining.len() {
        if remaining[t] > 0 {
            remaining[t] -= 1;
            current.push(t as u32);
            threshold_sequences(remaining, need, current, out);
            current.pop();
            remaining[t] += 1;
        }
    }
}

fn pick_sequences(
    idx: usize,
    per_label: &[(LabelId, Vec<Vec<u32>>)],
    choice: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]) -> Result<(), SolveError>,
) -> Result<(), SolveError> {
    if idx == per_label.len() {
        return emit(choice);
    }
    for c in 0..per_label[idx].1.len() {
        choice[idx] = c;
        pick_sequences(idx + 1, per_label, choice, emit)?;
    }
    Ok(())
}

/// Shared context of the interleaving enumeration below.
struct Merge<'a> {
    a_star: &'a LocalOrdering,
    afo_star: &'a Afo,
    appended: &'a [(LabelId, &'a [u32])],
    last_retained: &'a [Option<usize>],
    taken_appended: Vec<usize>,
    tuples: Vec<(LabelId, u32)>,
    credits: Vec<u32>,
}

/// Emits every interleaving of the appended per-label sequences into the
/// retained ordering, respecting the per-label prefix constraint.
fn merge_interleavings(
    a_star: &LocalOrdering,
    afo_star: &Afo,
    appended: &[(LabelId, &[u32])],
    last_retained: &[Option<usize>],
    budget: &mut BudgetGuard,
    out: &mut Vec<State>,
) -> Result<(), SolveError> {
    let mut merge = Merge {
        a_star,
        afo_star,
        appended,
        last_retained,
        taken_appended: vec![0; appended.len()],
        tuples: Vec::with_capacity(a_star.len() + 8),
        credits: Vec::with_capacity(a_star.len() + 8),
    };
    merge.recurse(0, budget, out)
}

impl Merge<'_> {
    fn recurse(
        &mut self,
        taken_retained: usize,
        budget: &mut BudgetGuard,
        out: &mut Vec<State>,
    ) -> Result<(), SolveError> {
        let retained_done = taken_retained == self.a_star.len();
        let appended_done = self
            .appended
            .iter()
            .zip(self.taken_appended.iter())
            .all(|((_, seq), &t)| t == seq.len());
        if retained_done && appended_done {
            budget.charge(1)?;
            out.push(State {
                ordering: LocalOrdering::new(self.tuples.clone()),
                afo: Afo {
                    by_pos: self.credits.clone(),
                    by_label: self.afo_star.by_label.clone(),
                },
            });
            return Ok(());
        }
        if !retained_done {
            let (l, t) = self.a_star.tuples[taken_retained];
            self.tuples.push((l, t));
            self.credits.push(self.afo_star.by_pos[taken_retained]);
            self.recurse(taken_retained + 1, budget, out)?;
            self.tuples.pop();
            self.credits.pop();
        }
        for i in 0..self.appended.len() {
            let (l, seq) = self.appended[i];
            if self.taken_appended[i] == seq.len() {
                continue;
            }
            // Appended tuples of a label come after all its retained ones.
            if let Some(last) = self.last_retained[i] {
                if taken_retained <= last {
                    continue;
                }
            }
            let thr = seq[self.taken_appended[i]];
            self.taken_appended[i] += 1;
            self.tuples.push((l, thr));
            self.credits.push(self.afo_star.label_value(l));
            self.recurse(taken_retained, budget, out)?;
            self.tuples.pop();
            self.credits.pop();
            self.taken_appended[i] -= 1;
        }
        Ok(())
    }
}

/// Order-preserving two-way splits of a complete state at a union node:
/// every position goes to one side, sides must respect their own tuple
/// caps, position credits follow their tuple, and label credits are copied.
/// The returned states are the possibly incomplete "starred" states, still
/// to be expanded through [`enumerate_completions`]; duplicates are removed.
pub fn enumerate_union_splits(
    state: &State,
    left: NodeId,
    right: NodeId,
    left_labset: &[LabelId],
    right_labset: &[LabelId],
    stats: &NodeStats,
    budget: &mut BudgetGuard,
) -> Result<Vec<(State, State)>, SolveError> {
    let a = &state.ordering;
    let mut split = Split {
        state,
        sides: [left, right],
        labsets: [left_labset, right_labset],
        stats,
        acc: [
            (Vec::with_capacity(a.len()), Vec::with_capacity(a.len())),
            (Vec::with_capacity(a.len()), Vec::with_capacity(a.len())),
        ],
        seen: HashSet::new(),
    };
    let mut out = Vec::new();
    split.recurse(0, budget, &mut out)?;
    Ok(out)
}

/// Tuples and position credits accumulated for one side of a split.
type SideAcc = (Vec<(LabelId, u32)>, Vec<u32>);

/// Shared context of the split enumeration.
struct Split<'a> {
    state: &'a State,
    sides: [NodeId; 2],
    labsets: [&'a [LabelId]; 2],
    stats: &'a NodeStats,
    acc: [SideAcc; 2],
    seen: HashSet<(Vec<u8>, Vec<u8>)>,
}

impl Split<'_> {
    fn recurse(
        &mut self,
        idx: usize,
        budget: &mut BudgetGuard,
        out: &mut Vec<(State, State)>,
    ) -> Result<(), SolveError> {
        let a = &self.state.ordering;
        if idx == a.len() {
            budget.charge(2)?;
            let s1 = self.side_state(0);
            let s2 = self.side_state(1);
            if self.seen.insert((s1.encode(), s2.encode())) {
                out.push((s1, s2));
            }
            return Ok(());
        }
        let (label, thr) = a.tuples[idx];
        let credit = self.state.afo.by_pos[idx];
        for side in 0..2 {
            let count = self.acc[side]
                .0
                .iter()
                .filter(|&&(l, _)| l == label)
                .count() as u32;
            if count + 1 > self.stats.tuple_cap(self.sides[side], label) {
                continue;
            }
            self.acc[side].0.push((label, thr));
            self.acc[side].1.push(credit);
            self.recurse(idx + 1, budget, out)?;
            self.acc[side].0.pop();
            self.acc[side].1.pop();
        }
        Ok(())
    }

    fn side_state(&self, side: usize) -> State {
        State {
            ordering: LocalOrdering::new(self.acc[side].0.clone()),
            afo: Afo {
                by_pos: self.acc[side].1.clone(),
                by_label: self
                    .state
                    .afo
                    .by_label
                    .iter()
                    .copied()
                    .filter(|(l, _)| self.labsets[side].contains(l))
                    .collect(),
            },
        }
    }
}

/// Starred states for a relabel node `from -> to`: some subset of the
/// `to`-labeled tuples gets its original label back, provided the resulting
/// per-label counts fit the child's tuple caps; the `from` label inherits
/// the credit of `to`. The input ordering must not mention `from`.
pub fn enumerate_relabel_states(
    state: &State,
    from: LabelId,
    to: LabelId,
    child: NodeId,
    child_labset: &[LabelId],
    stats: &NodeStats,
    budget: &mut BudgetGuard,
) -> Result<Vec<State>, SolveError> {
    let a = &state.ordering;
    if a.count_of(from) > 0 {
        return Err(SolveError::InvalidRelabelState);
    }
    let to_positions: Vec<usize> = a.positions_of(to);
    let total_to = to_positions.len() as u32;
    let cap_from = stats.tuple_cap(child, from);
    let cap_to = stats.tuple_cap(child, to);

    let mut out = Vec::new();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    // Subsets of the to-positions, by increasing size.
    let mut chosen: Vec<usize> = Vec::new();
    fn subsets(
        positions: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize]) -> Result<(), SolveError>,
    ) -> Result<(), SolveError> {
        emit(chosen)?;
        for i in start..positions.len() {
            chosen.push(positions[i]);
            subsets(positions, i + 1, chosen, emit)?;
            chosen.pop();
        }
        Ok(())
    }
    subsets(&to_positions, 0, &mut chosen, &mut |subset| {
        let s = subset.len() as u32;
        if s > cap_from || total_to - s > cap_to {
            return Ok(());
        }
        let mut tuples = a.tuples.clone();
        for &pos in subset {
            tuples[pos - 1].0 = from;
        }
        let mut afo = state.afo.clone();
        if afo.by_label.iter().any(|&(l, _)| l == from) {
            afo.set_label_value(from, state.afo.label_value(to));
        }
        let starred = State {
            ordering: LocalOrdering::new(tuples),
            afo: afo.restricted_to(child_labset),
        };
        budget.charge(1)?;
        if seen.insert(starred.encode()) {
            out.push(starred);
        }
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwexpr::{node_stats, parse, Node};
    use crate::fixtures;
    use crate::graph::ThresholdMap;

    fn unlimited() -> BudgetGuard {
        BudgetGuard::new(usize::MAX)
    }

    fn fixture_setup() -> (crate::cwexpr::CwExpr, NodeStats) {
        let e = fixtures::eleven_vertex_expression();
        let (_, thr) = fixtures::eleven_vertex_instance();
        let stats = node_stats(&e, &thr).unwrap();
        (e, stats)
    }

    fn label(e: &crate::cwexpr::CwExpr, name: &str) -> LabelId {
        e.label_ids().find(|&l| e.label_name(l) == name).unwrap()
    }

    /// The orderings of the fixture discussion: `swapped = false` gives the
    /// tuple list of the identity ordering, `swapped = true` the repaired
    /// one with positions 7 and 8 exchanged.
    fn fixture_ordering(e: &crate::cwexpr::CwExpr, swapped: bool) -> LocalOrdering {
        let (a, b, c) = (label(e, "a"), label(e, "b"), label(e, "c"));
        let mut tuples = vec![
            (b, 1),
            (a, 1),
            (b, 1),
            (a, 2),
            (a, 2),
            (c, 2),
            (b, 1),
            (c, 2),
            (c, 2),
        ];
        if swapped {
            tuples.swap(6, 7);
        }
        LocalOrdering::new(tuples)
    }

    #[test]
    fn fixture_root_niceness() {
        let (e, stats) = fixture_setup();
        let (b, c) = (label(&e, "b"), label(&e, "c"));
        let plain = fixture_ordering(&e, false);
        let repaired = fixture_ordering(&e, true);
        assert!(!is_nice_local(&plain, b, c, &stats, e.root()));
        assert!(is_nice_local(&repaired, b, c, &stats, e.root()));
    }

    #[test]
    fn short_classes_are_vacuously_nice() {
        // Two tuples per label with t_max = 2: no (t_max + 1)-st tuple.
        let e = parse("(eta a b (u (u (v 1 a) (v 2 a)) (u (v 3 b) (v 4 b))))").unwrap();
        let thr = ThresholdMap::new(vec![2; 4], 2).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let ordering = LocalOrdering::new(vec![(a, 2), (a, 2), (b, 2), (b, 2)]);
        assert!(is_nice_local(&ordering, a, b, &stats, e.root()));
    }

    #[test]
    fn join_transform_counts_prior_partners() {
        let (e, _) = fixture_setup();
        let (b, c) = (label(&e, "b"), label(&e, "c"));
        let repaired = fixture_ordering(&e, true);
        let labset = {
            let mut ls: Vec<LabelId> = e.label_ids().collect();
            ls.sort_unstable();
            ls
        };
        let zeros = Afo::zeros(repaired.len(), &labset);
        let transformed = eta_transform_afo(&repaired, &zeros, b, c, 2);
        // Position 1 has label b and no earlier c tuple.
        assert_eq!(transformed.position_value(1), 0);
        // Position 6 is the first c tuple; b tuples sit at positions 1, 3.
        assert_eq!(transformed.position_value(6), 2);
        // The label key c counts all three b positions, capped at t_max.
        assert_eq!(transformed.label_value(c), 2);
        // b's label key counts all four c positions, capped at t_max.
        assert_eq!(transformed.label_value(b), 2);
        // a is uninvolved.
        assert_eq!(transformed.label_value(label(&e, "a")), 0);
    }

    #[test]
    fn completion_of_empty_ordering_at_leaf() {
        let e = parse("(v 1 a)").unwrap();
        let thr = ThresholdMap::new(vec![1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let a = label(&e, "a");
        let afo_star = Afo {
            by_pos: vec![],
            by_label: vec![(a, 1)],
        };
        let states = enumerate_completions(
            e.root(),
            &stats,
            &LocalOrdering::default(),
            &afo_star,
            None,
            &mut unlimited(),
        )
        .unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].ordering.tuples, vec![(a, 1)]);
        // The new position inherits the label credit.
        assert_eq!(states[0].afo.position_value(1), 1);
    }

    #[test]
    fn completion_of_complete_ordering_is_itself() {
        let (e, stats) = fixture_setup();
        let ordering = fixture_ordering(&e, false);
        let labset: Vec<LabelId> = stats.labset(e.root()).to_vec();
        let afo = Afo::zeros(ordering.len(), &labset);
        let states =
            enumerate_completions(e.root(), &stats, &ordering, &afo, None, &mut unlimited())
                .unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].ordering, ordering);
    }

    #[test]
    fn completion_appends_after_retained_tuples() {
        // Two b-vertices with threshold 1 at t_max = 1: the appended tuple
        // must follow the retained one, so exactly one completion exists.
        let e = parse("(u (v 1 b) (v 2 b))").unwrap();
        let thr = ThresholdMap::new(vec![1, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let b = label(&e, "b");
        let a_star = LocalOrdering::new(vec![(b, 1)]);
        let afo_star = Afo {
            by_pos: vec![0],
            by_label: vec![(b, 1)],
        };
        let states =
            enumerate_completions(e.root(), &stats, &a_star, &afo_star, None, &mut unlimited())
                .unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].ordering.tuples, vec![(b, 1), (b, 1)]);
        assert_eq!(states[0].afo.position_value(1), 0);
        assert_eq!(states[0].afo.position_value(2), 1);
    }

    #[test]
    fn completion_rejects_unrealizable_thresholds() {
        let e = parse("(v 1 a)").unwrap();
        let thr = ThresholdMap::new(vec![1], 2).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let a = label(&e, "a");
        // No class vertex has threshold 2.
        let a_star = LocalOrdering::new(vec![(a, 2)]);
        let afo_star = Afo {
            by_pos: vec![0],
            by_label: vec![(a, 0)],
        };
        let states =
            enumerate_completions(e.root(), &stats, &a_star, &afo_star, None, &mut unlimited())
                .unwrap();
        assert!(states.is_empty());
    }

    #[test]
    fn completion_family_is_empty_when_tuples_exceed_the_cap() {
        let e = parse("(u (v 1 a) (v 2 a))").unwrap();
        let thr = ThresholdMap::new(vec![1, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let a = label(&e, "a");
        // Three tuples of a label whose cap is two.
        let a_star = LocalOrdering::new(vec![(a, 1), (a, 1), (a, 1)]);
        let afo_star = Afo {
            by_pos: vec![0, 0, 0],
            by_label: vec![(a, 0)],
        };
        let states =
            enumerate_completions(e.root(), &stats, &a_star, &afo_star, None, &mut unlimited())
                .unwrap();
        assert!(states.is_empty());
    }

    #[test]
    fn merged_labels_share_an_append_barrier() {
        // Child of a relabel b -> a over three merged vertices: the ordering
        // retains one a and one b tuple; the appended a tuple represents a
        // vertex beyond the merged condensed prefix and may not precede the
        // retained b tuple.
        let e = parse("(u (u (v 1 a) (v 2 a)) (v 3 b))").unwrap();
        let thr = ThresholdMap::new(vec![1; 3], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let a_star = LocalOrdering::new(vec![(a, 1), (b, 1)]);
        let afo_star = Afo {
            by_pos: vec![0, 0],
            by_label: vec![(a, 1), (b, 0)],
        };

        let unconstrained =
            enumerate_completions(e.root(), &stats, &a_star, &afo_star, None, &mut unlimited())
                .unwrap();
        let tuple_orders = |states: &[State]| -> Vec<Vec<(LabelId, u32)>> {
            states.iter().map(|s| s.ordering.tuples.clone()).collect()
        };
        // Without a merge group the appended a tuple only has to follow the
        // retained a tuple: (a, b, a) and (a, a, b).
        assert_eq!(
            tuple_orders(&unconstrained),
            vec![vec![(a, 1), (b, 1), (a, 1)], vec![(a, 1), (a, 1), (b, 1)]]
        );

        let constrained = enumerate_completions(
            e.root(),
            &stats,
            &a_star,
            &afo_star,
            Some((a, b)),
            &mut unlimited(),
        )
        .unwrap();
        // With a and b merged, the appended a tuple must also follow the
        // retained b tuple.
        assert_eq!(
            tuple_orders(&constrained),
            vec![vec![(a, 1), (b, 1), (a, 1)]]
        );
        assert_eq!(constrained[0].afo.by_pos, vec![0, 0, 1]);
    }

    #[test]
    fn union_split_respects_side_caps() {
        // Vertex 1 carries label a, vertex 2 label b: tuples of a label that
        // exists on one side only must go to that side.
        let e = parse("(u (v 1 a) (v 2 b))").unwrap();
        let thr = ThresholdMap::new(vec![0, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let Node::Union { left, right } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(a, 0), (b, 1)]),
            afo: Afo {
                by_pos: vec![0, 1],
                by_label: vec![(a, 0), (b, 0)],
            },
        };
        let splits = enumerate_union_splits(
            &state,
            left,
            right,
            stats.labset(left),
            stats.labset(right),
            &stats,
            &mut unlimited(),
        )
        .unwrap();
        assert_eq!(splits.len(), 1);
        let (s1, s2) = &splits[0];
        assert_eq!(s1.ordering.tuples, vec![(a, 0)]);
        assert_eq!(s2.ordering.tuples, vec![(b, 1)]);
        // Position credits follow their tuples; label credits are copied.
        assert_eq!(s1.afo.by_pos, vec![0]);
        assert_eq!(s2.afo.by_pos, vec![1]);
        assert_eq!(s1.afo.by_label, vec![(a, 0)]);
        assert_eq!(s2.afo.by_label, vec![(b, 0)]);
    }

    #[test]
    fn union_split_shared_label_tries_both_sides() {
        let e = parse("(u (v 1 a) (v 2 a))").unwrap();
        let thr = ThresholdMap::new(vec![0, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let a = label(&e, "a");
        let Node::Union { left, right } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(a, 0), (a, 1)]),
            afo: Afo {
                by_pos: vec![0, 0],
                by_label: vec![(a, 0)],
            },
        };
        let splits = enumerate_union_splits(
            &state,
            left,
            right,
            stats.labset(left),
            stats.labset(right),
            &stats,
            &mut unlimited(),
        )
        .unwrap();
        // Each side holds one vertex, so each side takes exactly one tuple:
        // (a,0) left / (a,1) right, or the other way around.
        assert_eq!(splits.len(), 2);
    }

    #[test]
    fn relabel_forced_to_restore_the_original_label() {
        let e = parse("(rho a b (v 1 a))").unwrap();
        let thr = ThresholdMap::new(vec![1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let Node::Rho { child, .. } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(b, 1)]),
            afo: Afo {
                by_pos: vec![0],
                by_label: vec![(a, 0), (b, 1)],
            },
        };
        let starred = enumerate_relabel_states(
            &state,
            a,
            b,
            child,
            stats.labset(child),
            &stats,
            &mut unlimited(),
        )
        .unwrap();
        // Keeping the b tuple is infeasible (the child has no b vertices), so
        // the only choice restores label a and inherits b's credit.
        assert_eq!(starred.len(), 1);
        assert_eq!(starred[0].ordering.tuples, vec![(a, 1)]);
        assert_eq!(starred[0].afo.by_label, vec![(a, 1)]);
    }

    #[test]
    fn relabel_with_no_original_vertices_passes_through() {
        let e = parse("(rho a b (u (v 1 b) (rho a b (v 2 a))))").unwrap();
        let thr = ThresholdMap::new(vec![1, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let Node::Rho { child, .. } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(b, 1), (b, 1)]),
            afo: Afo {
                by_pos: vec![1, 0],
                by_label: vec![(a, 0), (b, 1)],
            },
        };
        let starred = enumerate_relabel_states(
            &state,
            a,
            b,
            child,
            stats.labset(child),
            &stats,
            &mut unlimited(),
        )
        .unwrap();
        // The child's a-class is empty, so no tuple may be relabeled; the
        // ordering passes through and a inherits b's credit.
        assert_eq!(starred.len(), 1);
        assert_eq!(starred[0].ordering.tuples, vec![(b, 1), (b, 1)]);
        assert_eq!(starred[0].afo.label_value(a), 1);
    }

    #[test]
    fn relabel_family_has_no_duplicate_states() {
        let e = parse("(rho a b (u (u (v 1 a) (v 2 a)) (v 3 b)))").unwrap();
        let thr = ThresholdMap::new(vec![1, 1, 1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let Node::Rho { child, .. } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(b, 1), (b, 1)]),
            afo: Afo {
                by_pos: vec![0, 0],
                by_label: vec![(a, 0), (b, 0)],
            },
        };
        let starred = enumerate_relabel_states(
            &state,
            a,
            b,
            child,
            stats.labset(child),
            &stats,
            &mut unlimited(),
        )
        .unwrap();
        let mut encodings: Vec<Vec<u8>> = starred.iter().map(State::encode).collect();
        let before = encodings.len();
        encodings.sort();
        encodings.dedup();
        assert_eq!(encodings.len(), before);
    }

    #[test]
    fn relabel_rejects_leftover_from_tuples() {
        let e = parse("(rho a b (v 1 a))").unwrap();
        let thr = ThresholdMap::new(vec![1], 1).unwrap();
        let stats = node_stats(&e, &thr).unwrap();
        let (a, b) = (label(&e, "a"), label(&e, "b"));
        let Node::Rho { child, .. } = *e.node(e.root()) else {
            unreachable!()
        };
        let state = State {
            ordering: LocalOrdering::new(vec![(a, 1)]),
            afo: Afo {
                by_pos: vec![0],
                by_label: vec![(a, 0), (b, 0)],
            },
        };
        let err = enumerate_relabel_states(
            &state,
            a,
            b,
            child,
            stats.labset(child),
            &stats,
            &mut unlimited(),
        )
        .unwrap_err();
        assert!(matches!(err, SolveError::InvalidRelabelState));
    }
}

//! Dynamic-programming states: local orderings, activation-from-outside
//! maps, and their canonical byte encoding used as memo keys.

use crate::cwexpr::LabelId;

/// A sequence of `(label, threshold)` tuples: the solver's limited view on a
/// global ordering. Complete for a node when every label is represented by
/// exactly `min(t_max + 1, class size)` tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LocalOrdering {
    pub tuples: Vec<(LabelId, u32)>,
}

impl LocalOrdering {
    pub fn new(tuples: Vec<(LabelId, u32)>) -> Self {
        LocalOrdering { tuples }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn count_of(&self, label: LabelId) -> u32 {
        self.tuples.iter().filter(|&&(l, _)| l == label).count() as u32
    }

    /// 1-based positions of the tuples of `label`, ascending.
    pub fn positions_of(&self, label: LabelId) -> Vec<usize> {
        self.tuples
            .iter()
            .enumerate()
            .filter_map(|(i, &(l, _))| (l == label).then_some(i + 1))
            .collect()
    }

    /// Threshold histogram (`0..=t_max`) of the tuples of `label`.
    pub fn threshold_histogram(&self, label: LabelId, t_max: u32) -> Vec<u32> {
        let mut hist = vec![0; t_max as usize + 1];
        for &(l, t) in &self.tuples {
            if l == label {
                hist[t as usize] += 1;
            }
        }
        hist
    }
}

/// Activation from outside: a credit in `[0, t_max]` for every position of
/// the local ordering and for every label of the node's label set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Afo {
    /// Credit per position of the local ordering (index 0 = position 1).
    pub by_pos: Vec<u32>,
    /// Credit per label, ascending by label id; the domain is exactly the
    /// label set of the node the state belongs to.
    pub by_label: Vec<(LabelId, u32)>,
}

impl Afo {
    /// All-zero credits for the given ordering length and label set.
    pub fn zeros(positions: usize, labset: &[LabelId]) -> Self {
        Afo {
            by_pos: vec![0; positions],
            by_label: labset.iter().map(|&l| (l, 0)).collect(),
        }
    }

    /// Credit of the 1-based position `pos`.
    pub fn position_value(&self, pos: usize) -> u32 {
        self.by_pos[pos - 1]
    }

    pub fn label_value(&self, label: LabelId) -> u32 {
        self.by_label
            .iter()
            .find_map(|&(l, v)| (l == label).then_some(v))
            .expect("label outside the afo domain")
    }

    pub fn set_label_value(&mut self, label: LabelId, value: u32) {
        for entry in &mut self.by_label {
            if entry.0 == label {
                entry.1 = value;
                return;
            }
        }
        panic!("label outside the afo domain");
    }

    /// Drops label entries outside `labset` (used when descending into a
    /// subexpression with a smaller label set).
    pub fn restricted_to(&self, labset: &[LabelId]) -> Afo {
        Afo {
            by_pos: self.by_pos.clone(),
            by_label: self
                .by_label
                .iter()
                .copied()
                .filter(|(l, _)| labset.contains(l))
                .collect(),
        }
    }
}

/// A (possibly incomplete) local ordering with its activation from outside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub ordering: LocalOrdering,
    pub afo: Afo,
}

impl State {
    /// Canonical, injective byte encoding. Label ids follow first appearance
    /// in the expression; afo values are listed positions first, then labels
    /// ascending by id. Safe as a memo key for states of one node, whose
    /// label-set domain is fixed.
    pub fn encode(&self) -> Vec<u8> {
        let a = &self.ordering;
        let mut out = Vec::with_capacity(1 + 3 * a.len() + self.afo.by_label.len());
        out.push(a.len() as u8);
        for &(l, t) in &a.tuples {
            out.push(l.0 as u8);
            out.push(t as u8);
        }
        for &v in &self.afo.by_pos {
            out.push(v as u8);
        }
        for &(_, v) in &self.afo.by_label {
            out.push(v as u8);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_injective_on_small_states() {
        // Distinct (ordering, afo) pairs over a tiny domain encode uniquely.
        let labset = [LabelId(0), LabelId(1)];
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for tuples in [
            vec![],
            vec![(LabelId(0), 0)],
            vec![(LabelId(0), 1)],
            vec![(LabelId(1), 0)],
            vec![(LabelId(0), 0), (LabelId(1), 1)],
            vec![(LabelId(1), 1), (LabelId(0), 0)],
        ] {
            let ordering = LocalOrdering::new(tuples);
            for pos_bits in 0..1u32 << ordering.len() {
                for l0 in 0..2 {
                    for l1 in 0..2 {
                        let afo = Afo {
                            by_pos: (0..ordering.len()).map(|i| (pos_bits >> i) & 1).collect(),
                            by_label: vec![(labset[0], l0), (labset[1], l1)],
                        };
                        let state = State {
                            ordering: ordering.clone(),
                            afo,
                        };
                        assert!(seen.insert(state.encode()));
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(seen.len(), count);
    }

    #[test]
    fn afo_restriction_drops_labels() {
        let afo = Afo {
            by_pos: vec![1],
            by_label: vec![(LabelId(0), 1), (LabelId(1), 2), (LabelId(2), 0)],
        };
        let restricted = afo.restricted_to(&[LabelId(0), LabelId(2)]);
        assert_eq!(restricted.by_label, vec![(LabelId(0), 1), (LabelId(2), 0)]);
        assert_eq!(restricted.by_pos, vec![1]);
    }
}

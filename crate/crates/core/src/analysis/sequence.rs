//! Sequential talk-move analytics: bigram transition matrices (direct and
//! with `None` utterances collapsed out), threshold-filtered transition
//! edges, and the intervening-`T-None` gap statistic.

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, Session, SpeakerRole, TalkMove};
use crate::scalar::Scalar;

const N: usize = TalkMove::COUNT;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TransitionMode {
    /// Every consecutive utterance pair within a session.
    Direct,
    /// Pairs counted after deleting all `None`-labeled utterances from each
    /// session's sequence.
    Collapsed,
}

/// 12x12 talk-move bigram counts with per-row conditional probabilities
/// `P(to | from)` over all successors. Counts never accrue across session
/// boundaries.
#[derive(Clone, PartialEq, Debug)]
pub struct TransitionMatrix<F: Scalar = f64> {
    counts: [[u64; N]; N],
    probabilities: [[F; N]; N],
    pub mode: TransitionMode,
}

impl<F: Scalar> TransitionMatrix<F> {
    fn from_counts(counts: [[u64; N]; N], mode: TransitionMode) -> Self {
        let mut probabilities = [[F::zero(); N]; N];
        for (row, out) in counts.iter().zip(probabilities.iter_mut()) {
            let total: u64 = row.iter().sum();
            for (cell, p) in row.iter().zip(out.iter_mut()) {
                *p = F::ratio(*cell, total);
            }
        }
        TransitionMatrix {
            counts,
            probabilities,
            mode,
        }
    }

    /// Canonical row/column labels.
    pub fn labels() -> [&'static str; N] {
        let mut out = [""; N];
        for (slot, m) in out.iter_mut().zip(TalkMove::ALL) {
            *slot = m.label();
        }
        out
    }

    pub fn count(&self, from: TalkMove, to: TalkMove) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn probability(&self, from: TalkMove, to: TalkMove) -> F {
        self.probabilities[from.index()][to.index()]
    }

    pub fn row_total(&self, from: TalkMove) -> u64 {
        self.counts[from.index()].iter().sum()
    }

    pub fn total_transitions(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn counts(&self) -> &[[u64; N]; N] {
        &self.counts
    }

    pub fn probabilities(&self) -> &[[F; N]; N] {
        &self.probabilities
    }
}

fn session_transition_counts(session: &Session, collapse_none: bool) -> [[u64; N]; N] {
    let mut counts = [[0u64; N]; N];
    let mut add = |pair: (TalkMove, TalkMove)| counts[pair.0.index()][pair.1.index()] += 1;
    if collapse_none {
        let mut prev: Option<TalkMove> = None;
        for m in session.moves().filter(|m| !m.is_none()) {
            if let Some(p) = prev {
                add((p, m));
            }
            prev = Some(m);
        }
    } else {
        let moves: Vec<TalkMove> = session.moves().collect();
        for pair in moves.windows(2) {
            add((pair[0], pair[1]));
        }
    }
    counts
}

/// Bigram transition counts over the corpus. `collapse_none` removes all
/// `T-None`/`S-None` utterances from each session's sequence before pairing.
pub fn transition_counts<F: Scalar>(corpus: &Corpus, collapse_none: bool) -> TransitionMatrix<F> {
    let counts = corpus
        .sessions
        .par_iter()
        .map(|s| session_transition_counts(s, collapse_none))
        .reduce(
            || [[0u64; N]; N],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (ca, cb) in ra.iter_mut().zip(rb) {
                        *ca += cb;
                    }
                }
                a
            },
        );
    let mode = if collapse_none {
        TransitionMode::Collapsed
    } else {
        TransitionMode::Direct
    };
    TransitionMatrix::from_counts(counts, mode)
}

/// One retained transition edge. The receiver role comes from the `to`
/// label's prefix, the grouping the transition diagrams are split by.
#[derive(Clone, PartialEq, Debug)]
pub struct TransitionEdge<F: Scalar = f64> {
    pub from: TalkMove,
    pub to: TalkMove,
    pub probability: F,
    pub receiver_role: SpeakerRole,
}

/// The edges of a transition matrix at or above a probability threshold,
/// ordered by `(from, to)`.
#[derive(Clone, PartialEq, Debug)]
pub struct FilteredTransitions<F: Scalar = f64> {
    pub edges: Vec<TransitionEdge<F>>,
    pub threshold: F,
}

/// Keeps edges with `P(to | from) >= threshold`. Zero-probability cells are
/// never emitted, so a zero threshold retains exactly the nonzero edges.
pub fn filter_transitions<F: Scalar>(
    matrix: &TransitionMatrix<F>,
    threshold: F,
) -> FilteredTransitions<F> {
    let mut edges = Vec::new();
    for from in TalkMove::ALL {
        for to in TalkMove::ALL {
            let p = matrix.probability(from, to);
            if p > F::zero() && p >= threshold {
                edges.push(TransitionEdge {
                    from,
                    to,
                    probability: p,
                    receiver_role: to.role(),
                });
            }
        }
    }
    FilteredTransitions { edges, threshold }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairError {
    #[error("INVALID_PAIR: {0} is a None label; gap analysis is defined over non-None talk moves")]
    NonePair(TalkMove),
}

fn require_non_none(m: TalkMove) -> Result<(), PairError> {
    if m.is_none() {
        Err(PairError::NonePair(m))
    } else {
        Ok(())
    }
}

/// Distribution of intervening-`T-None` run lengths for one ordered pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapHistogram {
    pub pair: (TalkMove, TalkMove),
    /// Sorted by gap length; lengths are unique.
    pub entries: Vec<GapEntry>,
    pub total_instances: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct GapEntry {
    pub gap_length: usize,
    pub count: u64,
}

impl GapHistogram {
    pub fn count_at(&self, gap_length: usize) -> u64 {
        self.entries
            .iter()
            .find(|e| e.gap_length == gap_length)
            .map(|e| e.count)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.total_instances == 0
    }
}

fn session_gap_counts(
    session: &Session,
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> std::collections::BTreeMap<usize, u64> {
    let moves: Vec<TalkMove> = session.moves().collect();
    let mut counts = std::collections::BTreeMap::new();
    for (a, &m) in moves.iter().enumerate() {
        if m != tm_j {
            continue;
        }
        // Nearest-successor rule: skip the run of consecutive T-None
        // utterances and test only the first utterance after it. Any other
        // interruption (including S-None) discards the anchor.
        let mut b = a + 1;
        while b < moves.len() && moves[b] == TalkMove::TNone {
            b += 1;
        }
        if b < moves.len() && moves[b] == tm_k {
            *counts.entry(b - a - 1).or_insert(0) += 1;
        }
    }
    counts
}

/// Scans for `tm_j`, then `n >= 0` consecutive `T-None` utterances, then
/// `tm_k`, within single sessions. Each match contributes one instance at
/// gap length `n`.
pub fn gap_histogram(
    corpus: &Corpus,
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> Result<GapHistogram, PairError> {
    require_non_none(tm_j)?;
    require_non_none(tm_k)?;
    let counts = corpus
        .sessions
        .par_iter()
        .map(|s| session_gap_counts(s, tm_j, tm_k))
        .reduce(std::collections::BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let entries: Vec<GapEntry> = counts
        .into_iter()
        .map(|(gap_length, count)| GapEntry { gap_length, count })
        .collect();
    let total_instances = entries.iter().map(|e| e.count).sum();
    Ok(GapHistogram {
        pair: (tm_j, tm_k),
        entries,
        total_instances,
    })
}

/// The expected intervening-`T-None` count for one pair, scaled by 100, with
/// rare gap lengths excluded.
#[derive(Clone, PartialEq, Debug)]
pub struct GapStatistic<F: Scalar = f64> {
    pub pair: (TalkMove, TalkMove),
    /// Unit: expected intervening `T-None` count x 100.
    pub value: F,
    pub retained_instances: u64,
    pub excluded_entries: Vec<GapEntry>,
}

/// Drops histogram entries whose share of the pair's total instances is
/// below `min_share`, then computes the count-weighted mean gap length
/// times 100. Returns zero when nothing is retained.
pub fn tnone_gap_statistic<F: Scalar>(histogram: &GapHistogram, min_share: F) -> GapStatistic<F> {
    let total = histogram.total_instances;
    let mut retained_weighted = 0u64;
    let mut retained_instances = 0u64;
    let mut excluded_entries = Vec::new();
    for e in &histogram.entries {
        // Shares are measured against the total before exclusion.
        if F::ratio(e.count, total) < min_share {
            excluded_entries.push(*e);
        } else {
            retained_weighted += e.gap_length as u64 * e.count;
            retained_instances += e.count;
        }
    }
    let value = if retained_instances == 0 {
        F::zero()
    } else {
        F::ratio(retained_weighted, retained_instances) * F::from_count(100)
    };
    GapStatistic {
        pair: histogram.pair,
        value,
        retained_instances,
        excluded_entries,
    }
}

/// Gap statistics for every ordered pair of non-`None` talk moves. Pairs
/// with no instances at all are absent rather than zero-valued.
#[derive(Clone, PartialEq, Debug)]
pub struct GapMatrix<F: Scalar = f64> {
    cells: std::collections::BTreeMap<(TalkMove, TalkMove), GapStatistic<F>>,
    pub min_share: F,
}

impl<F: Scalar> GapMatrix<F> {
    /// Row/column labels: the ten non-None moves in canonical order.
    pub fn labels() -> [&'static str; 10] {
        let mut out = [""; 10];
        for (slot, m) in out.iter_mut().zip(TalkMove::NON_NONE) {
            *slot = m.label();
        }
        out
    }

    pub fn cell(&self, tm_j: TalkMove, tm_k: TalkMove) -> Option<&GapStatistic<F>> {
        self.cells.get(&(tm_j, tm_k))
    }

    pub fn defined_cells(&self) -> impl Iterator<Item = (&(TalkMove, TalkMove), &GapStatistic<F>)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Applies [`gap_histogram`] + [`tnone_gap_statistic`] to all 100 ordered
/// non-`None` pairs.
pub fn gap_matrix<F: Scalar>(corpus: &Corpus, min_share: F) -> GapMatrix<F> {
    let pairs: Vec<(TalkMove, TalkMove)> = TalkMove::NON_NONE
        .iter()
        .flat_map(|&j| TalkMove::NON_NONE.iter().map(move |&k| (j, k)))
        .collect();
    let cells = pairs
        .par_iter()
        .filter_map(|&(j, k)| {
            let h = gap_histogram(corpus, j, k).expect("pairs are non-None");
            if h.is_empty() {
                None
            } else {
                Some(((j, k), tnone_gap_statistic(&h, min_share)))
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    GapMatrix { cells, min_share }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{session_of_moves, Corpus};
    use TalkMove::*;

    fn corpus_of(moves: &[TalkMove]) -> Corpus {
        Corpus::new("c", vec![session_of_moves("s", moves)])
    }

    #[test]
    fn direct_transitions_hand_enumeration() {
        // [T-KET, S-None, S-MClaim]: two pairs.
        let corpus = corpus_of(&[TKet, SNone, SMClaim]);
        let m: TransitionMatrix = transition_counts(&corpus, false);
        assert_eq!(m.count(TKet, SNone), 1);
        assert_eq!(m.count(SNone, SMClaim), 1);
        assert_eq!(m.total_transitions(), 2);
        assert_eq!(m.probability(TKet, SNone), 1.0);
        assert_eq!(m.mode, TransitionMode::Direct);
    }

    #[test]
    fn collapsed_transitions_delete_none_first() {
        // Deleting S-None leaves [T-KET, S-MClaim].
        let corpus = corpus_of(&[TKet, SNone, SMClaim]);
        let m: TransitionMatrix = transition_counts(&corpus, true);
        assert_eq!(m.count(TKet, SMClaim), 1);
        assert_eq!(m.total_transitions(), 1);
        assert_eq!(m.mode, TransitionMode::Collapsed);
    }

    #[test]
    fn single_utterance_session_has_no_transitions() {
        let corpus = corpus_of(&[TKet]);
        let m: TransitionMatrix = transition_counts(&corpus, false);
        assert_eq!(m.total_transitions(), 0);
        assert_eq!(m.probability(TKet, TKet), 0.0);
    }

    #[test]
    fn transitions_do_not_cross_session_boundaries() {
        let corpus = Corpus::new(
            "c",
            vec![
                session_of_moves("a", &[TKet, SNone]),
                session_of_moves("b", &[SMClaim, TPra]),
            ],
        );
        let m: TransitionMatrix = transition_counts(&corpus, false);
        assert_eq!(m.count(SNone, SMClaim), 0);
        assert_eq!(m.total_transitions(), 2);
    }

    #[test]
    fn filter_retains_edges_at_or_above_threshold() {
        // Row T-KET: S-None 0.6, S-MClaim 0.3, T-PRA 0.1.
        let moves = [
            TKet, SNone, TKet, SNone, TKet, SNone, TKet, SNone, TKet, SNone, TKet, SNone, TKet,
            SMClaim, TKet, SMClaim, TKet, SMClaim, TKet, TPra,
        ];
        let corpus = corpus_of(&moves);
        let m: TransitionMatrix = transition_counts(&corpus, false);
        assert!((m.probability(TKet, SNone) - 0.6).abs() < 1e-12);

        let keep_tket = |f: &FilteredTransitions| {
            f.edges
                .iter()
                .filter(|e| e.from == TKet)
                .map(|e| e.to)
                .collect::<Vec<_>>()
        };
        let all = filter_transitions(&m, 0.10);
        assert_eq!(keep_tket(&all), vec![SMClaim, SNone, TPra]);
        let tight = filter_transitions(&m, 0.35);
        assert_eq!(keep_tket(&tight), vec![SNone]);
        // Threshold zero keeps exactly the nonzero cells.
        let vacuous = filter_transitions(&m, 0.0);
        let nonzero = TalkMove::ALL
            .iter()
            .flat_map(|&f| TalkMove::ALL.iter().map(move |&t| (f, t)))
            .filter(|&(f, t)| m.probability(f, t) > 0.0)
            .count();
        assert_eq!(vacuous.edges.len(), nonzero);
        for e in &vacuous.edges {
            assert!(e.probability > 0.0);
            assert_eq!(e.receiver_role, e.to.role());
        }
    }

    #[test]
    fn gap_histogram_worked_example() {
        // [T-PRA, T-None, T-None, S-MClaim, T-PRA, S-MClaim]:
        // one instance at n=2 and one at n=0.
        let corpus = corpus_of(&[TPra, TNone, TNone, SMClaim, TPra, SMClaim]);
        let h = gap_histogram(&corpus, TPra, SMClaim).unwrap();
        assert_eq!(h.total_instances, 2);
        assert_eq!(h.count_at(0), 1);
        assert_eq!(h.count_at(2), 1);
        assert_eq!(h.entries.len(), 2);
    }

    #[test]
    fn gap_histogram_absent_pattern_is_empty() {
        let corpus = corpus_of(&[TPra, TNone, TNone, SMClaim, TPra, SMClaim]);
        let h = gap_histogram(&corpus, TPra, SProEvi).unwrap();
        assert!(h.is_empty());
        assert!(h.entries.is_empty());
    }

    #[test]
    fn s_none_interrupts_the_gap() {
        // Only consecutive T-None utterances may separate the pair.
        let corpus = corpus_of(&[TPra, SNone, SMClaim]);
        let h = gap_histogram(&corpus, TPra, SMClaim).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn none_arguments_are_rejected() {
        let corpus = corpus_of(&[TPra, SMClaim]);
        assert_eq!(
            gap_histogram(&corpus, TNone, SMClaim).unwrap_err(),
            PairError::NonePair(TNone)
        );
        assert_eq!(
            gap_histogram(&corpus, TPra, SNone).unwrap_err(),
            PairError::NonePair(SNone)
        );
    }

    #[test]
    fn gap_statistic_worked_example() {
        // Entries {n=2: 1, n=0: 1} -> (2*1 + 0*1)/2 * 100 = 100.0.
        let corpus = corpus_of(&[TPra, TNone, TNone, SMClaim, TPra, SMClaim]);
        let h = gap_histogram(&corpus, TPra, SMClaim).unwrap();
        let s: GapStatistic = tnone_gap_statistic(&h, 0.05);
        assert_eq!(s.value, 100.0);
        assert_eq!(s.retained_instances, 2);
        assert!(s.excluded_entries.is_empty());
    }

    #[test]
    fn all_adjacent_pairs_give_zero() {
        let h = GapHistogram {
            pair: (TPra, SMClaim),
            entries: vec![GapEntry {
                gap_length: 0,
                count: 100,
            }],
            total_instances: 100,
        };
        let s: GapStatistic = tnone_gap_statistic(&h, 0.05);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.retained_instances, 100);
    }

    #[test]
    fn rare_gap_lengths_are_excluded() {
        // {n=0: 97, n=5: 3}: 3% < 5%, so n=5 drops and the value is 0.
        let h = GapHistogram {
            pair: (TPra, SMClaim),
            entries: vec![
                GapEntry {
                    gap_length: 0,
                    count: 97,
                },
                GapEntry {
                    gap_length: 5,
                    count: 3,
                },
            ],
            total_instances: 100,
        };
        let s: GapStatistic = tnone_gap_statistic(&h, 0.05);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.retained_instances, 97);
        assert_eq!(
            s.excluded_entries,
            vec![GapEntry {
                gap_length: 5,
                count: 3
            }]
        );
    }

    #[test]
    fn empty_histogram_statistic_is_zero() {
        let h = GapHistogram {
            pair: (TPra, SMClaim),
            entries: vec![],
            total_instances: 0,
        };
        let s: GapStatistic = tnone_gap_statistic(&h, 0.05);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.retained_instances, 0);
    }

    #[test]
    fn gap_matrix_composes_the_worked_example() {
        let corpus = corpus_of(&[TPra, TNone, TNone, SMClaim, TPra, SMClaim]);
        let g: GapMatrix = gap_matrix(&corpus, 0.05);
        assert_eq!(g.cell(TPra, SMClaim).unwrap().value, 100.0);
        // (S-MClaim, T-PRA) occurs once, adjacent.
        let back = g.cell(SMClaim, TPra).unwrap();
        assert_eq!(back.value, 0.0);
        assert_eq!(back.retained_instances, 1);
        // Nothing else matched.
        assert_eq!(g.len(), 2);
        assert!(g.cell(TPra, TPra).is_none());
    }

    #[test]
    fn corpus_without_tnone_has_all_zero_defined_cells() {
        let corpus = corpus_of(&[TPra, SMClaim, SProEvi, TKet, SMClaim]);
        let g: GapMatrix = gap_matrix(&corpus, 0.05);
        assert!(!g.is_empty());
        for (_, cell) in g.defined_cells() {
            assert_eq!(cell.value, 0.0);
        }
    }

    #[test]
    fn anchor_matches_nearest_successor_only() {
        // [T-PRA, T-None, T-PRA, T-None, T-PRA]: two instances at n=1 for
        // the self-pair; the outer (0, 4) pair is blocked by the middle
        // T-PRA.
        let corpus = corpus_of(&[TPra, TNone, TPra, TNone, TPra]);
        let h = gap_histogram(&corpus, TPra, TPra).unwrap();
        assert_eq!(h.total_instances, 2);
        assert_eq!(h.count_at(1), 2);
    }

    #[test]
    fn adjacent_same_move_chain_counts_each_step() {
        let corpus = corpus_of(&[SProEvi, SProEvi, SProEvi]);
        let h = gap_histogram(&corpus, SProEvi, SProEvi).unwrap();
        assert_eq!(h.total_instances, 2);
        assert_eq!(h.count_at(0), 2);
    }

    #[test]
    fn value_bounded_by_max_retained_gap() {
        let h = GapHistogram {
            pair: (TRes, TKet),
            entries: vec![
                GapEntry {
                    gap_length: 1,
                    count: 5,
                },
                GapEntry {
                    gap_length: 3,
                    count: 5,
                },
            ],
            total_instances: 10,
        };
        let s: GapStatistic = tnone_gap_statistic(&h, 0.05);
        assert!((s.value - 200.0).abs() < 1e-12);
        assert!(s.value <= 100.0 * 3.0);
    }
}

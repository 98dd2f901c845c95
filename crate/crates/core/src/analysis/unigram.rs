//! Unigram distributions: talk-move and dialogue-act frequencies, the
//! talk-move x dialogue-act cross-tabulation, and coverage-based top-k
//! selection.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{Corpus, SpeakerRole, TalkMove};
use crate::scalar::Scalar;

/// Display bucket for labels under the display threshold.
pub const BELOW_THRESHOLD_LABEL: &str = "\u{27e8}below-threshold\u{27e9}";

/// A normalized count table over labels. Only labels with at least one
/// observation are listed, ranked by descending count with lexicographic
/// tie-breaking. Shares are `count / total` and sum to one when the total
/// is nonzero.
#[derive(Clone, PartialEq, Debug)]
pub struct Distribution<F: Scalar = f64> {
    labels: Vec<String>,
    counts: Vec<u64>,
    shares: Vec<F>,
    total: u64,
}

impl<F: Scalar> Distribution<F> {
    /// Ranks a count map into a distribution. Zero-count entries are dropped.
    pub fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let mut entries: Vec<(String, u64)> =
            counts.into_iter().filter(|(_, c)| *c > 0).collect();
        // BTreeMap iteration is already lexicographic, so a stable sort by
        // descending count leaves ties in label order.
        entries.sort_by(|a, b| b.1.cmp(&a.1));
        let total: u64 = entries.iter().map(|(_, c)| c).sum();
        let (labels, counts): (Vec<String>, Vec<u64>) = entries.into_iter().unzip();
        let shares = counts.iter().map(|&c| F::ratio(c, total)).collect();
        Distribution {
            labels,
            counts,
            shares,
            total,
        }
    }

    pub fn empty() -> Self {
        Distribution::from_counts(BTreeMap::new())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shares(&self) -> &[F] {
        &self.shares
    }

    /// Total observation count (the shares' denominator).
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Ranked `(label, count, share)` rows.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64, F)> + '_ {
        self.labels
            .iter()
            .zip(&self.counts)
            .zip(&self.shares)
            .map(|((l, &c), &s)| (l.as_str(), c, s))
    }

    /// Share of a label; zero when absent.
    pub fn share_of(&self, label: &str) -> F {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.shares[i])
            .unwrap_or_else(F::zero)
    }

    pub fn count_of(&self, label: &str) -> u64 {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    /// Display form: labels with share below `min_share` are aggregated into
    /// a single trailing residual bucket. Raw counts stay available on the
    /// distribution itself.
    pub fn display_rows(&self, min_share: F) -> Vec<DisplayRow<F>> {
        let mut rows = Vec::new();
        let mut residual_count = 0u64;
        for (label, count, share) in self.iter() {
            if share < min_share {
                residual_count += count;
            } else {
                rows.push(DisplayRow {
                    label: label.to_string(),
                    count,
                    share,
                });
            }
        }
        if residual_count > 0 {
            rows.push(DisplayRow {
                label: BELOW_THRESHOLD_LABEL.to_string(),
                count: residual_count,
                share: F::ratio(residual_count, self.total),
            });
        }
        rows
    }

    /// The ranked prefix of at most `k` labels, its cumulative share, and
    /// whether that share reaches `coverage_target`.
    pub fn top_k_with_coverage(&self, k: usize, coverage_target: F) -> TopK<F> {
        let take = k.min(self.labels.len());
        let labels = self.labels[..take].to_vec();
        let achieved_coverage = self.shares[..take].iter().copied().sum();
        TopK {
            labels,
            achieved_coverage,
            target_met: achieved_coverage >= coverage_target,
        }
    }
}

/// One row of a threshold-aggregated display table.
#[derive(Clone, PartialEq, Debug)]
pub struct DisplayRow<F: Scalar = f64> {
    pub label: String,
    pub count: u64,
    pub share: F,
}

/// Result of coverage-based top-k selection.
#[derive(Clone, PartialEq, Debug)]
pub struct TopK<F: Scalar = f64> {
    pub labels: Vec<String>,
    pub achieved_coverage: F,
    pub target_met: bool,
}

/// Merges per-session count maps; addition is commutative so the schedule
/// cannot influence results.
fn count_over_sessions<K, I>(corpus: &Corpus, per_session: impl Fn(&crate::corpus::Session) -> I + Sync) -> BTreeMap<K, u64>
where
    K: Ord + Send,
    I: IntoIterator<Item = K>,
{
    corpus
        .sessions
        .par_iter()
        .map(|session| {
            let mut counts: BTreeMap<K, u64> = BTreeMap::new();
            for key in per_session(session) {
                *counts.entry(key).or_insert(0) += 1;
            }
            counts
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

/// Talk-move frequencies over all sessions. With a role filter, only that
/// role's utterances are counted and form the denominator; without one, the
/// denominator is every utterance in the corpus.
pub fn talk_move_distribution<F: Scalar>(
    corpus: &Corpus,
    role_filter: Option<SpeakerRole>,
) -> Distribution<F> {
    let counts = count_over_sessions(corpus, |session| {
        session
            .utterances
            .iter()
            .filter(|u| role_filter.is_none_or(|r| u.speaker == r))
            .map(|u| u.talk_move.label().to_string())
            .collect::<Vec<_>>()
    });
    Distribution::from_counts(counts)
}

/// Dialogue-act frequencies over all utterances, with the display
/// aggregation applied at `min_share_display`.
pub fn dialogue_act_distribution<F: Scalar>(
    corpus: &Corpus,
    min_share_display: F,
) -> DialogueActDistribution<F> {
    let counts = count_over_sessions(corpus, |session| {
        session
            .utterances
            .iter()
            .map(|u| u.dialogue_act.as_str().to_string())
            .collect::<Vec<_>>()
    });
    let raw = Distribution::from_counts(counts);
    let display = raw.display_rows(min_share_display);
    DialogueActDistribution {
        raw,
        display,
        min_share_display,
    }
}

/// Raw dialogue-act distribution plus its thresholded display form.
#[derive(Clone, PartialEq, Debug)]
pub struct DialogueActDistribution<F: Scalar = f64> {
    pub raw: Distribution<F>,
    pub display: Vec<DisplayRow<F>>,
    pub min_share_display: F,
}

/// Per-talk-move dialogue-act distributions. Rows cover all twelve moves in
/// canonical order; rows without observations carry empty distributions.
#[derive(Clone, PartialEq, Debug)]
pub struct CrossTab<F: Scalar = f64> {
    rows: Vec<CrossTabRow<F>>,
    /// Whether continuation-tagged utterances were dropped before counting.
    pub continuation_excluded: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CrossTabRow<F: Scalar = f64> {
    pub talk_move: TalkMove,
    pub distribution: Distribution<F>,
}

impl<F: Scalar> CrossTab<F> {
    pub fn rows(&self) -> &[CrossTabRow<F>] {
        &self.rows
    }

    pub fn row(&self, talk_move: TalkMove) -> &CrossTabRow<F> {
        &self.rows[talk_move.index()]
    }
}

/// For each talk move, the dialogue-act distribution among utterances
/// carrying that move. With `exclude_continuation`, continuation-tagged
/// utterances are removed from both numerator and denominator.
pub fn crosstab_talkmove_dialogueact<F: Scalar>(
    corpus: &Corpus,
    exclude_continuation: bool,
) -> CrossTab<F> {
    let counts = count_over_sessions(corpus, |session| {
        session
            .utterances
            .iter()
            .filter(|u| !(exclude_continuation && u.dialogue_act.is_continuation()))
            .map(|u| (u.talk_move, u.dialogue_act.as_str().to_string()))
            .collect::<Vec<_>>()
    });
    let mut per_move: Vec<BTreeMap<String, u64>> = vec![BTreeMap::new(); TalkMove::COUNT];
    for ((talk_move, act), count) in counts {
        per_move[talk_move.index()].insert(act, count);
    }
    let rows = TalkMove::ALL
        .iter()
        .zip(per_move)
        .map(|(&talk_move, acts)| CrossTabRow {
            talk_move,
            distribution: Distribution::from_counts(acts),
        })
        .collect();
    CrossTab {
        rows,
        continuation_excluded: exclude_continuation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{session_of_moves, utterance, Corpus, DomainTag, Session};

    fn corpus_of_moves(moves: &[TalkMove]) -> Corpus {
        Corpus::new("c", vec![session_of_moves("s", moves)])
    }

    #[test]
    fn talk_move_shares_hand_count() {
        // [T-KET, T-KET, S-None, S-MClaim] -> T-KET 0.5, each other 0.25.
        let corpus = corpus_of_moves(&[
            TalkMove::TKet,
            TalkMove::TKet,
            TalkMove::SNone,
            TalkMove::SMClaim,
        ]);
        let d: Distribution = talk_move_distribution(&corpus, None);
        assert_eq!(d.total(), 4);
        assert_eq!(d.share_of("T-KET"), 0.5);
        assert_eq!(d.share_of("S-None"), 0.25);
        assert_eq!(d.share_of("S-MClaim"), 0.25);
        assert_eq!(d.labels()[0], "T-KET");
        // Ties at count 1 break lexicographically.
        assert_eq!(d.labels()[1], "S-MClaim");
        assert_eq!(d.labels()[2], "S-None");
    }

    #[test]
    fn empty_corpus_distribution_is_empty() {
        let d: Distribution = talk_move_distribution(&Corpus::empty("c"), None);
        assert_eq!(d.total(), 0);
        assert!(d.is_empty());
        assert_eq!(d.share_of("T-KET"), 0.0);
    }

    #[test]
    fn role_filter_partitions_the_unfiltered_total() {
        let corpus = corpus_of_moves(&[
            TalkMove::TKet,
            TalkMove::TNone,
            TalkMove::SNone,
            TalkMove::SMClaim,
            TalkMove::SProEvi,
        ]);
        let all: Distribution = talk_move_distribution(&corpus, None);
        let t: Distribution = talk_move_distribution(&corpus, Some(SpeakerRole::Teacher));
        let s: Distribution = talk_move_distribution(&corpus, Some(SpeakerRole::Student));
        assert_eq!(all.total(), t.total() + s.total());
        assert_eq!(t.total(), 2);
        assert_eq!(s.total(), 3);
    }

    #[test]
    fn dialogue_act_distribution_hand_count() {
        // [sd, sd, qw, +] -> sd 0.5, qw 0.25, + 0.25.
        let utterances = vec![
            utterance(0, TalkMove::TNone, "sd"),
            utterance(1, TalkMove::TNone, "sd"),
            utterance(2, TalkMove::TPra, "qw"),
            utterance(3, TalkMove::TNone, "+"),
        ];
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let d = dialogue_act_distribution::<f64>(&corpus, 0.0);
        assert_eq!(d.raw.share_of("sd"), 0.5);
        assert_eq!(d.raw.share_of("qw"), 0.25);
        assert_eq!(d.raw.share_of("+"), 0.25);
        assert_eq!(d.display.len(), 3);
    }

    #[test]
    fn single_utterance_has_share_one() {
        let corpus = Corpus::new(
            "c",
            vec![Session::new(
                "s",
                DomainTag::Other,
                vec![utterance(0, TalkMove::TNone, "fc")],
                vec![],
            )],
        );
        let d = dialogue_act_distribution::<f64>(&corpus, 0.0);
        assert_eq!(d.raw.share_of("fc"), 1.0);
    }

    #[test]
    fn display_rows_aggregate_below_threshold() {
        let mut counts = BTreeMap::new();
        counts.insert("sd".to_string(), 995u64);
        counts.insert("qw".to_string(), 3);
        counts.insert("ba".to_string(), 2);
        let d: Distribution = Distribution::from_counts(counts);
        let rows = d.display_rows(0.005);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].label, "sd");
        assert_eq!(rows[1].label, BELOW_THRESHOLD_LABEL);
        assert_eq!(rows[1].count, 5);
        // Raw counts remain untouched.
        assert_eq!(d.count_of("qw"), 3);
    }

    #[test]
    fn crosstab_continuation_exclusion_hand_count() {
        // (T-PRA, qw), (T-PRA, qy), (T-PRA, +): with exclusion the row is
        // qw 0.5 / qy 0.5; without, all three at 1/3.
        let utterances = vec![
            utterance(0, TalkMove::TPra, "qw"),
            utterance(1, TalkMove::TPra, "qy"),
            utterance(2, TalkMove::TPra, "+"),
        ];
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let excluded: CrossTab = crosstab_talkmove_dialogueact(&corpus, true);
        let row = &excluded.row(TalkMove::TPra).distribution;
        assert_eq!(row.total(), 2);
        assert_eq!(row.share_of("qw"), 0.5);
        assert_eq!(row.share_of("qy"), 0.5);
        assert_eq!(row.share_of("+"), 0.0);
        assert!(excluded.continuation_excluded);

        let included: CrossTab = crosstab_talkmove_dialogueact(&corpus, false);
        let row = &included.row(TalkMove::TPra).distribution;
        assert_eq!(row.total(), 3);
        assert!((row.share_of("+") - 1.0 / 3.0).abs() < 1e-12);
        // Exclusion can only shrink row totals.
        for (e, i) in excluded.rows().iter().zip(included.rows()) {
            assert!(e.distribution.total() <= i.distribution.total());
        }
    }

    #[test]
    fn top_k_with_coverage_hand_sums() {
        let mut counts = BTreeMap::new();
        counts.insert("a".to_string(), 4u64);
        counts.insert("b".to_string(), 3);
        counts.insert("c".to_string(), 2);
        counts.insert("d".to_string(), 1);
        let d: Distribution = Distribution::from_counts(counts);

        let top3 = d.top_k_with_coverage(3, 0.5);
        assert_eq!(top3.labels, ["a", "b", "c"]);
        assert!((top3.achieved_coverage - 0.9).abs() < 1e-12);
        assert!(top3.target_met);

        let top1 = d.top_k_with_coverage(1, 0.5);
        assert_eq!(top1.labels, ["a"]);
        assert!((top1.achieved_coverage - 0.4).abs() < 1e-12);
        assert!(!top1.target_met);
    }

    #[test]
    fn top_k_uniform_exhaustive_prefix() {
        let mut counts = BTreeMap::new();
        for label in ["a", "b", "c", "d"] {
            counts.insert(label.to_string(), 5u64);
        }
        let d: Distribution = Distribution::from_counts(counts);
        let all = d.top_k_with_coverage(4, 1.0);
        assert_eq!(all.labels.len(), 4);
        assert!((all.achieved_coverage - 1.0).abs() < 1e-12);
        assert!(all.target_met);
        // k beyond the label count returns everything.
        assert_eq!(d.top_k_with_coverage(10, 1.0).labels.len(), 4);
    }

    #[test]
    fn coverage_is_monotone_in_k() {
        let mut counts = BTreeMap::new();
        for (i, label) in ["a", "b", "c", "d", "e"].iter().enumerate() {
            counts.insert(label.to_string(), (i as u64 + 1) * 7 % 5 + 1);
        }
        let d: Distribution = Distribution::from_counts(counts);
        let mut prev = 0.0;
        for k in 0..=6 {
            let top = d.top_k_with_coverage(k, 0.5);
            assert!(top.achieved_coverage >= prev);
            prev = top.achieved_coverage;
        }
    }

    #[test]
    fn shares_sum_to_one() {
        let corpus = corpus_of_moves(&[
            TalkMove::TKet,
            TalkMove::TKet,
            TalkMove::SNone,
            TalkMove::TPra,
            TalkMove::SMClaim,
            TalkMove::SMClaim,
            TalkMove::SAskMi,
        ]);
        let d: Distribution = talk_move_distribution(&corpus, None);
        let sum: f64 = d.shares().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn session_order_does_not_matter() {
        let a = session_of_moves("a", &[TalkMove::TKet, TalkMove::SNone]);
        let b = session_of_moves("b", &[TalkMove::SMClaim, TalkMove::TKet, TalkMove::TPra]);
        let fwd = Corpus::new("c", vec![a.clone(), b.clone()]);
        let rev = Corpus::new("c", vec![b, a]);
        let d1: Distribution = talk_move_distribution(&fwd, None);
        let d2: Distribution = talk_move_distribution(&rev, None);
        assert_eq!(d1, d2);
    }

    #[test]
    fn works_with_f32_scalars() {
        let corpus = corpus_of_moves(&[TalkMove::TKet, TalkMove::SNone]);
        let d: Distribution<f32> = talk_move_distribution(&corpus, None);
        assert_eq!(d.share_of("T-KET"), 0.5f32);
    }
}

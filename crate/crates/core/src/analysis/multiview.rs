//! Multi-view joins: discourse relations on talk-move bigrams, dialogue
//! acts of `None` utterances adjacent to or between talk moves, lexical
//! marker shares, and qualitative instance extraction.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::analysis::sequence::PairError;
use crate::analysis::unigram::Distribution;
use crate::corpus::{Corpus, DialogueAct, DiscourseEdge, Session, TalkMove, Utterance};
use crate::scalar::Scalar;

/// Distribution bucket for bigram instances without a connecting edge.
pub const NO_EDGE_LABEL: &str = "\u{27e8}no-edge\u{27e9}";

/// One adjacent talk-move pair occurrence, with the forward discourse edge
/// between exactly those two utterances when one exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigramInstance {
    pub session_id: String,
    pub first_index: usize,
    pub second_index: usize,
    pub first_move: TalkMove,
    pub second_move: TalkMove,
    pub relation: Option<String>,
}

/// One `tm_j -> T-None -> tm_k` triple with the middle utterance's act.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleInstance {
    pub session_id: String,
    pub first_index: usize,
    pub middle_index: usize,
    pub second_index: usize,
    pub intervening_act: DialogueAct,
}

/// The forward relation attached between utterances `i` and `i+1`, if any.
/// When annotators supplied several parallel edges for the same pair the
/// lexicographically smallest relation is charged to the bigram.
fn relation_between(session: &Session, source: usize, target: usize) -> Option<&str> {
    session
        .edges
        .iter()
        .filter(|e| e.source == source && e.target == target)
        .map(|e| e.relation.as_str())
        .min()
}

/// Enumerates adjacent `(tm_j, tm_k)` pairs in corpus order.
pub fn bigram_instances(corpus: &Corpus, tm_j: TalkMove, tm_k: TalkMove) -> Vec<BigramInstance> {
    let mut out = Vec::new();
    for session in &corpus.sessions {
        for pair in session.utterances.windows(2) {
            if pair[0].talk_move == tm_j && pair[1].talk_move == tm_k {
                out.push(BigramInstance {
                    session_id: session.session_id.clone(),
                    first_index: pair[0].index,
                    second_index: pair[1].index,
                    first_move: tm_j,
                    second_move: tm_k,
                    relation: relation_between(session, pair[0].index, pair[1].index)
                        .map(str::to_string),
                });
            }
        }
    }
    out
}

/// Enumerates `tm_j -> T-None -> tm_k` consecutive triples in corpus order.
pub fn triple_instances(
    corpus: &Corpus,
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> Result<Vec<TripleInstance>, PairError> {
    for m in [tm_j, tm_k] {
        if m.is_none() {
            return Err(PairError::NonePair(m));
        }
    }
    let mut out = Vec::new();
    for session in &corpus.sessions {
        for triple in session.utterances.windows(3) {
            if triple[0].talk_move == tm_j
                && triple[1].talk_move == TalkMove::TNone
                && triple[2].talk_move == tm_k
            {
                out.push(TripleInstance {
                    session_id: session.session_id.clone(),
                    first_index: triple[0].index,
                    middle_index: triple[1].index,
                    second_index: triple[2].index,
                    intervening_act: triple[1].dialogue_act.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Distribution of discourse relations across all adjacent `(tm_j, tm_k)`
/// pairs; pairs without a connecting edge fall into [`NO_EDGE_LABEL`], so
/// shares always total one.
pub fn bigram_relation_distribution<F: Scalar>(
    corpus: &Corpus,
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> Distribution<F> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for instance in bigram_instances(corpus, tm_j, tm_k) {
        let bucket = instance
            .relation
            .unwrap_or_else(|| NO_EDGE_LABEL.to_string());
        *counts.entry(bucket).or_insert(0) += 1;
    }
    Distribution::from_counts(counts)
}

/// Dialogue acts of `T-None` utterances immediately following a `tm_j`
/// utterance. Continuation tags are counted like any other act.
pub fn talkmove_to_none_da_distribution<F: Scalar>(
    corpus: &Corpus,
    tm_j: TalkMove,
) -> Distribution<F> {
    let counts = corpus
        .sessions
        .par_iter()
        .map(|session| {
            let mut counts: BTreeMap<String, u64> = BTreeMap::new();
            for pair in session.utterances.windows(2) {
                if pair[0].talk_move == tm_j && pair[1].talk_move == TalkMove::TNone {
                    *counts
                        .entry(pair[1].dialogue_act.as_str().to_string())
                        .or_insert(0) += 1;
                }
            }
            counts
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Distribution::from_counts(counts)
}

/// Dialogue acts of the single `T-None` utterance between consecutive
/// `tm_j` and `tm_k` talk moves.
pub fn triple_none_da_distribution<F: Scalar>(
    corpus: &Corpus,
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> Result<Distribution<F>, PairError> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for instance in triple_instances(corpus, tm_j, tm_k)? {
        *counts
            .entry(instance.intervening_act.as_str().to_string())
            .or_insert(0) += 1;
    }
    Ok(Distribution::from_counts(counts))
}

/// Where a lexical marker must appear within the second utterance.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum MarkerPosition {
    LeadingToken,
    AnyToken,
}

impl MarkerPosition {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "leading" | "leading_token" => Some(MarkerPosition::LeadingToken),
            "any" | "any_token" => Some(MarkerPosition::AnyToken),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MarkerPosition::LeadingToken => "leading_token",
            MarkerPosition::AnyToken => "any_token",
        }
    }
}

/// An adjacent talk-move pattern for lexical analysis.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct BigramPattern {
    pub first: TalkMove,
    pub second: TalkMove,
}

/// Lexical marker share over a bigram population.
#[derive(Clone, PartialEq, Debug)]
pub struct MarkerShare<F: Scalar = f64> {
    /// Fraction of instances whose second utterance matched; zero when the
    /// pattern never occurs.
    pub share: F,
    pub instances: u64,
    pub matched: Vec<InstanceRef>,
}

/// Locates one matched instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InstanceRef {
    pub session_id: String,
    pub first_index: usize,
    pub second_index: usize,
}

/// Normalization: lowercase, split on whitespace, strip leading/trailing
/// ASCII punctuation per token, drop tokens that strip to nothing.
fn normalize_tokens(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()).to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn matches_marker(text: &str, markers: &[String], position: MarkerPosition) -> bool {
    let tokens = normalize_tokens(text);
    match position {
        MarkerPosition::LeadingToken => tokens
            .first()
            .is_some_and(|t| markers.iter().any(|m| m == t)),
        MarkerPosition::AnyToken => tokens.iter().any(|t| markers.iter().any(|m| m == t)),
    }
}

/// Over all instances of the adjacent pattern, the fraction whose second
/// utterance contains one of the markers at the given position.
pub fn lexical_marker_share<F: Scalar>(
    corpus: &Corpus,
    pattern: BigramPattern,
    markers: &[String],
    position: MarkerPosition,
) -> MarkerShare<F> {
    debug_assert!(!markers.is_empty(), "markers must be non-empty");
    let normalized: Vec<String> = markers
        .iter()
        .flat_map(|m| normalize_tokens(m))
        .collect();
    let mut instances = 0u64;
    let mut matched = Vec::new();
    for session in &corpus.sessions {
        for pair in session.utterances.windows(2) {
            if pair[0].talk_move == pattern.first && pair[1].talk_move == pattern.second {
                instances += 1;
                if matches_marker(&pair[1].text, &normalized, position) {
                    matched.push(InstanceRef {
                        session_id: session.session_id.clone(),
                        first_index: pair[0].index,
                        second_index: pair[1].index,
                    });
                }
            }
        }
    }
    MarkerShare {
        share: F::ratio(matched.len() as u64, instances),
        instances,
        matched,
    }
}

/// Patterns [`extract_instances`] can search for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtractPattern {
    /// Adjacent `(tm_j, tm_k)`.
    Bigram(TalkMove, TalkMove),
    /// `tm_j -> T-None -> tm_k` with exactly one intervening utterance.
    Triple(TalkMove, TalkMove),
    /// A single utterance carrying both the move and the act.
    MoveWithAct(TalkMove, DialogueAct),
}

/// A matched excerpt with surrounding context, carrying all three
/// annotation views for qualitative inspection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Excerpt {
    pub session_id: String,
    /// Indices of the matched pattern itself.
    pub match_span: (usize, usize),
    /// Indices actually included, after context padding and clipping.
    pub span: (usize, usize),
    pub utterances: Vec<Utterance>,
    /// Edges with both endpoints inside `span`.
    pub edges: Vec<DiscourseEdge>,
}

/// Returns up to `limit` pattern matches in (session order, index) order,
/// each padded by `context_window` utterances on both sides.
pub fn extract_instances(
    corpus: &Corpus,
    pattern: &ExtractPattern,
    limit: usize,
    context_window: usize,
) -> Vec<Excerpt> {
    let mut out = Vec::new();
    for session in &corpus.sessions {
        if out.len() >= limit {
            break;
        }
        let n = session.utterances.len();
        let matches: Vec<(usize, usize)> = match pattern {
            ExtractPattern::Bigram(j, k) => session
                .utterances
                .windows(2)
                .filter(|w| w[0].talk_move == *j && w[1].talk_move == *k)
                .map(|w| (w[0].index, w[1].index))
                .collect(),
            ExtractPattern::Triple(j, k) => session
                .utterances
                .windows(3)
                .filter(|w| {
                    w[0].talk_move == *j
                        && w[1].talk_move == TalkMove::TNone
                        && w[2].talk_move == *k
                })
                .map(|w| (w[0].index, w[2].index))
                .collect(),
            ExtractPattern::MoveWithAct(m, act) => session
                .utterances
                .iter()
                .filter(|u| u.talk_move == *m && u.dialogue_act == *act)
                .map(|u| (u.index, u.index))
                .collect(),
        };
        for (start, end) in matches {
            if out.len() >= limit {
                break;
            }
            let lo = start.saturating_sub(context_window);
            let hi = (end + context_window).min(n.saturating_sub(1));
            out.push(Excerpt {
                session_id: session.session_id.clone(),
                match_span: (start, end),
                span: (lo, hi),
                utterances: session.utterances[lo..=hi].to_vec(),
                edges: session
                    .edges
                    .iter()
                    .filter(|e| e.source >= lo && e.target <= hi)
                    .cloned()
                    .collect(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{session_of_moves, utterance, Corpus, DomainTag, Session};
    use TalkMove::*;

    fn session(moves: &[TalkMove], edges: Vec<DiscourseEdge>) -> Session {
        let mut s = session_of_moves("s", moves);
        s.edges = {
            let mut e = edges;
            e.sort();
            e
        };
        s
    }

    #[test]
    fn bigram_relation_hand_count() {
        // Three (S-MClaim, T-PRA) instances: one Clarification_question
        // edge, one missing, one Acknowledgement edge.
        let moves = [
            SMClaim, TPra, SNone, SMClaim, TPra, SNone, SMClaim, TPra,
        ];
        let s = session(
            &moves,
            vec![
                DiscourseEdge::new(0, 1, "Clarification_question"),
                DiscourseEdge::new(6, 7, "Acknowledgement"),
            ],
        );
        let corpus = Corpus::new("c", vec![s]);
        let d: Distribution = bigram_relation_distribution(&corpus, SMClaim, TPra);
        assert_eq!(d.total(), 3);
        assert!((d.share_of("Clarification_question") - 1.0 / 3.0).abs() < 1e-12);
        assert!((d.share_of("Acknowledgement") - 1.0 / 3.0).abs() < 1e-12);
        assert!((d.share_of(NO_EDGE_LABEL) - 1.0 / 3.0).abs() < 1e-12);
        let sum: f64 = d.shares().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bigram_relation_ignores_edges_to_other_context() {
        // The second utterance attaches to earlier context (0 -> 2), not to
        // its predecessor; the bigram gets no-edge.
        let s = session(
            &[TKet, SMClaim, TPra],
            vec![DiscourseEdge::new(0, 2, "Comment")],
        );
        let corpus = Corpus::new("c", vec![s]);
        let d: Distribution = bigram_relation_distribution(&corpus, SMClaim, TPra);
        assert_eq!(d.total(), 1);
        assert_eq!(d.share_of(NO_EDGE_LABEL), 1.0);
    }

    #[test]
    fn bigram_relation_zero_instances_is_empty() {
        let corpus = Corpus::new("c", vec![session(&[TKet, SNone], vec![])]);
        let d: Distribution = bigram_relation_distribution(&corpus, SMClaim, TPra);
        assert!(d.is_empty());
        assert_eq!(d.total(), 0);
    }

    #[test]
    fn parallel_edges_resolve_to_lexicographic_min() {
        let s = session(
            &[SMClaim, TPra],
            vec![
                DiscourseEdge::new(0, 1, "Comment"),
                DiscourseEdge::new(0, 1, "Acknowledgement"),
            ],
        );
        let corpus = Corpus::new("c", vec![s]);
        let d: Distribution = bigram_relation_distribution(&corpus, SMClaim, TPra);
        assert_eq!(d.share_of("Acknowledgement"), 1.0);
    }

    #[test]
    fn talkmove_to_none_da_hand_count() {
        // (tm_j, T-None) pairs with None-acts [sd, sd, ad].
        let utterances = vec![
            utterance(0, TRes, "sd"),
            utterance(1, TNone, "sd"),
            utterance(2, TRes, "qw"),
            utterance(3, TNone, "sd"),
            utterance(4, TRes, "qw"),
            utterance(5, TNone, "ad"),
        ];
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let d: Distribution = talkmove_to_none_da_distribution(&corpus, TRes);
        assert_eq!(d.total(), 3);
        assert!((d.share_of("sd") - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.share_of("ad") - 1.0 / 3.0).abs() < 1e-12);
        // Absent pattern gives an empty distribution.
        let none: Distribution = talkmove_to_none_da_distribution(&corpus, TGsr);
        assert!(none.is_empty());
    }

    #[test]
    fn continuation_tags_count_in_none_distributions() {
        let utterances = vec![
            utterance(0, TRes, "sd"),
            utterance(1, TNone, "+"),
        ];
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let d: Distribution = talkmove_to_none_da_distribution(&corpus, TRes);
        assert_eq!(d.share_of("+"), 1.0);
    }

    #[test]
    fn triple_none_da_hand_count() {
        // Middle acts [ad, sd, ad, b] -> ad 0.5, sd 0.25, b 0.25.
        let mut utterances = Vec::new();
        for (i, act) in ["ad", "sd", "ad", "b"].iter().enumerate() {
            utterances.push(utterance(3 * i, TPra, "qw"));
            utterances.push(utterance(3 * i + 1, TNone, act));
            utterances.push(utterance(3 * i + 2, SMClaim, "sd"));
        }
        // Reindex consecutively: triples at (0,1,2), (3,4,5), ... but the
        // boundary pairs (S-MClaim, T-PRA) do not form triples.
        for (i, u) in utterances.iter_mut().enumerate() {
            u.index = i;
        }
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let d: Distribution = triple_none_da_distribution(&corpus, TPra, SMClaim).unwrap();
        assert_eq!(d.total(), 4);
        assert_eq!(d.share_of("ad"), 0.5);
        assert_eq!(d.share_of("sd"), 0.25);
        assert_eq!(d.share_of("b"), 0.25);

        let empty: Distribution = triple_none_da_distribution(&corpus, TRes, TKet).unwrap();
        assert!(empty.is_empty());
        assert!(triple_none_da_distribution::<f64>(&corpus, TNone, SMClaim).is_err());
    }

    #[test]
    fn triple_requires_exactly_one_intervening_tnone() {
        let corpus = Corpus::new(
            "c",
            vec![session(&[TPra, TNone, TNone, SMClaim, TPra, SMClaim], vec![])],
        );
        let instances = triple_instances(&corpus, TPra, SMClaim).unwrap();
        assert!(instances.is_empty());
    }

    #[test]
    fn lexical_marker_hand_tokenization() {
        let mut utterances = vec![
            utterance(0, SProEvi, "sd"),
            utterance(1, SProEvi, "sd"),
            utterance(2, SProEvi, "sd"),
        ];
        utterances[1].text = "So we add them".into();
        utterances[2].text = "We add them".into();
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let pattern = BigramPattern {
            first: SProEvi,
            second: SProEvi,
        };
        let markers = vec!["so".to_string()];
        let share: MarkerShare =
            lexical_marker_share(&corpus, pattern, &markers, MarkerPosition::LeadingToken);
        assert_eq!(share.share, 0.5);
        assert_eq!(share.instances, 2);
        assert_eq!(share.matched.len(), 1);
        assert_eq!(share.matched[0].second_index, 1);
    }

    #[test]
    fn leading_punctuation_is_stripped() {
        let mut utterances = vec![utterance(0, SProEvi, "sd"), utterance(1, SProEvi, "sd")];
        utterances[1].text = "So, first we factor.".into();
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let share: MarkerShare = lexical_marker_share(
            &corpus,
            BigramPattern {
                first: SProEvi,
                second: SProEvi,
            },
            &["so".to_string()],
            MarkerPosition::LeadingToken,
        );
        assert_eq!(share.share, 1.0);
    }

    #[test]
    fn no_matches_gives_zero_share() {
        let mut utterances = vec![utterance(0, SProEvi, "sd"), utterance(1, SProEvi, "sd")];
        utterances[1].text = "We add them".into();
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let pattern = BigramPattern {
            first: SProEvi,
            second: SProEvi,
        };
        let leading: MarkerShare = lexical_marker_share(
            &corpus,
            pattern,
            &["so".to_string()],
            MarkerPosition::LeadingToken,
        );
        assert_eq!(leading.share, 0.0);
        // Zero instances also reports zero.
        let empty: MarkerShare = lexical_marker_share(
            &Corpus::empty("c"),
            pattern,
            &["so".to_string()],
            MarkerPosition::LeadingToken,
        );
        assert_eq!(empty.share, 0.0);
        assert_eq!(empty.instances, 0);
    }

    #[test]
    fn any_token_position_is_at_least_leading() {
        let mut utterances = vec![utterance(0, SProEvi, "sd"), utterance(1, SProEvi, "sd")];
        utterances[1].text = "We add them, so the sum grows".into();
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let pattern = BigramPattern {
            first: SProEvi,
            second: SProEvi,
        };
        let markers = vec!["so".to_string()];
        let leading: MarkerShare =
            lexical_marker_share(&corpus, pattern, &markers, MarkerPosition::LeadingToken);
        let any: MarkerShare =
            lexical_marker_share(&corpus, pattern, &markers, MarkerPosition::AnyToken);
        assert_eq!(leading.share, 0.0);
        assert_eq!(any.share, 1.0);
        assert!(any.share >= leading.share);
    }

    #[test]
    fn extract_earliest_matches_in_order() {
        let corpus = Corpus::new(
            "c",
            vec![
                session_of_moves("a", &[TPra, SMClaim, TPra, SMClaim]),
                session_of_moves("b", &[TPra, SMClaim]),
            ],
        );
        let pattern = ExtractPattern::Bigram(TPra, SMClaim);
        let one = extract_instances(&corpus, &pattern, 1, 0);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].session_id, "a");
        assert_eq!(one[0].match_span, (0, 1));
        let all = extract_instances(&corpus, &pattern, 10, 0);
        assert_eq!(all.len(), 3);
        assert_eq!(all[2].session_id, "b");
    }

    #[test]
    fn context_window_clips_at_session_bounds() {
        let corpus = Corpus::new(
            "c",
            vec![session_of_moves("a", &[TPra, SMClaim, SNone, TKet])],
        );
        let pattern = ExtractPattern::Bigram(TPra, SMClaim);
        let excerpts = extract_instances(&corpus, &pattern, 10, 1);
        assert_eq!(excerpts.len(), 1);
        // Match (0, 1) padded by 1 clips to [0, 2].
        assert_eq!(excerpts[0].span, (0, 2));
        assert_eq!(excerpts[0].utterances.len(), 3);
    }

    #[test]
    fn absent_pattern_extracts_nothing() {
        let corpus = Corpus::new("c", vec![session_of_moves("a", &[TPra, TPra])]);
        let excerpts = extract_instances(
            &corpus,
            &ExtractPattern::Triple(TPra, SMClaim),
            5,
            2,
        );
        assert!(excerpts.is_empty());
    }

    #[test]
    fn move_with_act_matches_single_utterances() {
        let utterances = vec![
            utterance(0, SMClaim, "qy"),
            utterance(1, SMClaim, "sd"),
            utterance(2, SMClaim, "qy"),
        ];
        let corpus = Corpus::new(
            "c",
            vec![Session::new("s", DomainTag::Other, utterances, vec![])],
        );
        let excerpts = extract_instances(
            &corpus,
            &ExtractPattern::MoveWithAct(SMClaim, DialogueAct::new("qy")),
            10,
            0,
        );
        assert_eq!(excerpts.len(), 2);
        assert_eq!(excerpts[0].match_span, (0, 0));
        assert_eq!(excerpts[1].match_span, (2, 2));
    }
}

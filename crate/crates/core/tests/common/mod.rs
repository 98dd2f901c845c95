//! Shared test support: seeded random corpus generation and independent
//! brute-force oracles the acceptance suite checks the library against.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::prelude::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use discourse_lens::corpus::{
    Corpus, DialogueAct, DiscourseEdge, DomainTag, Session, TalkMove, Utterance,
};

const TEACHER_MOVES: [TalkMove; 6] = [
    TalkMove::TGsr,
    TalkMove::TKet,
    TalkMove::TPra,
    TalkMove::TPrr,
    TalkMove::TRes,
    TalkMove::TRev,
];

const STUDENT_MOVES: [TalkMove; 4] = [
    TalkMove::SAskMi,
    TalkMove::SMClaim,
    TalkMove::SProEvi,
    TalkMove::SRelTo,
];

const ACTS: [&str; 10] = ["sd", "qw", "qy", "b", "ad", "+", "fc", "ba", "sv", "bk"];

const RELATIONS: [&str; 6] = [
    "Comment",
    "Elaboration",
    "Acknowledgement",
    "Continuation",
    "Clarification_question",
    "Question-Answer_pair",
];

const WORDS: [&str; 12] = [
    "so", "we", "add", "the", "numbers", "because", "slope", "is", "two,", "right?", "\"x\"",
    "okay.",
];

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub max_sessions: usize,
    pub max_utterances: usize,
    /// Probability that a generated move is the role's None catch-all;
    /// teacher Nones make gap patterns common.
    pub none_weight: f64,
    pub with_edges: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_sessions: 4,
            max_utterances: 30,
            none_weight: 0.4,
            with_edges: true,
        }
    }
}

pub fn random_move(rng: &mut ChaCha8Rng, none_weight: f64) -> TalkMove {
    let teacher = rng.random_bool(0.55);
    if rng.random_bool(none_weight) {
        if teacher {
            TalkMove::TNone
        } else {
            TalkMove::SNone
        }
    } else if teacher {
        *TEACHER_MOVES.choose(rng).expect("non-empty")
    } else {
        *STUDENT_MOVES.choose(rng).expect("non-empty")
    }
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let words = rng.random_range(0..8);
    let mut parts = Vec::with_capacity(words);
    for _ in 0..words {
        parts.push(*WORDS.choose(rng).expect("non-empty"));
    }
    let mut text = parts.join(" ");
    if rng.random_bool(0.05) {
        text.push('\n');
        text.push_str("second line");
    }
    text
}

fn crossing(a: &DiscourseEdge, b: &DiscourseEdge) -> bool {
    (a.source < b.source && b.source < a.target && a.target < b.target)
        || (b.source < a.source && a.source < b.target && b.target < a.target)
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<DiscourseEdge> {
    if n < 2 {
        return Vec::new();
    }
    let attempts = rng.random_range(0..=n);
    let mut kept: Vec<DiscourseEdge> = Vec::new();
    for _ in 0..attempts {
        let source = rng.random_range(0..n - 1);
        let target = rng.random_range(source + 1..n);
        let edge = DiscourseEdge::new(source, target, *RELATIONS.choose(rng).expect("non-empty"));
        let duplicate = kept.iter().any(|e| {
            e.source == edge.source && e.target == edge.target && e.relation == edge.relation
        });
        // Strictly valid corpora only: SDRT prohibits crossing edges.
        if !duplicate && !kept.iter().any(|e| crossing(e, &edge)) {
            kept.push(edge);
        }
    }
    kept
}

pub fn random_session(rng: &mut ChaCha8Rng, session_id: &str, opts: &GenOptions) -> Session {
    let n = rng.random_range(0..=opts.max_utterances);
    let mut utterances = Vec::with_capacity(n);
    for index in 0..n {
        let talk_move = random_move(rng, opts.none_weight);
        let speaker_id = if rng.random_bool(0.3) {
            Some(format!("p{}", rng.random_range(0..5)))
        } else {
            None
        };
        utterances.push(Utterance {
            index,
            speaker: talk_move.role(),
            speaker_id,
            text: random_text(rng),
            talk_move,
            dialogue_act: DialogueAct::new(*ACTS.choose(rng).expect("non-empty")),
        });
    }
    let edges = if opts.with_edges {
        random_edges(rng, n)
    } else {
        Vec::new()
    };
    let domain = match rng.random_range(0..3) {
        0 => DomainTag::Teaching,
        1 => DomainTag::Tutoring,
        _ => DomainTag::Other,
    };
    Session::new(session_id, domain, utterances, edges)
}

/// A strictly valid random corpus.
pub fn random_corpus(rng: &mut ChaCha8Rng, corpus_id: &str, opts: &GenOptions) -> Corpus {
    let sessions = (0..rng.random_range(1..=opts.max_sessions))
        .map(|i| random_session(rng, &format!("s{i}"), opts))
        .collect();
    Corpus::new(corpus_id, sessions)
}

/// Brute-force gap oracle: enumerates index pairs `(a, b)`, `a < b`, and
/// checks the pattern definition directly — `moves[a] = tm_j`, `moves[b] =
/// tm_k`, everything between labeled `T-None`. Counts are keyed by gap
/// length `b - a - 1`.
pub fn brute_gap_counts(
    moves: &[TalkMove],
    tm_j: TalkMove,
    tm_k: TalkMove,
) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for a in 0..moves.len() {
        if moves[a] != tm_j {
            continue;
        }
        for b in a + 1..moves.len() {
            // Once the gap prefix contains a non-T-None, no later b can
            // satisfy the all-T-None condition for this anchor.
            if b > a + 1 && moves[b - 1] != TalkMove::TNone {
                break;
            }
            if moves[b] == tm_k {
                *out.entry(b - a - 1).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Independent arithmetic for the gap statistic: drop gap lengths whose
/// instance share is below `min_share`, then 100 x the weighted mean.
/// Returns `(value, retained_instances)`.
pub fn brute_gap_value(counts: &BTreeMap<usize, u64>, min_share: f64) -> (f64, u64) {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return (0.0, 0);
    }
    let mut weighted = 0.0f64;
    let mut retained = 0u64;
    for (&gap, &count) in counts {
        if count as f64 / total as f64 >= min_share {
            weighted += gap as f64 * count as f64;
            retained += count;
        }
    }
    if retained == 0 {
        (0.0, 0)
    } else {
        (weighted / retained as f64 * 100.0, retained)
    }
}

/// Deletion oracle for collapse equivalence: a copy of the corpus with all
/// `None`-move utterances removed and indices rebuilt. Edges are dropped;
/// transition counting ignores them.
pub fn delete_none_utterances(corpus: &Corpus) -> Corpus {
    let sessions = corpus
        .sessions
        .iter()
        .map(|s| {
            let utterances: Vec<Utterance> = s
                .utterances
                .iter()
                .filter(|u| !u.talk_move.is_none())
                .enumerate()
                .map(|(i, u)| {
                    let mut u = u.clone();
                    u.index = i;
                    u
                })
                .collect();
            Session::new(s.session_id.clone(), s.domain, utterances, Vec::new())
        })
        .collect();
    Corpus::new(corpus.corpus_id.clone(), sessions)
}

/// The worked six-utterance fixture used across acceptance checks and the
/// rendering goldens.
pub fn worked_fixture() -> Corpus {
    let moves = [
        (TalkMove::TPra, "qw", "What is the slope here?"),
        (TalkMove::TNone, "sd", "Look at the rise over the run."),
        (TalkMove::TNone, "ad", "Take your time."),
        (TalkMove::SMClaim, "sd", "I think it is two."),
        (TalkMove::TPra, "qy", "Are you sure about two?"),
        (TalkMove::SMClaim, "sd", "So it has to be two."),
    ];
    let utterances = moves
        .iter()
        .enumerate()
        .map(|(index, (talk_move, act, text))| Utterance {
            index,
            speaker: talk_move.role(),
            speaker_id: None,
            text: text.to_string(),
            talk_move: *talk_move,
            dialogue_act: DialogueAct::new(*act),
        })
        .collect();
    let edges = vec![
        DiscourseEdge::new(0, 3, "Question-Answer_pair"),
        DiscourseEdge::new(3, 4, "Clarification_question"),
    ];
    Corpus::new(
        "fixture",
        vec![Session::new("s1", DomainTag::Teaching, utterances, edges)],
    )
}

//! Dialogue discourse analytics over three annotation views: talk moves,
//! dialogue acts, and SDRT discourse relations.
//!
//! The crate ingests annotated transcripts (JSONL or CSV), validates their
//! structure, and computes a deterministic battery of statistics:
//!
//! * unigram label distributions and talk-move x dialogue-act cross-tabs,
//! * bigram transition matrices (direct and with `None` utterances
//!   collapsed out), threshold-filtered transition edges, and the
//!   intervening-`T-None` gap statistic,
//! * multi-view joins of move bigrams with discourse relations and of
//!   `None` utterances with their dialogue acts,
//! * a canonical machine-readable report with byte-stable serialization,
//!   plus DOT transition diagrams and heatmap CSV tables.
//!
//! All fractional statistics are generic over [`scalar::Scalar`]; the types
//! re-exported at the crate root default to `f64`.

pub mod analysis;
pub mod corpus;
pub mod ingest;
pub mod report;
pub mod scalar;

pub use scalar::{DefaultScalar, Scalar};

pub use corpus::{
    Corpus, DialogueAct, DiscourseEdge, DomainTag, LabelVocabularies, RelationLabel, Session,
    SpeakerRole, Strictness, TalkMove, Utterance, ValidationReport, View, Vocabulary,
};

/// Runs `f` inside a rayon pool with the given thread count (`None` uses the
/// global default). All analytics merge per-session counts commutatively, so
/// results do not depend on the pool size; this exists for the CLI's
/// `--threads` flag and for determinism tests.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

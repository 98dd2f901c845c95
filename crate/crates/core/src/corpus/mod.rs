//! Data model, label vocabularies, and structural validation for annotated
//! dialogue corpora.

mod labels;
mod model;
mod validate;

pub use labels::{
    ConfigError, DialogueAct, LabelVocabularies, RelationLabel, SpeakerRole, TalkMove, View,
    Vocabulary, CONTINUATION_TAG,
};
pub use model::{session_of_moves, utterance, Corpus, DiscourseEdge, DomainTag, Session, Utterance};
pub use validate::{
    validate_corpus, validate_session, Severity, Strictness, ValidationReport, Violation,
    ViolationCode,
};

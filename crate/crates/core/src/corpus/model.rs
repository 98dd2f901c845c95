//! Annotated-transcript data model: utterances, discourse edges, sessions,
//! and corpora. All types are immutable after construction and cheap to
//! share across threads.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::labels::{DialogueAct, RelationLabel, SpeakerRole, TalkMove};

/// Which dataset family a session belongs to.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    Teaching,
    Tutoring,
    Other,
}

impl DomainTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainTag::Teaching => "teaching",
            DomainTag::Tutoring => "tutoring",
            DomainTag::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "teaching" => Some(DomainTag::Teaching),
            "tutoring" => Some(DomainTag::Tutoring),
            "other" => Some(DomainTag::Other),
            _ => None,
        }
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One transcript turn with its two utterance-level annotations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Utterance {
    /// Position within the session: 0..n-1, consecutive.
    pub index: usize,
    pub speaker: SpeakerRole,
    /// Opaque annotator-provided identity; empty strings are normalized away.
    pub speaker_id: Option<String>,
    pub text: String,
    pub talk_move: TalkMove,
    pub dialogue_act: DialogueAct,
}

/// A labeled forward attachment between two utterances of one session.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DiscourseEdge {
    pub source: usize,
    pub target: usize,
    pub relation: RelationLabel,
}

impl DiscourseEdge {
    pub fn new(source: usize, target: usize, relation: impl Into<String>) -> Self {
        DiscourseEdge {
            source,
            target,
            relation: RelationLabel::new(relation),
        }
    }
}

/// One annotated transcript: ordered utterances plus the SDRT edge set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub domain: DomainTag,
    pub utterances: Vec<Utterance>,
    /// Kept sorted by `(source, target, relation)`.
    pub edges: Vec<DiscourseEdge>,
}

impl Session {
    /// Builds a session, normalizing edge order to the canonical sort.
    pub fn new(
        session_id: impl Into<String>,
        domain: DomainTag,
        utterances: Vec<Utterance>,
        mut edges: Vec<DiscourseEdge>,
    ) -> Self {
        edges.sort();
        Session {
            session_id: session_id.into(),
            domain,
            utterances,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    /// Talk moves in utterance order.
    pub fn moves(&self) -> impl Iterator<Item = TalkMove> + '_ {
        self.utterances.iter().map(|u| u.talk_move)
    }
}

/// An ordered collection of sessions analyzed as one unit.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Corpus {
    pub corpus_id: String,
    pub sessions: Vec<Session>,
}

impl Corpus {
    pub fn new(corpus_id: impl Into<String>, sessions: Vec<Session>) -> Self {
        Corpus {
            corpus_id: corpus_id.into(),
            sessions,
        }
    }

    pub fn empty(corpus_id: impl Into<String>) -> Self {
        Corpus::new(corpus_id, Vec::new())
    }

    pub fn utterance_count(&self) -> usize {
        self.sessions.iter().map(Session::len).sum()
    }
}

/// Shorthand used throughout the tests: an utterance with defaulted text
/// and a speaker derived from the talk move's role.
pub fn utterance(index: usize, talk_move: TalkMove, dialogue_act: &str) -> Utterance {
    Utterance {
        index,
        speaker: talk_move.role(),
        speaker_id: None,
        text: String::new(),
        talk_move,
        dialogue_act: DialogueAct::new(dialogue_act),
    }
}

/// A session whose utterances carry the given moves, with a fixed dialogue
/// act and empty text. Convenience for statistics tests where only the move
/// sequence matters.
pub fn session_of_moves(session_id: &str, moves: &[TalkMove]) -> Session {
    let utterances = moves
        .iter()
        .enumerate()
        .map(|(i, m)| utterance(i, *m, "sd"))
        .collect();
    Session::new(session_id, DomainTag::Other, utterances, Vec::new())
}

//! Label vocabularies for the three annotation views.
//!
//! Talk moves are a closed set of twelve labels and are modeled as an enum.
//! Dialogue acts and discourse relations come from configurable vocabularies
//! with built-in defaults: the flattened SWBD-DAMSL clusters plus the
//! continuation tag `+`, and the STAC-style SDRT relation set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Who produced an utterance. Tutors are tagged as teachers.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeakerRole {
    Teacher,
    Student,
}

impl SpeakerRole {
    pub fn as_str(self) -> &'static str {
        match self {
            SpeakerRole::Teacher => "teacher",
            SpeakerRole::Student => "student",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "teacher" => Some(SpeakerRole::Teacher),
            "student" => Some(SpeakerRole::Student),
            _ => None,
        }
    }
}

impl fmt::Display for SpeakerRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The twelve talk-move labels: seven teacher moves and five student moves,
/// each role with a `None` catch-all. Variant order is the lexicographic
/// order of the label strings, so `index()` doubles as the canonical matrix
/// index.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TalkMove {
    SAskMi,
    SMClaim,
    SNone,
    SProEvi,
    SRelTo,
    TGsr,
    TKet,
    TNone,
    TPra,
    TPrr,
    TRes,
    TRev,
}

impl TalkMove {
    pub const COUNT: usize = 12;

    /// All talk moves in canonical (lexicographic) label order.
    pub const ALL: [TalkMove; 12] = [
        TalkMove::SAskMi,
        TalkMove::SMClaim,
        TalkMove::SNone,
        TalkMove::SProEvi,
        TalkMove::SRelTo,
        TalkMove::TGsr,
        TalkMove::TKet,
        TalkMove::TNone,
        TalkMove::TPra,
        TalkMove::TPrr,
        TalkMove::TRes,
        TalkMove::TRev,
    ];

    /// The ten non-`None` talk moves in canonical order.
    pub const NON_NONE: [TalkMove; 10] = [
        TalkMove::SAskMi,
        TalkMove::SMClaim,
        TalkMove::SProEvi,
        TalkMove::SRelTo,
        TalkMove::TGsr,
        TalkMove::TKet,
        TalkMove::TPra,
        TalkMove::TPrr,
        TalkMove::TRes,
        TalkMove::TRev,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TalkMove::SAskMi => "S-AskMI",
            TalkMove::SMClaim => "S-MClaim",
            TalkMove::SNone => "S-None",
            TalkMove::SProEvi => "S-ProEvi",
            TalkMove::SRelTo => "S-RelTo",
            TalkMove::TGsr => "T-GSR",
            TalkMove::TKet => "T-KET",
            TalkMove::TNone => "T-None",
            TalkMove::TPra => "T-PRA",
            TalkMove::TPrr => "T-PRR",
            TalkMove::TRes => "T-RES",
            TalkMove::TRev => "T-REV",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        TalkMove::ALL.iter().copied().find(|m| m.label() == s)
    }

    /// Position in [`TalkMove::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// The role implied by the label prefix.
    pub fn role(self) -> SpeakerRole {
        match self {
            TalkMove::TGsr
            | TalkMove::TKet
            | TalkMove::TNone
            | TalkMove::TPra
            | TalkMove::TPrr
            | TalkMove::TRes
            | TalkMove::TRev => SpeakerRole::Teacher,
            _ => SpeakerRole::Student,
        }
    }

    /// True exactly for the two catch-all labels.
    pub fn is_none(self) -> bool {
        matches!(self, TalkMove::TNone | TalkMove::SNone)
    }

    /// The role's catch-all label.
    pub fn none_for(role: SpeakerRole) -> Self {
        match role {
            SpeakerRole::Teacher => TalkMove::TNone,
            SpeakerRole::Student => TalkMove::SNone,
        }
    }
}

impl fmt::Display for TalkMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for TalkMove {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for TalkMove {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        TalkMove::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown talk move '{s}'")))
    }
}

/// A dialogue-act tag. Validity against the loaded vocabulary is checked at
/// parse/validation time, not by the type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DialogueAct(String);

/// The continuation tag: continued previous talk by the same speaker.
pub const CONTINUATION_TAG: &str = "+";

impl DialogueAct {
    pub fn new(label: impl Into<String>) -> Self {
        DialogueAct(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_continuation(&self) -> bool {
        self.0 == CONTINUATION_TAG
    }
}

impl fmt::Display for DialogueAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A discourse-relation label on an edge between two utterances.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelationLabel(String);

impl RelationLabel {
    pub fn new(label: impl Into<String>) -> Self {
        RelationLabel(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The three annotation views.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum View {
    TalkMove,
    DialogueAct,
    Relation,
}

/// The 42 flattened SWBD-DAMSL cluster tags plus the continuation tag `+`.
const DEFAULT_DIALOGUE_ACTS: [&str; 43] = [
    "%", "+", "^2", "^g", "^h", "^q", "aa", "aap_am", "ad", "ar", "arp_nd", "b", "b^m", "ba",
    "bd", "bf", "bh", "bk", "br", "fa", "fc", "fp", "ft", "h", "na", "ng", "nn", "no", "ny", "o",
    "oo_co_cc", "qh", "qo", "qrr", "qw", "qw^d", "qy", "qy^d", "sd", "sv", "t1", "t3", "x",
];

/// The 16 STAC-style SDRT relation names.
const DEFAULT_RELATIONS: [&str; 16] = [
    "Comment",
    "Clarification_question",
    "Elaboration",
    "Acknowledgement",
    "Continuation",
    "Explanation",
    "Conditional",
    "Question-Answer_pair",
    "Alternation",
    "Q-Elab",
    "Result",
    "Background",
    "Narration",
    "Correction",
    "Parallel",
    "Contrast",
];

/// Labels a lenient parse may substitute for an unrecognized dialogue act,
/// in preference order.
const OTHER_ACT_CANDIDATES: [&str; 2] = ["o", "Other"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("CONFIG_INVALID: duplicate label '{0}' in vocabulary")]
    DuplicateLabel(String),
    #[error("CONFIG_INVALID: vocabulary is empty")]
    EmptyVocabulary,
    #[error("CONFIG_INVALID: talk-move vocabulary must be exactly the 12 built-in labels; {0}")]
    TalkMoveMismatch(String),
    #[error("CONFIG_INVALID: {0}")]
    Invalid(String),
}

/// An ordered, duplicate-free label list. Ordering is lexicographic so the
/// list is stable across runs regardless of configuration file order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Vocabulary {
    labels: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary from raw labels: trims surrounding whitespace,
    /// drops empty entries, sorts, and rejects duplicates.
    pub fn new<I, S>(labels: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut cleaned: Vec<String> = labels
            .into_iter()
            .map(|l| l.into().trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        cleaned.sort();
        for pair in cleaned.windows(2) {
            if pair[0] == pair[1] {
                return Err(ConfigError::DuplicateLabel(pair[0].clone()));
            }
        }
        if cleaned.is_empty() {
            return Err(ConfigError::EmptyVocabulary);
        }
        Ok(Vocabulary { labels: cleaned })
    }

    /// Parses a vocabulary file: UTF-8, one label per line, blank lines skipped.
    pub fn from_lines(text: &str) -> Result<Self, ConfigError> {
        Vocabulary::new(text.lines())
    }

    pub fn default_dialogue_acts() -> Self {
        Vocabulary::new(DEFAULT_DIALOGUE_ACTS).expect("built-in vocabulary is valid")
    }

    pub fn default_relations() -> Self {
        Vocabulary::new(DEFAULT_RELATIONS).expect("built-in vocabulary is valid")
    }

    pub fn talk_moves() -> Self {
        Vocabulary::new(TalkMove::ALL.iter().map(|m| m.label()))
            .expect("built-in vocabulary is valid")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).is_ok()
    }
}

/// The loaded vocabularies for all three views.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelVocabularies {
    pub dialogue_acts: Vocabulary,
    pub relations: Vocabulary,
    talk_moves: Vocabulary,
}

impl Default for LabelVocabularies {
    fn default() -> Self {
        LabelVocabularies {
            dialogue_acts: Vocabulary::default_dialogue_acts(),
            relations: Vocabulary::default_relations(),
            talk_moves: Vocabulary::talk_moves(),
        }
    }
}

impl LabelVocabularies {
    /// Assembles vocabularies from optional override lists. The talk-move
    /// list, when supplied, must be a permutation of the built-in twelve.
    pub fn with_overrides(
        talk_moves: Option<Vocabulary>,
        dialogue_acts: Option<Vocabulary>,
        relations: Option<Vocabulary>,
    ) -> Result<Self, ConfigError> {
        if let Some(tm) = &talk_moves {
            let builtin: BTreeSet<&str> = TalkMove::ALL.iter().map(|m| m.label()).collect();
            let given: BTreeSet<&str> = tm.labels().iter().map(|s| s.as_str()).collect();
            if builtin != given {
                let extra: Vec<&&str> = given.difference(&builtin).collect();
                let missing: Vec<&&str> = builtin.difference(&given).collect();
                return Err(ConfigError::TalkMoveMismatch(format!(
                    "unexpected {extra:?}, missing {missing:?}"
                )));
            }
        }
        Ok(LabelVocabularies {
            dialogue_acts: dialogue_acts.unwrap_or_else(Vocabulary::default_dialogue_acts),
            relations: relations.unwrap_or_else(Vocabulary::default_relations),
            talk_moves: Vocabulary::talk_moves(),
        })
    }

    /// The canonical ordered label list for a view.
    pub fn view(&self, view: View) -> &[String] {
        match view {
            View::TalkMove => self.talk_moves.labels(),
            View::DialogueAct => self.dialogue_acts.labels(),
            View::Relation => self.relations.labels(),
        }
    }

    /// The label lenient ingestion substitutes for an unknown dialogue act,
    /// when the loaded vocabulary has one.
    pub fn other_act(&self) -> Option<&str> {
        OTHER_ACT_CANDIDATES
            .iter()
            .copied()
            .find(|l| self.dialogue_acts.contains(l))
    }
}

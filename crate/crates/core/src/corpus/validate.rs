//! Structural validation of sessions and corpora.
//!
//! Violations are data, not failures: validation always returns a report.
//! Strictness decides how tolerant checks are graded — automatic parsers
//! emit crossing edges and drifting labels, so lenient mode downgrades
//! those to warnings.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::labels::LabelVocabularies;
use super::model::{Corpus, Session};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Strict,
    Lenient,
}

/// Stable machine-readable violation codes.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ViolationCode {
    #[serde(rename = "INDEX_SEQUENCE")]
    IndexSequence,
    #[serde(rename = "ROLE_MOVE_MISMATCH")]
    RoleMoveMismatch,
    #[serde(rename = "UNKNOWN_LABEL")]
    UnknownLabel,
    #[serde(rename = "EDGE_BACKWARD")]
    EdgeBackward,
    #[serde(rename = "EDGE_SELF_LOOP")]
    EdgeSelfLoop,
    #[serde(rename = "EDGE_DUPLICATE")]
    EdgeDuplicate,
    #[serde(rename = "EDGE_ENDPOINT")]
    EdgeEndpoint,
    #[serde(rename = "CROSSING_EDGES")]
    CrossingEdges,
    #[serde(rename = "DUPLICATE_SESSION_ID")]
    DuplicateSessionId,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::IndexSequence => "INDEX_SEQUENCE",
            ViolationCode::RoleMoveMismatch => "ROLE_MOVE_MISMATCH",
            ViolationCode::UnknownLabel => "UNKNOWN_LABEL",
            ViolationCode::EdgeBackward => "EDGE_BACKWARD",
            ViolationCode::EdgeSelfLoop => "EDGE_SELF_LOOP",
            ViolationCode::EdgeDuplicate => "EDGE_DUPLICATE",
            ViolationCode::EdgeEndpoint => "EDGE_ENDPOINT",
            ViolationCode::CrossingEdges => "CROSSING_EDGES",
            ViolationCode::DuplicateSessionId => "DUPLICATE_SESSION_ID",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    pub code: ViolationCode,
    /// Human-readable position, e.g. `session 's1' utterance 3`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(
            f,
            "{sev} {}: {} ({})",
            self.code.as_str(),
            self.message,
            self.location
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(
        &mut self,
        severity: Severity,
        code: ViolationCode,
        location: String,
        message: String,
    ) {
        self.violations.push(Violation {
            severity,
            code,
            location,
            message,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of one session. Pure: identical input
/// yields an identical report.
pub fn validate_session(
    session: &Session,
    strictness: Strictness,
    vocabs: &LabelVocabularies,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let sid = &session.session_id;
    let n = session.utterances.len();
    let tolerant = |s: Strictness| match s {
        Strictness::Strict => Severity::Error,
        Strictness::Lenient => Severity::Warning,
    };

    for (pos, u) in session.utterances.iter().enumerate() {
        let loc = format!("session '{sid}' utterance {pos}");
        if u.index != pos {
            report.push(
                Severity::Error,
                ViolationCode::IndexSequence,
                loc.clone(),
                format!("index {} at position {pos}; expected consecutive 0..{n}", u.index),
            );
        }
        if u.talk_move.role() != u.speaker {
            report.push(
                Severity::Error,
                ViolationCode::RoleMoveMismatch,
                loc.clone(),
                format!(
                    "talk move {} is not legal on a {} utterance",
                    u.talk_move, u.speaker
                ),
            );
        }
        if !vocabs.dialogue_acts.contains(u.dialogue_act.as_str()) {
            report.push(
                tolerant(strictness),
                ViolationCode::UnknownLabel,
                loc.clone(),
                format!("dialogue act '{}' is not in the loaded vocabulary", u.dialogue_act),
            );
        }
    }

    let mut seen = BTreeSet::new();
    for e in &session.edges {
        let loc = format!("session '{sid}' edge {}->{}", e.source, e.target);
        if e.source >= n || e.target >= n {
            report.push(
                Severity::Error,
                ViolationCode::EdgeEndpoint,
                loc.clone(),
                format!("edge endpoint outside 0..{n}"),
            );
        }
        if e.source == e.target {
            report.push(
                Severity::Error,
                ViolationCode::EdgeSelfLoop,
                loc.clone(),
                "self-loop".to_string(),
            );
        } else if e.source > e.target {
            report.push(
                Severity::Error,
                ViolationCode::EdgeBackward,
                loc.clone(),
                format!("source {} is after target {}", e.source, e.target),
            );
        }
        if !seen.insert((e.source, e.target, e.relation.clone())) {
            report.push(
                Severity::Error,
                ViolationCode::EdgeDuplicate,
                loc.clone(),
                format!("duplicate ({}, {}, {})", e.source, e.target, e.relation),
            );
        }
        if !vocabs.relations.contains(e.relation.as_str()) {
            report.push(
                tolerant(strictness),
                ViolationCode::UnknownLabel,
                loc.clone(),
                format!("relation '{}' is not in the loaded vocabulary", e.relation),
            );
        }
    }

    // Crossing pairs a->b, c->d with a < c < b < d. Edge sets are small at
    // session scale, so the quadratic sweep is fine.
    for (i, e1) in session.edges.iter().enumerate() {
        for e2 in &session.edges[i + 1..] {
            let (x, y) = (e1.source, e1.target);
            let (p, q) = (e2.source, e2.target);
            let crossing = (x < p && p < y && y < q) || (p < x && x < q && q < y);
            if crossing {
                report.push(
                    tolerant(strictness),
                    ViolationCode::CrossingEdges,
                    format!(
                        "session '{sid}' edges {}->{} and {}->{}",
                        e1.source, e1.target, e2.source, e2.target
                    ),
                    "edges cross".to_string(),
                );
            }
        }
    }

    report
}

/// Validates every session plus corpus-level invariants.
pub fn validate_corpus(
    corpus: &Corpus,
    strictness: Strictness,
    vocabs: &LabelVocabularies,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut ids = BTreeSet::new();
    for session in &corpus.sessions {
        if !ids.insert(session.session_id.as_str()) {
            report.push(
                Severity::Error,
                ViolationCode::DuplicateSessionId,
                format!("session '{}'", session.session_id),
                "session_id repeats within the corpus".to_string(),
            );
        }
        report.extend(validate_session(session, strictness, vocabs));
    }
    report
}

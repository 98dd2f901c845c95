//! JSONL corpus format: one session object per line.
//!
//! Schema (fixed key order):
//! `{"session_id": str, "domain": "teaching"|"tutoring"|"other",
//!   "utterances": [{"idx": int, "speaker": "teacher"|"student",
//!                   "speaker_id": str?, "text": str, "talk_move": str,
//!                   "dialogue_act": str}],
//!   "discourse_edges": [{"source": int, "target": int, "relation": str}]}`

use serde::{Deserialize, Serialize};

use crate::corpus::{
    Corpus, DiscourseEdge, DomainTag, RelationLabel, Session, SpeakerRole, Utterance,
    ValidationReport,
};

use super::{IngestError, ParseContext};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionRecord {
    session_id: String,
    domain: String,
    utterances: Vec<UtteranceRecord>,
    discourse_edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UtteranceRecord {
    idx: u64,
    speaker: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speaker_id: Option<String>,
    text: String,
    talk_move: String,
    dialogue_act: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    source: u64,
    target: u64,
    relation: String,
}

fn schema_error(ctx: &ParseContext, line: u64, column: u64, reason: impl Into<String>) -> IngestError {
    IngestError::Schema {
        path: ctx.path.clone(),
        line,
        column,
        reason: reason.into(),
    }
}

/// Builds a `Session` from one decoded record, enforcing the schema-level
/// invariants (consecutive indices, known enums) and resolving labels per
/// the context's policy.
fn build_session(
    record: SessionRecord,
    line: u64,
    ctx: &ParseContext,
    report: &mut ValidationReport,
) -> Result<Session, IngestError> {
    let domain = DomainTag::parse(record.domain.trim())
        .ok_or_else(|| schema_error(ctx, line, 0, format!("unknown domain '{}'", record.domain)))?;
    let sid = record.session_id;

    let mut utterances = Vec::with_capacity(record.utterances.len());
    for (pos, u) in record.utterances.into_iter().enumerate() {
        let idx = usize::try_from(u.idx)
            .map_err(|_| schema_error(ctx, line, 0, format!("index {} out of range", u.idx)))?;
        if idx != pos {
            let reason = if utterances.iter().any(|p: &Utterance| p.index == idx) {
                format!("duplicate utterance index {idx} in session '{sid}'")
            } else {
                format!("utterance index {idx} at position {pos} in session '{sid}'; indices must be consecutive from 0")
            };
            return Err(schema_error(ctx, line, 0, reason));
        }
        let speaker = SpeakerRole::parse(u.speaker.trim())
            .ok_or_else(|| schema_error(ctx, line, 0, format!("unknown speaker '{}'", u.speaker)))?;
        let location = format!("session '{sid}' utterance {idx}");
        let talk_move =
            ctx.resolve_talk_move(u.talk_move.trim(), speaker, line, &location, report)?;
        let dialogue_act = ctx.resolve_dialogue_act(u.dialogue_act.trim(), line, &location, report)?;
        let speaker_id = u.speaker_id.filter(|s| !s.is_empty());
        utterances.push(Utterance {
            index: idx,
            speaker,
            speaker_id,
            text: u.text,
            talk_move,
            dialogue_act,
        });
    }

    let mut edges = Vec::with_capacity(record.discourse_edges.len());
    for e in record.discourse_edges {
        let source = usize::try_from(e.source)
            .map_err(|_| schema_error(ctx, line, 0, format!("edge source {} out of range", e.source)))?;
        let target = usize::try_from(e.target)
            .map_err(|_| schema_error(ctx, line, 0, format!("edge target {} out of range", e.target)))?;
        let relation = e.relation.trim().to_string();
        ctx.check_relation(&relation, line)?;
        edges.push(DiscourseEdge {
            source,
            target,
            relation: RelationLabel::new(relation),
        });
    }

    Ok(Session::new(sid, domain, utterances, edges))
}

/// Parses one JSONL stream. Total over arbitrary bytes: every failure mode
/// is a structured error.
pub(crate) fn parse_sessions(
    bytes: &[u8],
    ctx: &ParseContext,
) -> Result<(Vec<Session>, ValidationReport), IngestError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| schema_error(ctx, 0, 0, format!("input is not valid UTF-8: {e}")))?;
    let mut sessions = Vec::new();
    let mut report = ValidationReport::default();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw_line.trim().is_empty() {
            continue;
        }
        let record: SessionRecord = serde_json::from_str(raw_line).map_err(|e| {
            schema_error(ctx, line, e.column() as u64, e.to_string())
        })?;
        sessions.push(build_session(record, line, ctx, &mut report)?);
    }
    Ok((sessions, report))
}

/// Parses an in-memory JSONL corpus with an explicit id. Used by tests and
/// by anything that already has the bytes.
pub fn parse_jsonl_bytes(
    bytes: &[u8],
    corpus_id: &str,
    strictness: crate::corpus::Strictness,
    vocabs: &crate::corpus::LabelVocabularies,
) -> Result<(Corpus, ValidationReport), IngestError> {
    let policy = match strictness {
        crate::corpus::Strictness::Strict => super::LabelPolicy::Abort,
        crate::corpus::Strictness::Lenient => {
            super::LabelPolicy::Collect(crate::corpus::Severity::Warning)
        }
    };
    let ctx = ParseContext {
        vocabs,
        policy,
        path: "<memory>".to_string(),
    };
    let (sessions, mut report) = parse_sessions(bytes, &ctx)?;
    let corpus = Corpus::new(corpus_id, sessions);
    report.extend(crate::corpus::validate_corpus(&corpus, strictness, vocabs));
    if strictness == crate::corpus::Strictness::Strict && report.has_errors() {
        return Err(IngestError::InvalidCorpus(report));
    }
    Ok((corpus, report))
}

fn to_record(session: &Session) -> SessionRecord {
    let mut edges = session.edges.clone();
    edges.sort();
    SessionRecord {
        session_id: session.session_id.clone(),
        domain: session.domain.as_str().to_string(),
        utterances: session
            .utterances
            .iter()
            .map(|u| UtteranceRecord {
                idx: u.index as u64,
                speaker: u.speaker.as_str().to_string(),
                speaker_id: u.speaker_id.clone(),
                text: u.text.clone(),
                talk_move: u.talk_move.label().to_string(),
                dialogue_act: u.dialogue_act.as_str().to_string(),
            })
            .collect(),
        discourse_edges: edges
            .iter()
            .map(|e| EdgeRecord {
                source: e.source as u64,
                target: e.target as u64,
                relation: e.relation.as_str().to_string(),
            })
            .collect(),
    }
}

/// Canonical JSONL bytes: one compact JSON object per session, LF endings.
pub fn serialize_jsonl(corpus: &Corpus) -> Vec<u8> {
    let mut out = Vec::new();
    for session in &corpus.sessions {
        serde_json::to_writer(&mut out, &to_record(session)).expect("session serializes");
        out.push(b'\n');
    }
    out
}

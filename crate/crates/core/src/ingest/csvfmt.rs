//! CSV corpus format: three RFC-4180 files.
//!
//! * `sessions.csv`   — `session_id,domain`; defines session order.
//! * `utterances.csv` — `session_id,idx,speaker,speaker_id,text,talk_move,dialogue_act`
//! * `edges.csv`      — `session_id,source,target,relation`
//!
//! The session manifest exists so that session order, domain tags, and
//! utterance-free sessions survive a round trip; the other two files are
//! the spreadsheet-friendly row dumps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    Corpus, DiscourseEdge, DomainTag, RelationLabel, Session, SpeakerRole, Utterance,
    ValidationReport,
};

use super::{IngestError, ParseContext};

const SESSIONS_HEADER: [&str; 2] = ["session_id", "domain"];
const UTTERANCES_HEADER: [&str; 7] = [
    "session_id",
    "idx",
    "speaker",
    "speaker_id",
    "text",
    "talk_move",
    "dialogue_act",
];
const EDGES_HEADER: [&str; 4] = ["session_id", "source", "target", "relation"];

#[derive(Serialize, Deserialize)]
struct SessionRow {
    session_id: String,
    domain: String,
}

#[derive(Serialize, Deserialize)]
struct UtteranceRow {
    session_id: String,
    idx: u64,
    speaker: String,
    speaker_id: String,
    text: String,
    talk_move: String,
    dialogue_act: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeRow {
    session_id: String,
    source: u64,
    target: u64,
    relation: String,
}

/// The three serialized streams, in manifest/utterances/edges order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CsvStreams {
    pub sessions: Vec<u8>,
    pub utterances: Vec<u8>,
    pub edges: Vec<u8>,
}

fn schema_error(ctx: &ParseContext, line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::Schema {
        path: ctx.path.clone(),
        line,
        column: 0,
        reason: reason.into(),
    }
}

fn line_of(err: &csv::Error) -> u64 {
    err.position().map(|p| p.line()).unwrap_or(0)
}

/// Reads all rows of one CSV stream into `(line, row)` pairs after checking
/// the header. Zero-byte streams parse as empty.
fn read_rows<T: for<'de> Deserialize<'de>>(
    bytes: &[u8],
    expected_header: &[&str],
    ctx: &ParseContext,
) -> Result<Vec<(u64, T)>, IngestError> {
    if bytes.is_empty() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new().from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(|e| schema_error(ctx, line_of(&e), e.to_string()))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected_header {
        return Err(schema_error(
            ctx,
            1,
            format!("header {got:?} does not match expected {expected_header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| schema_error(ctx, line_of(&e), e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| schema_error(ctx, line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

pub(crate) fn parse_sessions(
    sessions_bytes: &[u8],
    utterances_bytes: &[u8],
    edges_bytes: &[u8],
    ctx: &ParseContext,
) -> Result<(Vec<Session>, ValidationReport), IngestError> {
    let mut report = ValidationReport::default();

    let session_rows: Vec<(u64, SessionRow)> = read_rows(sessions_bytes, &SESSIONS_HEADER, ctx)?;
    let mut order: Vec<(String, DomainTag)> = Vec::with_capacity(session_rows.len());
    let mut buckets: BTreeMap<String, (Vec<(u64, UtteranceRow)>, Vec<(u64, EdgeRow)>)> =
        BTreeMap::new();
    for (line, row) in session_rows {
        let domain = DomainTag::parse(row.domain.trim())
            .ok_or_else(|| schema_error(ctx, line, format!("unknown domain '{}'", row.domain)))?;
        if buckets.contains_key(&row.session_id) {
            return Err(schema_error(
                ctx,
                line,
                format!("duplicate session_id '{}' in sessions.csv", row.session_id),
            ));
        }
        buckets.insert(row.session_id.clone(), (Vec::new(), Vec::new()));
        order.push((row.session_id, domain));
    }

    for (line, row) in read_rows::<UtteranceRow>(utterances_bytes, &UTTERANCES_HEADER, ctx)? {
        match buckets.get_mut(&row.session_id) {
            Some((utts, _)) => utts.push((line, row)),
            None => {
                return Err(schema_error(
                    ctx,
                    line,
                    format!("utterance references unknown session_id '{}'", row.session_id),
                ))
            }
        }
    }
    for (line, row) in read_rows::<EdgeRow>(edges_bytes, &EDGES_HEADER, ctx)? {
        match buckets.get_mut(&row.session_id) {
            Some((_, edges)) => edges.push((line, row)),
            None => {
                return Err(schema_error(
                    ctx,
                    line,
                    format!("edge references unknown session_id '{}'", row.session_id),
                ))
            }
        }
    }

    let mut sessions = Vec::with_capacity(order.len());
    for (sid, domain) in order {
        let (mut utt_rows, edge_rows) = buckets.remove(&sid).expect("bucket exists");
        utt_rows.sort_by_key(|(_, r)| r.idx);
        let mut utterances = Vec::with_capacity(utt_rows.len());
        for (pos, (line, row)) in utt_rows.into_iter().enumerate() {
            let idx = usize::try_from(row.idx)
                .map_err(|_| schema_error(ctx, line, format!("index {} out of range", row.idx)))?;
            if idx != pos {
                let reason = if idx < pos {
                    format!("duplicate utterance index {idx} in session '{sid}'")
                } else {
                    format!("utterance indices of session '{sid}' are not consecutive: expected {pos}, found {idx}")
                };
                return Err(schema_error(ctx, line, reason));
            }
            let speaker = SpeakerRole::parse(row.speaker.trim()).ok_or_else(|| {
                schema_error(ctx, line, format!("unknown speaker '{}'", row.speaker))
            })?;
            let location = format!("session '{sid}' utterance {idx}");
            let talk_move =
                ctx.resolve_talk_move(row.talk_move.trim(), speaker, line, &location, &mut report)?;
            let dialogue_act =
                ctx.resolve_dialogue_act(row.dialogue_act.trim(), line, &location, &mut report)?;
            let speaker_id = if row.speaker_id.is_empty() {
                None
            } else {
                Some(row.speaker_id)
            };
            utterances.push(Utterance {
                index: idx,
                speaker,
                speaker_id,
                text: row.text,
                talk_move,
                dialogue_act,
            });
        }

        let mut edges = Vec::with_capacity(edge_rows.len());
        for (line, row) in edge_rows {
            let source = usize::try_from(row.source).map_err(|_| {
                schema_error(ctx, line, format!("edge source {} out of range", row.source))
            })?;
            let target = usize::try_from(row.target).map_err(|_| {
                schema_error(ctx, line, format!("edge target {} out of range", row.target))
            })?;
            let relation = row.relation.trim().to_string();
            ctx.check_relation(&relation, line)?;
            edges.push(DiscourseEdge {
                source,
                target,
                relation: RelationLabel::new(relation),
            });
        }
        sessions.push(Session::new(sid, domain, utterances, edges));
    }
    Ok((sessions, report))
}

/// Parses an in-memory CSV corpus with an explicit id.
pub fn parse_csv_bytes(
    streams: &CsvStreams,
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
    let (sessions, mut report) =
        parse_sessions(&streams.sessions, &streams.utterances, &streams.edges, &ctx)?;
    let corpus = Corpus::new(corpus_id, sessions);
    report.extend(crate::corpus::validate_corpus(&corpus, strictness, vocabs));
    if strictness == crate::corpus::Strictness::Strict && report.has_errors() {
        return Err(IngestError::InvalidCorpus(report));
    }
    Ok((corpus, report))
}

fn writer(buf: Vec<u8>) -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

/// Canonical CSV bytes: headers always present, sessions in corpus order,
/// utterances by index, edges sorted.
pub fn serialize_csv(corpus: &Corpus) -> CsvStreams {
    let mut sessions_w = writer(Vec::new());
    let mut utterances_w = writer(Vec::new());
    let mut edges_w = writer(Vec::new());

    // serde-derived headers are only written with the first row, so emit
    // them explicitly to keep empty corpora canonical.
    sessions_w.write_record(SESSIONS_HEADER).expect("header");
    utterances_w.write_record(UTTERANCES_HEADER).expect("header");
    edges_w.write_record(EDGES_HEADER).expect("header");

    for session in &corpus.sessions {
        sessions_w
            .write_record([session.session_id.as_str(), session.domain.as_str()])
            .expect("session row");
        for u in &session.utterances {
            utterances_w
                .write_record([
                    session.session_id.as_str(),
                    &u.index.to_string(),
                    u.speaker.as_str(),
                    u.speaker_id.as_deref().unwrap_or(""),
                    &u.text,
                    u.talk_move.label(),
                    u.dialogue_act.as_str(),
                ])
                .expect("utterance row");
        }
        let mut edges = session.edges.clone();
        edges.sort();
        for e in edges {
            edges_w
                .write_record([
                    session.session_id.as_str(),
                    &e.source.to_string(),
                    &e.target.to_string(),
                    e.relation.as_str(),
                ])
                .expect("edge row");
        }
    }

    CsvStreams {
        sessions: sessions_w.into_inner().expect("flush"),
        utterances: utterances_w.into_inner().expect("flush"),
        edges: edges_w.into_inner().expect("flush"),
    }
}

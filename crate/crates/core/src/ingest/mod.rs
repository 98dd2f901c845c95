//! Corpus ingestion and serialization in two canonical file formats.
//!
//! Both formats round-trip: `parse(serialize(c))` reconstructs `c` exactly,
//! and serialization is byte-identical across runs and platforms (LF line
//! endings, fixed key/column order, canonical edge sort).

mod csvfmt;
mod jsonl;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::corpus::{
    ConfigError, Corpus, LabelVocabularies, Severity, Strictness, ValidationReport,
    ViolationCode,
};

pub use csvfmt::{parse_csv_bytes, serialize_csv, CsvStreams};
pub use jsonl::{parse_jsonl_bytes, serialize_jsonl};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SourceFormat {
    Jsonl,
    Csv,
}

impl SourceFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "jsonl" => Some(SourceFormat::Jsonl),
            "csv" => Some(SourceFormat::Csv),
            _ => None,
        }
    }
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Jsonl => "jsonl",
            SourceFormat::Csv => "csv",
        })
    }
}

/// Where a corpus comes from. JSONL sources list one or more session files;
/// CSV sources list exactly three files: `sessions.csv`, `utterances.csv`,
/// `edges.csv`.
#[derive(Clone, Debug)]
pub struct CorpusSource {
    pub format: SourceFormat,
    pub paths: Vec<PathBuf>,
    pub strictness: Strictness,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("IO_ERROR: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("SCHEMA_ERROR: {path}:{line}:{column}: {reason}")]
    Schema {
        path: String,
        line: u64,
        column: u64,
        reason: String,
    },
    #[error("LABEL_ERROR: {path}:{line}: unknown label '{label}'")]
    Label {
        path: String,
        line: u64,
        label: String,
    },
    #[error("corpus failed strict validation with {} error(s)", .0.errors().count())]
    InvalidCorpus(ValidationReport),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// How unrecognized labels are handled during a parse.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub(crate) enum LabelPolicy {
    /// Fail fast with `LABEL_ERROR` (strict ingestion).
    Abort,
    /// Substitute a fallback and record a violation at this severity.
    Collect(Severity),
}

pub(crate) struct ParseContext<'a> {
    pub vocabs: &'a LabelVocabularies,
    pub policy: LabelPolicy,
    pub path: String,
}

impl ParseContext<'_> {
    /// Resolves a raw talk-move string. Unknown labels fall back to the
    /// role's `None` catch-all: an unrecognized move is by definition not
    /// one of the defined moves.
    pub(crate) fn resolve_talk_move(
        &self,
        raw: &str,
        speaker: crate::corpus::SpeakerRole,
        line: u64,
        location: &str,
        report: &mut ValidationReport,
    ) -> Result<crate::corpus::TalkMove, IngestError> {
        match crate::corpus::TalkMove::parse(raw) {
            Some(m) => Ok(m),
            None => match self.policy {
                LabelPolicy::Abort => Err(IngestError::Label {
                    path: self.path.clone(),
                    line,
                    label: raw.to_string(),
                }),
                LabelPolicy::Collect(severity) => {
                    let fallback = crate::corpus::TalkMove::none_for(speaker);
                    report.push(
                        severity,
                        ViolationCode::UnknownLabel,
                        location.to_string(),
                        format!("talk move '{raw}' is not recognized; recorded as {fallback}"),
                    );
                    Ok(fallback)
                }
            },
        }
    }

    /// Resolves a raw dialogue-act string against the loaded vocabulary.
    /// Unknown acts map to the vocabulary's `Other` label when one exists.
    pub(crate) fn resolve_dialogue_act(
        &self,
        raw: &str,
        line: u64,
        location: &str,
        report: &mut ValidationReport,
    ) -> Result<crate::corpus::DialogueAct, IngestError> {
        if self.vocabs.dialogue_acts.contains(raw) {
            return Ok(crate::corpus::DialogueAct::new(raw));
        }
        match self.policy {
            LabelPolicy::Abort => Err(IngestError::Label {
                path: self.path.clone(),
                line,
                label: raw.to_string(),
            }),
            LabelPolicy::Collect(severity) => {
                let (mapped, note) = match self.vocabs.other_act() {
                    Some(other) => (other.to_string(), format!("recorded as '{other}'")),
                    None => (raw.to_string(), "kept as-is".to_string()),
                };
                report.push(
                    severity,
                    ViolationCode::UnknownLabel,
                    location.to_string(),
                    format!("dialogue act '{raw}' is not in the loaded vocabulary; {note}"),
                );
                Ok(crate::corpus::DialogueAct::new(mapped))
            }
        }
    }

    /// Relations are kept verbatim; strict mode rejects unknown ones here
    /// and structural validation grades them in lenient mode.
    pub(crate) fn check_relation(&self, raw: &str, line: u64) -> Result<(), IngestError> {
        if self.vocabs.relations.contains(raw) {
            return Ok(());
        }
        match self.policy {
            LabelPolicy::Abort => Err(IngestError::Label {
                path: self.path.clone(),
                line,
                label: raw.to_string(),
            }),
            LabelPolicy::Collect(_) => Ok(()),
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, IngestError> {
    std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Derives a stable corpus id from the source paths: sorted file stems
/// joined with `+`, so the id does not depend on argument order.
pub fn corpus_id_from_paths(paths: &[PathBuf]) -> String {
    let mut stems: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    stems.sort();
    stems.dedup();
    stems.join("+")
}

/// Parses a corpus per the source's strictness contract: strict mode fails
/// on the first error and never returns a partial corpus; lenient mode
/// repairs what it can and reports everything it saw.
pub fn parse_corpus(
    source: &CorpusSource,
    vocabs: &LabelVocabularies,
) -> Result<(Corpus, ValidationReport), IngestError> {
    let policy = match source.strictness {
        Strictness::Strict => LabelPolicy::Abort,
        Strictness::Lenient => LabelPolicy::Collect(Severity::Warning),
    };
    let (corpus, mut report) = parse_with_policy(source, vocabs, policy)?;
    let validation = crate::corpus::validate_corpus(&corpus, source.strictness, vocabs);
    report.extend(validation);
    if source.strictness == Strictness::Strict && report.has_errors() {
        return Err(IngestError::InvalidCorpus(report));
    }
    Ok((corpus, report))
}

/// Collecting parse for the `validate` command: never aborts on label or
/// structural-invariant problems, grading them at the requested strictness
/// instead. Schema and IO errors still fail, since no corpus can be built.
pub fn diagnose_corpus(
    source: &CorpusSource,
    vocabs: &LabelVocabularies,
) -> Result<(Corpus, ValidationReport), IngestError> {
    let severity = match source.strictness {
        Strictness::Strict => Severity::Error,
        Strictness::Lenient => Severity::Warning,
    };
    let (corpus, mut report) = parse_with_policy(source, vocabs, LabelPolicy::Collect(severity))?;
    report.extend(crate::corpus::validate_corpus(
        &corpus,
        source.strictness,
        vocabs,
    ));
    Ok((corpus, report))
}

fn parse_with_policy(
    source: &CorpusSource,
    vocabs: &LabelVocabularies,
    policy: LabelPolicy,
) -> Result<(Corpus, ValidationReport), IngestError> {
    if source.paths.is_empty() {
        return Err(ConfigError::Invalid("at least one input path is required".into()).into());
    }
    let corpus_id = corpus_id_from_paths(&source.paths);
    match source.format {
        SourceFormat::Jsonl => {
            use rayon::prelude::*;
            // One worker per file; merged in declared path order.
            let parts: Vec<Result<(Vec<crate::corpus::Session>, ValidationReport), IngestError>> =
                source
                    .paths
                    .par_iter()
                    .map(|path| {
                        let bytes = read_file(path)?;
                        let ctx = ParseContext {
                            vocabs,
                            policy,
                            path: path.display().to_string(),
                        };
                        jsonl::parse_sessions(&bytes, &ctx)
                    })
                    .collect();
            let mut sessions = Vec::new();
            let mut report = ValidationReport::default();
            for part in parts {
                let (mut s, r) = part?;
                sessions.append(&mut s);
                report.extend(r);
            }
            Ok((Corpus::new(corpus_id, sessions), report))
        }
        SourceFormat::Csv => {
            if source.paths.len() != 3 {
                return Err(ConfigError::Invalid(format!(
                    "csv sources take exactly three paths (sessions.csv, utterances.csv, edges.csv); got {}",
                    source.paths.len()
                ))
                .into());
            }
            let sessions_bytes = read_file(&source.paths[0])?;
            let utterances_bytes = read_file(&source.paths[1])?;
            let edges_bytes = read_file(&source.paths[2])?;
            let ctx = ParseContext {
                vocabs,
                policy,
                path: source.paths[1].display().to_string(),
            };
            let (sessions, report) = csvfmt::parse_sessions(
                &sessions_bytes,
                &utterances_bytes,
                &edges_bytes,
                &ctx,
            )?;
            Ok((Corpus::new(corpus_id, sessions), report))
        }
    }
}

/// Canonical serialized form of a corpus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SerializedCorpus {
    Jsonl(Vec<u8>),
    Csv(CsvStreams),
}

/// Serializes to the canonical byte form: sessions in corpus order,
/// utterances by index, edges sorted by `(source, target, relation)`.
pub fn serialize_corpus(corpus: &Corpus, format: SourceFormat) -> SerializedCorpus {
    match format {
        SourceFormat::Jsonl => SerializedCorpus::Jsonl(serialize_jsonl(corpus)),
        SourceFormat::Csv => SerializedCorpus::Csv(serialize_csv(corpus)),
    }
}

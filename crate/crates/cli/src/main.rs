//! `discourse-lens`: multi-view dialogue analytics from the command line.
//!
//! Exit codes: 0 success, 1 validation/data failure, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use discourse_lens::analysis::{
    bigram_relation_distribution, extract_instances, filter_transitions, gap_matrix,
    lexical_marker_share, talk_move_distribution, talkmove_to_none_da_distribution,
    transition_counts, triple_none_da_distribution, BigramPattern, Distribution, ExtractPattern,
    MarkerPosition,
};
use discourse_lens::corpus::{DialogueAct, Strictness, ValidationReport};
use discourse_lens::ingest::{diagnose_corpus, parse_corpus, CorpusSource, SourceFormat};
use discourse_lens::report::{
    compare, emit_dot, emit_heatmap_csv, fixed4, full_report, to_canonical_json, AnalysisConfig,
    AnalysisReport, DotGrouping,
};
use discourse_lens::{
    with_threads, Corpus, LabelVocabularies, SpeakerRole, TalkMove, Vocabulary,
};

#[derive(Parser)]
#[command(
    name = "discourse-lens",
    version,
    about = "Talk-move, dialogue-act, and discourse-relation analytics for annotated transcripts"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Worker threads for the analysis pool (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Strict mode: reject tolerated violations instead of downgrading them
    #[arg(long, global = true)]
    strict: bool,
    /// Talk-move vocabulary file (one label per line; must match the built-in set)
    #[arg(long, global = true, value_name = "FILE")]
    talkmove_vocab: Option<PathBuf>,
    /// Dialogue-act vocabulary file (one label per line)
    #[arg(long, global = true, value_name = "FILE")]
    da_vocab: Option<PathBuf>,
    /// Discourse-relation vocabulary file (one label per line)
    #[arg(long, global = true, value_name = "FILE")]
    relation_vocab: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

impl From<FormatArg> for SourceFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => SourceFormat::Jsonl,
            FormatArg::Csv => SourceFormat::Csv,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input format; csv sources take sessions.csv utterances.csv edges.csv
    #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
    format: FormatArg,
    /// Input files
    #[arg(required = true, value_name = "PATHS")]
    paths: Vec<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ViewArg {
    Talkmove,
    Da,
    Crosstab,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum RoleArg {
    Teacher,
    Student,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum PositionArg {
    Leading,
    Any,
}

#[derive(Subcommand)]
enum Command {
    /// Parse inputs and report every structural violation
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Unigram distributions and cross-tabulations
    Unigram {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        view: ViewArg,
        /// Restrict talk-move counting to one role
        #[arg(long, value_enum)]
        role: Option<RoleArg>,
        /// Drop continuation-tagged utterances from the cross-tab
        #[arg(long)]
        exclude_continuation: bool,
        /// Also report the top-k labels and their cumulative coverage
        #[arg(long, value_name = "N")]
        top_k: Option<usize>,
        /// Coverage target checked against the top-k share sum
        #[arg(long, value_name = "F", default_value_t = 0.5)]
        coverage: f64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Bigram transition matrix and threshold-filtered edges
    Transitions {
        #[command(flatten)]
        input: InputArgs,
        /// Delete None-labeled utterances before pairing
        #[arg(long)]
        collapse_none: bool,
        /// Minimum P(to | from) for an edge to be kept
        #[arg(long, value_name = "F", default_value_t = 0.10)]
        threshold: f64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Intervening-T-None gap statistics for all non-None pairs
    Gaps {
        #[command(flatten)]
        input: InputArgs,
        /// Gap-length shares below this are excluded
        #[arg(long, value_name = "F", default_value_t = 0.05)]
        min_share: f64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Multi-view joins for one ordered talk-move pair
    Multiview {
        #[command(flatten)]
        input: InputArgs,
        /// Ordered pair, e.g. S-MClaim,T-PRA
        #[arg(long, value_name = "FROM,TO")]
        pair: String,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Lexical marker share over a bigram population
    Lexical {
        #[command(flatten)]
        input: InputArgs,
        /// Ordered pair, e.g. S-ProEvi,S-ProEvi
        #[arg(long, value_name = "FROM,TO")]
        pair: String,
        /// Markers to look for (comma-separated or repeated)
        #[arg(long, value_delimiter = ',', required = true)]
        markers: Vec<String>,
        #[arg(long, value_enum, default_value_t = PositionArg::Leading)]
        position: PositionArg,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Extract annotated excerpts matching a pattern
    Examples {
        #[command(flatten)]
        input: InputArgs,
        /// bigram:FROM,TO | triple:FROM,TO | move_with_act:MOVE,ACT
        #[arg(long, value_name = "PATTERN")]
        pattern: String,
        #[arg(long, value_name = "N", default_value_t = 10)]
        limit: usize,
        /// Context utterances on each side of a match
        #[arg(long, value_name = "N", default_value_t = 0)]
        context: usize,
        /// Output path (stdout when omitted)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Full canonical analysis report, plus optional DOT/heatmap renders
    Report {
        #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
        format: FormatArg,
        /// Input files
        #[arg(long = "in", value_name = "PATHS", required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Directory for transition diagrams (all / to_teacher / to_student)
        #[arg(long, value_name = "DIR")]
        dot_dir: Option<PathBuf>,
        /// Directory for heatmap CSV tables
        #[arg(long, value_name = "DIR")]
        heatmaps_dir: Option<PathBuf>,
        #[arg(long, value_name = "F")]
        transition_threshold: Option<f64>,
        #[arg(long, value_name = "F")]
        gap_min_share: Option<f64>,
        #[arg(long, value_name = "N")]
        topk_talkmove_das: Option<usize>,
        #[arg(long, value_name = "N")]
        topk_none_das: Option<usize>,
        #[arg(long, value_name = "F")]
        coverage_talkmove: Option<f64>,
        #[arg(long, value_name = "F")]
        coverage_none: Option<f64>,
        #[arg(long, value_name = "F")]
        da_display_min_share: Option<f64>,
        #[arg(long, value_name = "BOOL")]
        exclude_continuation_in_crosstab: Option<bool>,
        #[arg(long, value_delimiter = ',')]
        markers: Option<Vec<String>>,
    },
    /// Aligned scalar deltas between two reports
    Compare {
        /// Baseline report JSON
        report_a: PathBuf,
        /// Comparison report JSON
        report_b: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// Bad arguments: exit 2.
    Usage(String),
    /// Data or IO failure: exit 1.
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn load_vocabulary(path: &Option<PathBuf>) -> Result<Option<Vocabulary>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading vocabulary {}", p.display()))?;
            let vocab = Vocabulary::from_lines(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            Ok(Some(vocab))
        }
    }
}

fn load_vocabs(global: &GlobalArgs) -> Result<LabelVocabularies, CliError> {
    LabelVocabularies::with_overrides(
        load_vocabulary(&global.talkmove_vocab)?,
        load_vocabulary(&global.da_vocab)?,
        load_vocabulary(&global.relation_vocab)?,
    )
    .map_err(|e| CliError::Usage(e.to_string()))
}

fn strictness(global: &GlobalArgs) -> Strictness {
    if global.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    }
}

fn load_corpus(
    format: FormatArg,
    paths: &[PathBuf],
    global: &GlobalArgs,
    vocabs: &LabelVocabularies,
) -> Result<Corpus, CliError> {
    let source = CorpusSource {
        format: format.into(),
        paths: paths.to_vec(),
        strictness: strictness(global),
    };
    let (corpus, report) = parse_corpus(&source, vocabs)
        .map_err(|e| CliError::Failure(anyhow::anyhow!(e.to_string())))?;
    for violation in &report.violations {
        eprintln!("{violation}");
    }
    Ok(corpus)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_or_stdout(path: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_output(p, bytes),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .context("writing to stdout")?;
            Ok(())
        }
    }
}

fn parse_talk_move(s: &str) -> Result<TalkMove, CliError> {
    TalkMove::parse(s.trim())
        .ok_or_else(|| CliError::Usage(format!("unknown talk move '{}'", s.trim())))
}

fn parse_pair(s: &str) -> Result<(TalkMove, TalkMove), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("pair '{s}' must be FROM,TO")))?;
    Ok((parse_talk_move(a)?, parse_talk_move(b)?))
}

fn parse_pattern(s: &str) -> Result<ExtractPattern, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("pattern '{s}' must be KIND:ARGS")))?;
    match kind {
        "bigram" => {
            let (j, k) = parse_pair(rest)?;
            Ok(ExtractPattern::Bigram(j, k))
        }
        "triple" => {
            let (j, k) = parse_pair(rest)?;
            Ok(ExtractPattern::Triple(j, k))
        }
        "move_with_act" => {
            let (m, act) = rest
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("pattern '{s}' must name MOVE,ACT")))?;
            Ok(ExtractPattern::MoveWithAct(
                parse_talk_move(m)?,
                DialogueAct::new(act.trim()),
            ))
        }
        other => Err(CliError::Usage(format!(
            "unknown pattern kind '{other}'; expected bigram, triple, or move_with_act"
        ))),
    }
}

/// JSON-friendly projection of a distribution.
fn distribution_json(d: &Distribution<f64>) -> serde_json::Value {
    serde_json::json!({
        "labels": d.labels(),
        "counts": d.counts(),
        "shares": d.shares(),
        "total": d.total(),
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let vocabs = load_vocabs(&cli.global)?;
    match cli.command {
        Command::Validate { input } => {
            let source = CorpusSource {
                format: input.format.into(),
                paths: input.paths,
                strictness: strictness(&cli.global),
            };
            let (corpus, report) = diagnose_corpus(&source, &vocabs)
                .map_err(|e| CliError::Failure(anyhow::anyhow!(e.to_string())))?;
            print_validation(&corpus, &report);
            if report.has_errors() {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Unigram {
            input,
            view,
            role,
            exclude_continuation,
            top_k,
            coverage,
            out,
        } => {
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let role = role.map(|r| match r {
                RoleArg::Teacher => SpeakerRole::Teacher,
                RoleArg::Student => SpeakerRole::Student,
            });
            let value = with_threads(cli.global.threads, || {
                unigram_json(&corpus, view, role, exclude_continuation, top_k, coverage)
            });
            write_output(&out, &to_canonical_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transitions {
            input,
            collapse_none,
            threshold,
            out,
        } => {
            if !(0.0..=1.0).contains(&threshold) {
                return Err(CliError::Usage(format!(
                    "threshold must be in [0, 1]; got {threshold}"
                )));
            }
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let value = with_threads(cli.global.threads, || {
                let matrix = transition_counts::<f64>(&corpus, collapse_none);
                let filtered = filter_transitions(&matrix, threshold);
                serde_json::json!({
                    "mode": if collapse_none { "collapsed" } else { "direct" },
                    "threshold": threshold,
                    "labels": discourse_lens::analysis::TransitionMatrix::<f64>::labels(),
                    "counts": matrix.counts().iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                    "probabilities": matrix.probabilities().iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                    "edges": filtered.edges.iter().map(|e| serde_json::json!({
                        "from": e.from.label(),
                        "to": e.to.label(),
                        "probability": e.probability,
                        "receiver_role": e.receiver_role.as_str(),
                    })).collect::<Vec<_>>(),
                })
            });
            write_output(&out, &to_canonical_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaps {
            input,
            min_share,
            out,
        } => {
            if !(0.0..1.0).contains(&min_share) {
                return Err(CliError::Usage(format!(
                    "min-share must be in [0, 1); got {min_share}"
                )));
            }
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let matrix = with_threads(cli.global.threads, || gap_matrix::<f64>(&corpus, min_share));
            let mut csv = String::from("from,to,value,retained_instances\n");
            for (&(j, k), cell) in matrix.defined_cells() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    j.label(),
                    k.label(),
                    fixed4(cell.value),
                    cell.retained_instances
                ));
            }
            write_output(&out, csv.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Multiview { input, pair, out } => {
            let (from, to) = parse_pair(&pair)?;
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let value = with_threads(cli.global.threads, || {
                let mut value = serde_json::json!({
                    "pair": format!("{}->{}", from.label(), to.label()),
                    "bigram_relations": distribution_json(&bigram_relation_distribution::<f64>(&corpus, from, to)),
                });
                let obj = value.as_object_mut().expect("object");
                if !from.is_none() && !to.is_none() {
                    let d = triple_none_da_distribution::<f64>(&corpus, from, to)
                        .expect("both moves are non-None");
                    obj.insert("triple_none_acts".into(), distribution_json(&d));
                }
                if to == TalkMove::TNone {
                    let d = talkmove_to_none_da_distribution::<f64>(&corpus, from);
                    obj.insert("to_none_acts".into(), distribution_json(&d));
                }
                value
            });
            write_output(&out, &to_canonical_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lexical {
            input,
            pair,
            markers,
            position,
            out,
        } => {
            let (first, second) = parse_pair(&pair)?;
            if markers.iter().all(|m| m.trim().is_empty()) {
                return Err(CliError::Usage("markers must be non-empty".into()));
            }
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let position = match position {
                PositionArg::Leading => MarkerPosition::LeadingToken,
                PositionArg::Any => MarkerPosition::AnyToken,
            };
            let share = with_threads(cli.global.threads, || {
                lexical_marker_share::<f64>(
                    &corpus,
                    BigramPattern { first, second },
                    &markers,
                    position,
                )
            });
            let value = serde_json::json!({
                "pair": format!("{}->{}", first.label(), second.label()),
                "markers": markers,
                "position": position.as_str(),
                "share": share.share,
                "instances": share.instances,
                "matched": share.matched.iter().map(|m| serde_json::json!({
                    "session_id": m.session_id,
                    "first_index": m.first_index as u64,
                    "second_index": m.second_index as u64,
                })).collect::<Vec<_>>(),
            });
            write_output(&out, &to_canonical_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples {
            input,
            pattern,
            limit,
            context,
            out,
        } => {
            if limit < 1 {
                return Err(CliError::Usage("limit must be >= 1".into()));
            }
            let pattern = parse_pattern(&pattern)?;
            let corpus = load_corpus(input.format, &input.paths, &cli.global, &vocabs)?;
            let excerpts = extract_instances(&corpus, &pattern, limit, context);
            let value: Vec<serde_json::Value> = excerpts
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "session_id": e.session_id,
                        "match_span": [e.match_span.0 as u64, e.match_span.1 as u64],
                        "span": [e.span.0 as u64, e.span.1 as u64],
                        "utterances": e.utterances.iter().map(|u| serde_json::json!({
                            "idx": u.index as u64,
                            "speaker": u.speaker.as_str(),
                            "text": u.text,
                            "talk_move": u.talk_move.label(),
                            "dialogue_act": u.dialogue_act.as_str(),
                        })).collect::<Vec<_>>(),
                        "edges": e.edges.iter().map(|d| serde_json::json!({
                            "source": d.source as u64,
                            "target": d.target as u64,
                            "relation": d.relation.as_str(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            write_or_stdout(&out, &to_canonical_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report {
            format,
            input,
            out,
            dot_dir,
            heatmaps_dir,
            transition_threshold,
            gap_min_share,
            topk_talkmove_das,
            topk_none_das,
            coverage_talkmove,
            coverage_none,
            da_display_min_share,
            exclude_continuation_in_crosstab,
            markers,
        } => {
            let mut config = AnalysisConfig::default();
            if let Some(v) = transition_threshold {
                config.transition_threshold = v;
            }
            if let Some(v) = gap_min_share {
                config.gap_min_share = v;
            }
            if let Some(v) = topk_talkmove_das {
                config.topk_talkmove_das = v;
            }
            if let Some(v) = topk_none_das {
                config.topk_none_das = v;
            }
            if let Some(v) = coverage_talkmove {
                config.coverage_targets.talk_move = v;
            }
            if let Some(v) = coverage_none {
                config.coverage_targets.none = v;
            }
            if let Some(v) = da_display_min_share {
                config.da_display_min_share = v;
            }
            if let Some(v) = exclude_continuation_in_crosstab {
                config.exclude_continuation_in_crosstab = v;
            }
            if let Some(v) = markers {
                config.markers = v;
            }
            config
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;

            let corpus = load_corpus(format, &input, &cli.global, &vocabs)?;
            let report = with_threads(cli.global.threads, || full_report(&corpus, &config));
            let (bytes, digest) = report.canonical_bytes();
            write_output(&out, &bytes)?;

            if let Some(dir) = dot_dir {
                fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                let matrix = transition_counts::<f64>(&corpus, false);
                let filtered = filter_transitions(&matrix, config.transition_threshold);
                for grouping in [DotGrouping::All, DotGrouping::ToTeacher, DotGrouping::ToStudent]
                {
                    let path = dir.join(format!("transitions_{}.dot", grouping.as_str()));
                    write_output(&path, emit_dot(&filtered, grouping).as_bytes())?;
                }
            }
            if let Some(dir) = heatmaps_dir {
                fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                let direct = transition_counts::<f64>(&corpus, false);
                let collapsed = transition_counts::<f64>(&corpus, true);
                let gaps = gap_matrix::<f64>(&corpus, config.gap_min_share);
                write_output(
                    &dir.join("transitions_direct.csv"),
                    emit_heatmap_csv(&direct).as_bytes(),
                )?;
                write_output(
                    &dir.join("transitions_collapsed.csv"),
                    emit_heatmap_csv(&collapsed).as_bytes(),
                )?;
                write_output(
                    &dir.join("gap_matrix.csv"),
                    emit_heatmap_csv(&gaps).as_bytes(),
                )?;
            }
            print_report_summary(&report, &digest);
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            report_a,
            report_b,
            out,
        } => {
            let a = read_report(&report_a)?;
            let b = read_report(&report_b)?;
            let delta = compare(&a, &b)
                .map_err(|e| CliError::Failure(anyhow::anyhow!(e.to_string())))?;
            write_or_stdout(&out, &to_canonical_json(&delta))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_report(path: &Path) -> Result<AnalysisReport, CliError> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let report = AnalysisReport::from_json_bytes(&bytes)
        .with_context(|| format!("parsing report {}", path.display()))?;
    Ok(report)
}

fn unigram_json(
    corpus: &Corpus,
    view: ViewArg,
    role: Option<SpeakerRole>,
    exclude_continuation: bool,
    top_k: Option<usize>,
    coverage: f64,
) -> serde_json::Value {
    use discourse_lens::analysis::{crosstab_talkmove_dialogueact, dialogue_act_distribution};
    match view {
        ViewArg::Talkmove => {
            let d = talk_move_distribution::<f64>(corpus, role);
            let mut value = serde_json::json!({
                "view": "talkmove",
                "role": role.map(|r| r.as_str()),
                "distribution": distribution_json(&d),
            });
            if let Some(k) = top_k {
                let top = d.top_k_with_coverage(k, coverage);
                value.as_object_mut().expect("object").insert(
                    "top_k".into(),
                    serde_json::json!({
                        "k": k as u64,
                        "coverage_target": coverage,
                        "labels": top.labels,
                        "achieved_coverage": top.achieved_coverage,
                        "target_met": top.target_met,
                    }),
                );
            }
            value
        }
        ViewArg::Da => {
            let d = dialogue_act_distribution::<f64>(corpus, 0.005);
            let mut value = serde_json::json!({
                "view": "da",
                "distribution": distribution_json(&d.raw),
                "display": d.display.iter().map(|r| serde_json::json!({
                    "label": r.label,
                    "count": r.count,
                    "share": r.share,
                })).collect::<Vec<_>>(),
            });
            if let Some(k) = top_k {
                let top = d.raw.top_k_with_coverage(k, coverage);
                value.as_object_mut().expect("object").insert(
                    "top_k".into(),
                    serde_json::json!({
                        "k": k as u64,
                        "coverage_target": coverage,
                        "labels": top.labels,
                        "achieved_coverage": top.achieved_coverage,
                        "target_met": top.target_met,
                    }),
                );
            }
            value
        }
        ViewArg::Crosstab => {
            let crosstab = crosstab_talkmove_dialogueact::<f64>(corpus, exclude_continuation);
            let rows: serde_json::Map<String, serde_json::Value> = crosstab
                .rows()
                .iter()
                .map(|row| {
                    let mut entry = serde_json::json!({
                        "distribution": distribution_json(&row.distribution),
                    });
                    if let Some(k) = top_k {
                        let top = row.distribution.top_k_with_coverage(k, coverage);
                        entry.as_object_mut().expect("object").insert(
                            "top_k".into(),
                            serde_json::json!({
                                "k": k as u64,
                                "coverage_target": coverage,
                                "labels": top.labels,
                                "achieved_coverage": top.achieved_coverage,
                                "target_met": top.target_met,
                            }),
                        );
                    }
                    (row.talk_move.label().to_string(), entry)
                })
                .collect();
            serde_json::json!({
                "view": "crosstab",
                "exclude_continuation": exclude_continuation,
                "rows": rows,
            })
        }
    }
}

fn print_validation(corpus: &Corpus, report: &ValidationReport) {
    for violation in &report.violations {
        println!("{violation}");
    }
    let errors = report.errors().count();
    let warnings = report.violations.len() - errors;
    println!(
        "{} session(s), {} utterance(s): {} error(s), {} warning(s)",
        corpus.sessions.len(),
        corpus.utterance_count(),
        errors,
        warnings
    );
}

/// Everything printed here is read back off the report itself.
fn print_report_summary(report: &AnalysisReport, digest: &str) {
    println!("corpus: {}", report.corpus_id);
    println!("utterances: {}", report.unigram.talk_moves_all.total);
    if let Some((label, share)) = report
        .unigram
        .talk_moves_all
        .entries()
        .next()
    {
        println!("most frequent talk move: {label} ({})", fixed4(share));
    }
    println!(
        "filtered transition edges at threshold {}: {}",
        fixed4(report.transitions.filtered.threshold),
        report.transitions.filtered.edges.len()
    );
    println!("gap cells defined: {}", report.gaps.cells.len());
    println!("content digest: {digest}");
}

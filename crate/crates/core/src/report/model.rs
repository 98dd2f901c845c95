//! The canonical analysis report: one deterministic aggregate of every
//! statistic the library computes for a corpus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    bigram_instances, bigram_relation_distribution, crosstab_talkmove_dialogueact,
    dialogue_act_distribution, filter_transitions, gap_matrix, lexical_marker_share,
    talk_move_distribution, talkmove_to_none_da_distribution, transition_counts,
    triple_none_da_distribution, BigramPattern, DisplayRow, Distribution, FilteredTransitions,
    GapStatistic, MarkerPosition, TransitionMatrix,
};
use crate::corpus::{Corpus, SpeakerRole, TalkMove};

use super::canonical::{sha256_hex, to_canonical_json};
use super::config::AnalysisConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Key for an ordered talk-move pair, used throughout the report maps.
pub fn pair_key(from: TalkMove, to: TalkMove) -> String {
    format!("{}->{}", from.label(), to.label())
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DistributionDto {
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub shares: Vec<f64>,
    pub total: u64,
}

impl DistributionDto {
    fn from(d: &Distribution<f64>) -> Self {
        DistributionDto {
            labels: d.labels().to_vec(),
            counts: d.counts().to_vec(),
            shares: d.shares().to_vec(),
            total: d.total(),
        }
    }

    /// Ranked `(label, share)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.shares.iter().copied())
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DisplayRowDto {
    pub label: String,
    pub count: u64,
    pub share: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct UnigramSection {
    pub talk_moves_all: DistributionDto,
    pub talk_moves_teacher: DistributionDto,
    pub talk_moves_student: DistributionDto,
    pub dialogue_acts: DistributionDto,
    /// Display form of `dialogue_acts` at the configured floor, residual
    /// bucket last.
    pub dialogue_acts_display: Vec<DisplayRowDto>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TopKDto {
    pub labels: Vec<String>,
    pub achieved_coverage: f64,
    pub target_met: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CrosstabRowDto {
    pub distribution: DistributionDto,
    pub k: usize,
    pub coverage_target: f64,
    pub top_k: TopKDto,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CrosstabSection {
    pub exclude_continuation: bool,
    /// One row per talk move, keyed by label.
    pub rows: BTreeMap<String, CrosstabRowDto>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MatrixDto {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub probabilities: Vec<Vec<f64>>,
}

impl MatrixDto {
    fn from(m: &TransitionMatrix<f64>) -> Self {
        MatrixDto {
            labels: TransitionMatrix::<f64>::labels()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            counts: m.counts().iter().map(|r| r.to_vec()).collect(),
            probabilities: m.probabilities().iter().map(|r| r.to_vec()).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EdgeDto {
    pub from: String,
    pub to: String,
    pub probability: f64,
    pub receiver_role: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FilteredDto {
    pub threshold: f64,
    pub edges: Vec<EdgeDto>,
}

impl FilteredDto {
    fn from(f: &FilteredTransitions<f64>) -> Self {
        FilteredDto {
            threshold: f.threshold,
            edges: f
                .edges
                .iter()
                .map(|e| EdgeDto {
                    from: e.from.label().to_string(),
                    to: e.to.label().to_string(),
                    probability: e.probability,
                    receiver_role: e.receiver_role.as_str().to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TransitionSection {
    pub direct: MatrixDto,
    pub collapsed: MatrixDto,
    pub filtered: FilteredDto,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GapEntryDto {
    pub gap_length: u64,
    pub count: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GapCellDto {
    /// Expected intervening `T-None` count x 100.
    pub value: f64,
    pub retained_instances: u64,
    pub excluded: Vec<GapEntryDto>,
}

impl GapCellDto {
    fn from(s: &GapStatistic<f64>) -> Self {
        GapCellDto {
            value: s.value,
            retained_instances: s.retained_instances,
            excluded: s
                .excluded_entries
                .iter()
                .map(|e| GapEntryDto {
                    gap_length: e.gap_length as u64,
                    count: e.count,
                })
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GapSection {
    pub min_share: f64,
    /// Defined cells only; pairs that never occur are absent.
    pub cells: BTreeMap<String, GapCellDto>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MultiviewSection {
    /// Relation distribution per adjacent move pair with >= 1 instance.
    pub bigram_relations: BTreeMap<String, DistributionDto>,
    /// Dialogue acts of `T-None` following each move, keyed by the move.
    pub talkmove_to_none_acts: BTreeMap<String, DistributionDto>,
    /// Dialogue acts of the single intervening `T-None` per non-None pair.
    pub triple_none_acts: BTreeMap<String, DistributionDto>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct LexicalPairDto {
    pub share: f64,
    pub instances: u64,
    pub matched: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct LexicalSection {
    pub markers: Vec<String>,
    pub position: String,
    /// Same-move bigrams with >= 1 instance, keyed like other pairs.
    pub pairs: BTreeMap<String, LexicalPairDto>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub corpus_id: String,
    pub config: AnalysisConfig,
    /// SHA-256 of the canonical bytes with this field empty.
    pub content_digest: String,
    pub unigram: UnigramSection,
    pub crosstab: CrosstabSection,
    pub transitions: TransitionSection,
    pub gaps: GapSection,
    pub multiview: MultiviewSection,
    pub lexical: LexicalSection,
    /// Fixed methodological footnotes.
    pub notes: Vec<String>,
}

impl AnalysisReport {
    /// Canonical bytes plus the embedded digest. Two structurally equal
    /// reports always produce identical bytes.
    pub fn canonical_bytes(&self) -> (Vec<u8>, String) {
        let mut copy = self.clone();
        copy.content_digest = String::new();
        let body = to_canonical_json(&copy);
        let digest = sha256_hex(&body);
        copy.content_digest = digest.clone();
        (to_canonical_json(&copy), digest)
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }
}

fn unigram_section(corpus: &Corpus, config: &AnalysisConfig) -> UnigramSection {
    let da = dialogue_act_distribution::<f64>(corpus, config.da_display_min_share);
    UnigramSection {
        talk_moves_all: DistributionDto::from(&talk_move_distribution(corpus, None)),
        talk_moves_teacher: DistributionDto::from(&talk_move_distribution(
            corpus,
            Some(SpeakerRole::Teacher),
        )),
        talk_moves_student: DistributionDto::from(&talk_move_distribution(
            corpus,
            Some(SpeakerRole::Student),
        )),
        dialogue_acts: DistributionDto::from(&da.raw),
        dialogue_acts_display: da
            .display
            .iter()
            .map(|r: &DisplayRow<f64>| DisplayRowDto {
                label: r.label.clone(),
                count: r.count,
                share: r.share,
            })
            .collect(),
    }
}

fn crosstab_section(corpus: &Corpus, config: &AnalysisConfig) -> CrosstabSection {
    let crosstab = crosstab_talkmove_dialogueact::<f64>(
        corpus,
        config.exclude_continuation_in_crosstab,
    );
    let mut rows = BTreeMap::new();
    for row in crosstab.rows() {
        let (k, coverage_target) = if row.talk_move.is_none() {
            (config.topk_none_das, config.coverage_targets.none)
        } else {
            (config.topk_talkmove_das, config.coverage_targets.talk_move)
        };
        let top = row.distribution.top_k_with_coverage(k, coverage_target);
        rows.insert(
            row.talk_move.label().to_string(),
            CrosstabRowDto {
                distribution: DistributionDto::from(&row.distribution),
                k,
                coverage_target,
                top_k: TopKDto {
                    labels: top.labels,
                    achieved_coverage: top.achieved_coverage,
                    target_met: top.target_met,
                },
            },
        );
    }
    CrosstabSection {
        exclude_continuation: crosstab.continuation_excluded,
        rows,
    }
}

fn transition_section(corpus: &Corpus, config: &AnalysisConfig) -> TransitionSection {
    let direct = transition_counts::<f64>(corpus, false);
    let collapsed = transition_counts::<f64>(corpus, true);
    let filtered = filter_transitions(&direct, config.transition_threshold);
    TransitionSection {
        direct: MatrixDto::from(&direct),
        collapsed: MatrixDto::from(&collapsed),
        filtered: FilteredDto::from(&filtered),
    }
}

fn gap_section(corpus: &Corpus, config: &AnalysisConfig) -> GapSection {
    let matrix = gap_matrix::<f64>(corpus, config.gap_min_share);
    let cells = matrix
        .defined_cells()
        .map(|(&(j, k), stat)| (pair_key(j, k), GapCellDto::from(stat)))
        .collect();
    GapSection {
        min_share: config.gap_min_share,
        cells,
    }
}

fn multiview_section(corpus: &Corpus) -> MultiviewSection {
    let mut bigram_relations = BTreeMap::new();
    for from in TalkMove::ALL {
        for to in TalkMove::ALL {
            if bigram_instances(corpus, from, to).is_empty() {
                continue;
            }
            let d = bigram_relation_distribution::<f64>(corpus, from, to);
            bigram_relations.insert(pair_key(from, to), DistributionDto::from(&d));
        }
    }

    let mut talkmove_to_none_acts = BTreeMap::new();
    for from in TalkMove::ALL {
        let d = talkmove_to_none_da_distribution::<f64>(corpus, from);
        if d.total() > 0 {
            talkmove_to_none_acts.insert(from.label().to_string(), DistributionDto::from(&d));
        }
    }

    let mut triple_none_acts = BTreeMap::new();
    for from in TalkMove::NON_NONE {
        for to in TalkMove::NON_NONE {
            let d = triple_none_da_distribution::<f64>(corpus, from, to)
                .expect("pairs are non-None");
            if d.total() > 0 {
                triple_none_acts.insert(pair_key(from, to), DistributionDto::from(&d));
            }
        }
    }

    MultiviewSection {
        bigram_relations,
        talkmove_to_none_acts,
        triple_none_acts,
    }
}

fn lexical_section(corpus: &Corpus, config: &AnalysisConfig) -> LexicalSection {
    let position = MarkerPosition::LeadingToken;
    let mut pairs = BTreeMap::new();
    for m in TalkMove::NON_NONE {
        let share = lexical_marker_share::<f64>(
            corpus,
            BigramPattern {
                first: m,
                second: m,
            },
            &config.markers,
            position,
        );
        if share.instances > 0 {
            pairs.insert(
                pair_key(m, m),
                LexicalPairDto {
                    share: share.share,
                    instances: share.instances,
                    matched: share.matched.len() as u64,
                },
            );
        }
    }
    LexicalSection {
        markers: config.markers.clone(),
        position: position.as_str().to_string(),
        pairs,
    }
}

/// Runs every analysis with the configured parameters and assembles the
/// canonical report. Deterministic for a given `(corpus, config, version)`
/// regardless of thread count or session order.
pub fn full_report(corpus: &Corpus, config: &AnalysisConfig) -> AnalysisReport {
    AnalysisReport {
        tool_version: TOOL_VERSION.to_string(),
        corpus_id: corpus.corpus_id.clone(),
        config: config.clone(),
        content_digest: String::new(),
        unigram: unigram_section(corpus, config),
        crosstab: crosstab_section(corpus, config),
        transitions: transition_section(corpus, config),
        gaps: gap_section(corpus, config),
        multiview: multiview_section(corpus),
        lexical: lexical_section(corpus, config),
        notes: vec![
            "Transition probabilities are per-row conditionals over all successors; the \
             teacher/student diagram grouping only filters which edges are drawn."
                .to_string(),
            "Probability thresholds are applied to unrounded values; percentages are rounded \
             for display afterwards."
                .to_string(),
        ],
    }
}

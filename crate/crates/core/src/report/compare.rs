//! Side-by-side comparison of two analysis reports: aligned scalar deltas
//! in percentage points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::canonical::round6;
use super::model::{AnalysisReport, DistributionDto};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("CONFIG_MISMATCH: {0}")]
    ConfigMismatch(String),
}

/// What a flattened scalar measures, which fixes its delta unit.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// A share/probability in [0, 1]; deltas are x100 percentage points.
    Fraction,
    /// Already on a x100 scale (gap values); deltas subtract directly.
    Value,
    /// Raw counts; deltas subtract directly.
    Count,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub kind: ScalarKind,
    /// Absent when the statistic only exists in the other report.
    pub value_a: Option<f64>,
    pub value_b: Option<f64>,
    /// `value_b - value_a` on formatted (six-digit) values; percentage
    /// points for fractions. Absent for one-sided entries.
    pub delta: Option<f64>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DeltaReport {
    pub tool_version: String,
    pub corpus_a: String,
    pub corpus_b: String,
    pub entries: BTreeMap<String, DeltaEntry>,
}

fn flatten_distribution(
    out: &mut BTreeMap<String, (f64, ScalarKind)>,
    prefix: &str,
    d: &DistributionDto,
) {
    out.insert(format!("{prefix}.total"), (d.total as f64, ScalarKind::Count));
    for (label, share) in d.entries() {
        out.insert(
            format!("{prefix}.share.{label}"),
            (share, ScalarKind::Fraction),
        );
    }
}

/// Flattens every scalar statistic of a report under a stable dotted key.
fn flatten(report: &AnalysisReport) -> BTreeMap<String, (f64, ScalarKind)> {
    let mut out = BTreeMap::new();

    flatten_distribution(&mut out, "unigram.talk_moves.all", &report.unigram.talk_moves_all);
    flatten_distribution(
        &mut out,
        "unigram.talk_moves.teacher",
        &report.unigram.talk_moves_teacher,
    );
    flatten_distribution(
        &mut out,
        "unigram.talk_moves.student",
        &report.unigram.talk_moves_student,
    );
    flatten_distribution(&mut out, "unigram.dialogue_acts", &report.unigram.dialogue_acts);

    for (label, row) in &report.crosstab.rows {
        flatten_distribution(&mut out, &format!("crosstab.{label}"), &row.distribution);
        out.insert(
            format!("crosstab.{label}.coverage.achieved"),
            (row.top_k.achieved_coverage, ScalarKind::Fraction),
        );
    }

    for (name, matrix) in [
        ("direct", &report.transitions.direct),
        ("collapsed", &report.transitions.collapsed),
    ] {
        for (i, from) in matrix.labels.iter().enumerate() {
            for (j, to) in matrix.labels.iter().enumerate() {
                if matrix.counts[i][j] > 0 {
                    out.insert(
                        format!("transitions.{name}.prob.{from}->{to}"),
                        (matrix.probabilities[i][j], ScalarKind::Fraction),
                    );
                }
            }
        }
    }

    for (pair, cell) in &report.gaps.cells {
        out.insert(format!("gaps.{pair}.value"), (cell.value, ScalarKind::Value));
        out.insert(
            format!("gaps.{pair}.retained"),
            (cell.retained_instances as f64, ScalarKind::Count),
        );
    }

    for (pair, d) in &report.multiview.bigram_relations {
        flatten_distribution(&mut out, &format!("multiview.bigram_relations.{pair}"), d);
    }
    for (label, d) in &report.multiview.talkmove_to_none_acts {
        flatten_distribution(&mut out, &format!("multiview.talkmove_to_none.{label}"), d);
    }
    for (pair, d) in &report.multiview.triple_none_acts {
        flatten_distribution(&mut out, &format!("multiview.triple_none.{pair}"), d);
    }

    for (pair, lex) in &report.lexical.pairs {
        out.insert(
            format!("lexical.{pair}.share"),
            (lex.share, ScalarKind::Fraction),
        );
        out.insert(
            format!("lexical.{pair}.instances"),
            (lex.instances as f64, ScalarKind::Count),
        );
    }

    out
}

/// Aligns every scalar of two reports produced by the same tool version and
/// configuration. Deltas are computed on values rounded exactly as the
/// reports format them.
pub fn compare(a: &AnalysisReport, b: &AnalysisReport) -> Result<DeltaReport, CompareError> {
    if a.tool_version != b.tool_version {
        return Err(CompareError::ConfigMismatch(format!(
            "tool versions differ: {} vs {}",
            a.tool_version, b.tool_version
        )));
    }
    if a.config != b.config {
        return Err(CompareError::ConfigMismatch(
            "analysis configurations differ".to_string(),
        ));
    }

    let flat_a = flatten(a);
    let flat_b = flatten(b);
    let mut keys: Vec<&String> = flat_a.keys().chain(flat_b.keys()).collect();
    keys.sort();
    keys.dedup();

    let mut entries = BTreeMap::new();
    for key in keys {
        let a_side = flat_a.get(key);
        let b_side = flat_b.get(key);
        let kind = a_side.or(b_side).expect("key came from one side").1;
        let value_a = a_side.map(|(v, _)| round6(*v));
        let value_b = b_side.map(|(v, _)| round6(*v));
        let delta = match (value_a, value_b) {
            (Some(x), Some(y)) => Some(match kind {
                ScalarKind::Fraction => (y - x) * 100.0,
                ScalarKind::Value | ScalarKind::Count => y - x,
            }),
            _ => None,
        };
        entries.insert(
            key.clone(),
            DeltaEntry {
                kind,
                value_a,
                value_b,
                delta,
            },
        );
    }

    Ok(DeltaReport {
        tool_version: a.tool_version.clone(),
        corpus_a: a.corpus_id.clone(),
        corpus_b: b.corpus_id.clone(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{session_of_moves, Corpus, TalkMove};
    use crate::report::config::AnalysisConfig;
    use crate::report::model::full_report;
    use TalkMove::*;

    fn report_of(moves: &[TalkMove], id: &str) -> AnalysisReport {
        let corpus = Corpus::new(id, vec![session_of_moves("s", moves)]);
        full_report(&corpus, &AnalysisConfig::default())
    }

    #[test]
    fn self_comparison_is_all_zero() {
        let r = report_of(&[TPra, TNone, SMClaim, TPra], "a");
        let delta = compare(&r, &r).unwrap();
        assert!(!delta.entries.is_empty());
        for (key, entry) in &delta.entries {
            assert_eq!(entry.delta, Some(0.0), "nonzero delta at {key}");
        }
    }

    #[test]
    fn share_deltas_are_percentage_points() {
        // T-None share: 0.50 vs 0.558 -> +5.8 points.
        let mut a_moves = vec![TNone; 500];
        a_moves.extend(vec![TKet; 500]);
        let mut b_moves = vec![TNone; 558];
        b_moves.extend(vec![TKet; 442]);
        let a = report_of(&a_moves, "a");
        let b = report_of(&b_moves, "b");
        let delta = compare(&a, &b).unwrap();
        let entry = &delta.entries["unigram.talk_moves.all.share.T-None"];
        assert_eq!(entry.kind, ScalarKind::Fraction);
        assert!((entry.delta.unwrap() - 5.8).abs() < 1e-9);
    }

    #[test]
    fn one_sided_statistics_are_flagged() {
        let a = report_of(&[TPra, SMClaim], "a");
        let b = report_of(&[TPra, SMClaim, TKet, SNone], "b");
        let delta = compare(&a, &b).unwrap();
        let entry = &delta.entries["unigram.talk_moves.all.share.T-KET"];
        assert!(entry.value_a.is_none());
        assert!(entry.value_b.is_some());
        assert!(entry.delta.is_none());
    }

    #[test]
    fn config_mismatch_is_rejected() {
        let a = report_of(&[TPra, SMClaim], "a");
        let corpus = Corpus::new("b", vec![session_of_moves("s", &[TPra, SMClaim])]);
        let mut config = AnalysisConfig::default();
        config.transition_threshold = 0.2;
        let b = full_report(&corpus, &config);
        assert!(matches!(
            compare(&a, &b),
            Err(CompareError::ConfigMismatch(_))
        ));
    }
}

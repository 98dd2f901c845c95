//! Graphviz DOT rendering of filtered transition edges. Edge thickness
//! scales linearly with probability so diagrams read like the usual
//! transition figures; node and edge order are sorted for byte-stable
//! output.

use crate::analysis::FilteredTransitions;
use crate::corpus::SpeakerRole;
use crate::scalar::Scalar;

use super::canonical::percent0;

/// Which receiver-role panel to draw.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum DotGrouping {
    ToTeacher,
    ToStudent,
    All,
}

impl DotGrouping {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "to_teacher" | "teacher" => Some(DotGrouping::ToTeacher),
            "to_student" | "student" => Some(DotGrouping::ToStudent),
            "all" => Some(DotGrouping::All),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DotGrouping::ToTeacher => "to_teacher",
            DotGrouping::ToStudent => "to_student",
            DotGrouping::All => "all",
        }
    }

    fn keeps(self, role: SpeakerRole) -> bool {
        match self {
            DotGrouping::All => true,
            DotGrouping::ToTeacher => role == SpeakerRole::Teacher,
            DotGrouping::ToStudent => role == SpeakerRole::Student,
        }
    }
}

/// Pen width grows linearly from 1.0 at the filter threshold to 5.0 at
/// probability 1.0.
fn penwidth(probability: f64, threshold: f64) -> f64 {
    if threshold >= 1.0 {
        return 5.0;
    }
    let scaled = 1.0 + 4.0 * (probability - threshold) / (1.0 - threshold);
    scaled.clamp(1.0, 5.0)
}

/// Renders one digraph: nodes are the talk moves appearing in any retained
/// edge of the grouping, edges carry a whole-percent label and a scaled pen
/// width.
pub fn emit_dot<F: Scalar>(transitions: &FilteredTransitions<F>, grouping: DotGrouping) -> String {
    let threshold = transitions.threshold.as_f64();
    let mut edges: Vec<(&str, &str, f64)> = transitions
        .edges
        .iter()
        .filter(|e| grouping.keeps(e.receiver_role))
        .map(|e| (e.from.label(), e.to.label(), e.probability.as_f64()))
        .collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let mut nodes: Vec<&str> = edges.iter().flat_map(|&(f, t, _)| [f, t]).collect();
    nodes.sort();
    nodes.dedup();

    let mut out = String::new();
    out.push_str("digraph transitions {\n");
    out.push_str("  rankdir=LR;\n");
    for node in nodes {
        out.push_str(&format!("  \"{node}\";\n"));
    }
    for (from, to, p) in edges {
        out.push_str(&format!(
            "  \"{from}\" -> \"{to}\" [label=\"{}\", penwidth={:.2}];\n",
            percent0(p),
            penwidth(p, threshold)
        ));
    }
    out.push_str("}\n");
    out
}

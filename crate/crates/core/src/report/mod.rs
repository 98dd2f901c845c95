//! Report assembly, canonical serialization, corpus comparison, and the
//! DOT/CSV rendering handoff.

pub mod canonical;
mod compare;
mod config;
mod dot;
mod heatmap;
mod model;

pub use canonical::{fixed4, fixed6, percent0, round6, sha256_hex, to_canonical_json};
pub use compare::{compare, CompareError, DeltaEntry, DeltaReport, ScalarKind};
pub use config::{AnalysisConfig, CoverageTargets};
pub use dot::{emit_dot, DotGrouping};
pub use heatmap::{emit_heatmap_csv, HeatmapSource};
pub use model::{
    full_report, pair_key, AnalysisReport, CrosstabRowDto, CrosstabSection, DistributionDto,
    EdgeDto, FilteredDto, GapCellDto, GapSection, LexicalSection, MatrixDto, MultiviewSection,
    TransitionSection, UnigramSection, TOOL_VERSION,
};

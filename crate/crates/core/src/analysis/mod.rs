//! Distributional, sequential, and multi-view analytics.
//!
//! All counting scans parallelize per session and merge by integer
//! addition, so results never depend on the schedule.

pub mod multiview;
pub mod sequence;
pub mod unigram;

pub use multiview::{
    bigram_instances, bigram_relation_distribution, extract_instances, lexical_marker_share,
    talkmove_to_none_da_distribution, triple_instances, triple_none_da_distribution,
    BigramInstance, BigramPattern, Excerpt, ExtractPattern, InstanceRef, MarkerPosition,
    MarkerShare, TripleInstance, NO_EDGE_LABEL,
};
pub use sequence::{
    filter_transitions, gap_histogram, gap_matrix, tnone_gap_statistic, transition_counts,
    FilteredTransitions, GapEntry, GapHistogram, GapMatrix, GapStatistic, PairError,
    TransitionEdge, TransitionMatrix, TransitionMode,
};
pub use unigram::{
    crosstab_talkmove_dialogueact, dialogue_act_distribution, talk_move_distribution, CrossTab,
    CrossTabRow, DialogueActDistribution, DisplayRow, Distribution, TopK, BELOW_THRESHOLD_LABEL,
};

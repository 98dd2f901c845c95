//! Analysis configuration. Defaults encode the reference constants the
//! whole pipeline reproduces by default: the 10% transition display
//! threshold, the 5% gap exclusion rule, top-3/top-7 dialogue acts with
//! 50%/75% coverage targets, and the 0.5% display floor for dialogue-act
//! charts. Every field is overridable.

use serde::{Deserialize, Serialize};

use crate::corpus::ConfigError;

/// Coverage targets for top-k dialogue-act selection: talk-move rows use
/// `talk_move`, the two `None` rows use `none`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct CoverageTargets {
    pub talk_move: f64,
    pub none: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Minimum `P(to | from)` for an edge to appear in transition diagrams.
    pub transition_threshold: f64,
    /// Gap-length shares below this are excluded from the gap statistic.
    pub gap_min_share: f64,
    /// Top dialogue acts reported per talk-move row.
    pub topk_talkmove_das: usize,
    /// Top dialogue acts reported per `None` row.
    pub topk_none_das: usize,
    pub coverage_targets: CoverageTargets,
    /// Dialogue acts under this share aggregate into the display residual.
    pub da_display_min_share: f64,
    pub exclude_continuation_in_crosstab: bool,
    /// Lexical markers checked on same-move bigrams.
    pub markers: Vec<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            transition_threshold: 0.10,
            gap_min_share: 0.05,
            topk_talkmove_das: 3,
            topk_none_das: 7,
            coverage_targets: CoverageTargets {
                talk_move: 0.50,
                none: 0.75,
            },
            da_display_min_share: 0.005,
            exclude_continuation_in_crosstab: true,
            markers: vec!["so".to_string()],
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fractions = [
            ("transition_threshold", self.transition_threshold),
            ("gap_min_share", self.gap_min_share),
            ("coverage_targets.talk_move", self.coverage_targets.talk_move),
            ("coverage_targets.none", self.coverage_targets.none),
            ("da_display_min_share", self.da_display_min_share),
        ];
        for (name, value) in fractions {
            if !(0.0..1.0).contains(&value) {
                return Err(ConfigError::Invalid(format!(
                    "{name} must be in [0, 1); got {value}"
                )));
            }
        }
        for (name, value) in [
            ("topk_talkmove_das", self.topk_talkmove_das),
            ("topk_none_das", self.topk_none_das),
        ] {
            if value < 1 {
                return Err(ConfigError::Invalid(format!("{name} must be >= 1")));
            }
        }
        if self.markers.is_empty() {
            return Err(ConfigError::Invalid("markers must be non-empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_pin_reference_constants() {
        let c = AnalysisConfig::default();
        c.validate().unwrap();
        assert_eq!(c.transition_threshold, 0.10);
        assert_eq!(c.gap_min_share, 0.05);
        assert_eq!(c.topk_talkmove_das, 3);
        assert_eq!(c.topk_none_das, 7);
        assert_eq!(c.coverage_targets.talk_move, 0.50);
        assert_eq!(c.coverage_targets.none, 0.75);
        assert_eq!(c.da_display_min_share, 0.005);
        assert!(c.exclude_continuation_in_crosstab);
        assert_eq!(c.markers, ["so"]);
    }

    #[test]
    fn out_of_range_fields_are_rejected() {
        let mut c = AnalysisConfig::default();
        c.transition_threshold = 1.0;
        assert!(c.validate().is_err());

        let mut c = AnalysisConfig::default();
        c.topk_none_das = 0;
        assert!(c.validate().is_err());

        let mut c = AnalysisConfig::default();
        c.markers.clear();
        assert!(c.validate().is_err());
    }
}

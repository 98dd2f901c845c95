//! Heatmap CSV rendering for transition and gap matrices: a `to`-label
//! header, one row per `from` label, 4-decimal fixed-point cells, empty
//! cells for absent entries, LF line endings.

use crate::analysis::{GapMatrix, TransitionMatrix};
use crate::corpus::TalkMove;
use crate::scalar::Scalar;

use super::canonical::fixed4;

/// Anything renderable as a labeled matrix of optional values.
pub trait HeatmapSource {
    fn row_labels(&self) -> Vec<&'static str>;
    fn col_labels(&self) -> Vec<&'static str>;
    /// `None` renders as an empty cell.
    fn cell(&self, row: usize, col: usize) -> Option<f64>;
}

impl<F: Scalar> HeatmapSource for TransitionMatrix<F> {
    fn row_labels(&self) -> Vec<&'static str> {
        TransitionMatrix::<F>::labels().to_vec()
    }

    fn col_labels(&self) -> Vec<&'static str> {
        TransitionMatrix::<F>::labels().to_vec()
    }

    fn cell(&self, row: usize, col: usize) -> Option<f64> {
        Some(self.probabilities()[row][col].as_f64())
    }
}

impl<F: Scalar> HeatmapSource for GapMatrix<F> {
    fn row_labels(&self) -> Vec<&'static str> {
        GapMatrix::<F>::labels().to_vec()
    }

    fn col_labels(&self) -> Vec<&'static str> {
        GapMatrix::<F>::labels().to_vec()
    }

    fn cell(&self, row: usize, col: usize) -> Option<f64> {
        let from = TalkMove::NON_NONE[row];
        let to = TalkMove::NON_NONE[col];
        self.cell(from, to).map(|s| s.value.as_f64())
    }
}

/// Renders the matrix as CSV text. Labels contain no separators, so no
/// quoting is needed.
pub fn emit_heatmap_csv(source: &impl HeatmapSource) -> String {
    let cols = source.col_labels();
    let mut out = String::from("from");
    for col in &cols {
        out.push(',');
        out.push_str(col);
    }
    out.push('\n');
    for (i, row_label) in source.row_labels().iter().enumerate() {
        out.push_str(row_label);
        for j in 0..cols.len() {
            out.push(',');
            if let Some(v) = source.cell(i, j) {
                out.push_str(&fixed4(v));
            }
        }
        out.push('\n');
    }
    out
}

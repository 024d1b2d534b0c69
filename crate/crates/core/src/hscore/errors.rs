//! Error taxonomy: structure, structure naming, element and element format errors.

use serde::{Deserialize, Serialize};

use super::align::{align_tables, pair_tables};
use crate::model::NormalizedTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Excess or missing rows and columns, plus one per unpaired table.
    pub structure_errors: usize,
    /// Aligned row or column names that differ.
    pub structure_naming_errors: usize,
    /// Wrong or inappropriately empty cell values.
    pub element_errors: usize,
    /// Right value in the wrong surface form (`50` for `50.0%`).
    pub element_format_errors: usize,
}

impl ErrorReport {
    pub fn total(&self) -> usize {
        self.structure_errors + self.structure_naming_errors + self.element_errors + self.element_format_errors
    }

    pub fn is_clean(&self) -> bool {
        self.total() == 0
    }

    pub fn add(&mut self, other: &ErrorReport) {
        self.structure_errors += other.structure_errors;
        self.structure_naming_errors += other.structure_naming_errors;
        self.element_errors += other.element_errors;
        self.element_format_errors += other.element_format_errors;
    }
}

/// Numeric value of a cell after stripping `%`, thousands separators and a
/// leading `+`; `m:ss` times become minutes.
pub fn canonical_number(text: &str) -> Option<f64> {
    let t = text.trim();
    let t = t.strip_suffix('%').unwrap_or(t).trim_end();
    let t = t.strip_prefix('+').unwrap_or(t);
    let t: String = t.chars().filter(|&c| c != ',').collect();
    if t.is_empty() {
        return None;
    }
    if let Some((m, s)) = t.split_once(':') {
        let plain = |x: &str| !x.is_empty() && x.chars().all(|c| c.is_ascii_digit());
        if plain(m) && plain(s) && s.len() == 2 {
            let minutes: f64 = m.parse().ok()?;
            let seconds: f64 = s.parse().ok()?;
            return Some(minutes + seconds / 60.0);
        }
        return None;
    }
    let numeric =
        t.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-') && t.chars().any(|c| c.is_ascii_digit());
    if !numeric {
        return None;
    }
    t.parse::<f64>().ok()
}

fn names_equal(a: &str, b: &str) -> bool {
    a == b || a.to_lowercase() == b.to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellVerdict {
    Match,
    FormatError,
    ElementError,
}

pub fn classify_cell(pred: &str, gold: &str) -> CellVerdict {
    if pred == gold {
        return CellVerdict::Match;
    }
    match (canonical_number(pred), canonical_number(gold)) {
        (Some(p), Some(g)) if p == g => CellVerdict::FormatError,
        _ => CellVerdict::ElementError,
    }
}

/// Counts each error type between paired tables, using the same pairing and
/// alignment as the content score. When rows are matched on row names the
/// gold first column is judged as names, not elements.
pub fn classify_errors(pred: &[NormalizedTable], gold: &[NormalizedTable]) -> ErrorReport {
    let pairing = pair_tables(pred, gold);
    let mut report = ErrorReport {
        structure_errors: pairing.unpaired_pred.len() + pairing.unpaired_gold.len(),
        ..ErrorReport::default()
    };
    for &(p, g) in &pairing.pairs {
        let (pt, gt) = (&pred[p], &gold[g]);
        report.structure_errors += pt.rows().abs_diff(gt.rows()) + pt.cols().abs_diff(gt.cols());

        let alignment = align_tables(pt, gt);
        if alignment.by_column_name {
            report.structure_naming_errors += alignment
                .cols
                .iter()
                .filter(|&&(pc, gc)| !names_equal(&pt.column_names[pc], &gt.column_names[gc]))
                .count();
        }
        if let Some(pc) = alignment.row_name_col {
            report.structure_naming_errors += alignment
                .rows
                .iter()
                .filter(|&&(pr, gr)| !names_equal(pt.cell(pr, pc).unwrap_or(""), &gt.row_names[gr]))
                .count();
        }
        for &(pr, gr) in &alignment.rows {
            for &(pc, gc) in &alignment.cols {
                if alignment.by_row_name() && gc == 0 {
                    continue;
                }
                let pv = pt.cell(pr, pc).unwrap_or("");
                let gv = gt.cell(gr, gc).unwrap_or("");
                match classify_cell(pv, gv) {
                    CellVerdict::Match => {}
                    CellVerdict::FormatError => report.element_format_errors += 1,
                    CellVerdict::ElementError => report.element_errors += 1,
                }
            }
        }
    }
    report
}

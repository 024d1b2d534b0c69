//! Mean table shapes per format.

use serde::Serialize;

use super::load::CorpusItem;
use crate::hscore::ParsedDocument;
use crate::model::TableFormat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormatStats {
    pub format: TableFormat,
    pub items: usize,
    pub tables: usize,
    pub mean_rows: f64,
    pub mean_cols: f64,
}

/// Shape of the gold tables, averaged per table, for each format present.
pub fn corpus_stats(items: &[CorpusItem]) -> Vec<FormatStats> {
    TableFormat::ALL
        .iter()
        .filter_map(|&format| {
            let golds: Vec<&CorpusItem> = items.iter().filter(|i| i.format == format).collect();
            if golds.is_empty() {
                return None;
            }
            let (mut tables, mut rows, mut cols) = (0usize, 0usize, 0usize);
            for item in &golds {
                for t in ParsedDocument::parse(&item.output, format).tables() {
                    tables += 1;
                    rows += t.rows();
                    cols += t.cols();
                }
            }
            let per_table = |n: usize| if tables == 0 { 0.0 } else { n as f64 / tables as f64 };
            Some(FormatStats {
                format,
                items: golds.len(),
                tables,
                mean_rows: per_table(rows),
                mean_cols: per_table(cols),
            })
        })
        .collect()
}

//! Format-agnostic table model shared by all parsers and scorers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The tags kept when distilling an HTML document into a [`StructureTree`].
pub const RECOGNIZED_HTML_TAGS: [&str; 22] = [
    "table", "tr", "th", "td", "ul", "ol", "li", "div", "span", "p", "a", "img", "embed", "pre", "h1", "h2", "h3",
    "h4", "h5", "h6", "input", "button",
];

pub fn is_recognized_tag(tag: &str) -> bool {
    RECOGNIZED_HTML_TAGS.contains(&tag)
}

/// Strips leading/trailing whitespace and collapses internal runs to a single space.
pub fn normalize_cell(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    RawText,
    Latex,
    Html,
}

impl TableFormat {
    pub const ALL: [TableFormat; 3] = [TableFormat::RawText, TableFormat::Latex, TableFormat::Html];

    pub fn as_str(self) -> &'static str {
        match self {
            TableFormat::RawText => "raw_text",
            TableFormat::Latex => "latex",
            TableFormat::Html => "html",
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown table format {0:?} (expected raw_text, latex or html)")]
pub struct UnknownFormat(pub String);

impl FromStr for TableFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw_text" | "raw" | "text" => Ok(TableFormat::RawText),
            "latex" | "tex" => Ok(TableFormat::Latex),
            "html" => Ok(TableFormat::Html),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    Left,
    Center,
    Right,
    Unspecified,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("{what} has length {found}, expected {expected} (column count)")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },
}

/// Whether [`NormalizedTable::new`] may pad short rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadMode {
    Strict,
    Pad,
}

/// A rectangular grid of normalized cell strings plus header metadata.
///
/// Construct through [`NormalizedTable::new`] so that the
/// rectangularity and normalization invariants hold.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NormalizedTable {
    /// Pairing key; raw-text parsing sets `Team`, `Player` or `Unlabeled`.
    pub label: Option<String>,
    pub caption: Option<String>,
    pub column_names: Vec<String>,
    pub row_names: Vec<String>,
    cells: Vec<Vec<String>>,
    pub alignments: Vec<Alignment>,
    /// Number of empty cells inserted to make the grid rectangular.
    pub padded_cells: usize,
}

impl NormalizedTable {
    /// Builds a table from raw rows. All text is normalized. In [`PadMode::Pad`]
    /// every row (and a nonempty header / alignment list) is padded to the widest
    /// of them; in [`PadMode::Strict`] any mismatch is an error.
    ///
    /// When `column_names` is nonempty the first column doubles as `row_names`.
    pub fn new(
        column_names: Vec<String>,
        rows: Vec<Vec<String>>,
        alignments: Vec<Alignment>,
        mode: PadMode,
    ) -> Result<Self, ModelError> {
        let mut column_names: Vec<String> = column_names.iter().map(|c| normalize_cell(c)).collect();
        let mut cells: Vec<Vec<String>> =
            rows.into_iter().map(|r| r.iter().map(|c| normalize_cell(c)).collect()).collect();
        let mut alignments = alignments;

        let width = cells
            .iter()
            .map(Vec::len)
            .chain(std::iter::once(column_names.len()))
            .chain(std::iter::once(alignments.len()))
            .max()
            .unwrap_or(0);

        let mut padded = 0;
        match mode {
            PadMode::Strict => {
                let expected = cells.first().map(Vec::len).unwrap_or(column_names.len());
                for (i, row) in cells.iter().enumerate() {
                    if row.len() != expected {
                        return Err(ModelError::Ragged { row: i, expected, found: row.len() });
                    }
                }
                if !column_names.is_empty() && column_names.len() != expected && !cells.is_empty() {
                    return Err(ModelError::LengthMismatch {
                        what: "column_names",
                        expected,
                        found: column_names.len(),
                    });
                }
                let expected = if cells.is_empty() { column_names.len() } else { expected };
                if !alignments.is_empty() && alignments.len() != expected {
                    return Err(ModelError::LengthMismatch { what: "alignments", expected, found: alignments.len() });
                }
            }
            PadMode::Pad => {
                for row in &mut cells {
                    padded += width - row.len();
                    row.resize(width, String::new());
                }
                if !column_names.is_empty() {
                    column_names.resize(width, String::new());
                }
                if !alignments.is_empty() {
                    alignments.resize(width, Alignment::Unspecified);
                }
            }
        }

        let row_names = if column_names.is_empty() {
            Vec::new()
        } else {
            cells.iter().map(|r| r.first().cloned().unwrap_or_default()).collect()
        };

        Ok(NormalizedTable {
            label: None,
            caption: None,
            column_names,
            row_names,
            cells,
            alignments,
            padded_cells: padded,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_caption(mut self, caption: Option<String>) -> Self {
        self.caption = caption.map(|c| normalize_cell(&c));
        self
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    /// Column count: the grid width, or the header width for a header-only table.
    pub fn cols(&self) -> usize {
        self.cells.first().map(Vec::len).unwrap_or_else(|| self.column_names.len().max(self.alignments.len()))
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&str> {
        self.cells.get(row).and_then(|r| r.get(col)).map(String::as_str)
    }

    pub fn cell_count(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn has_header(&self) -> bool {
        !self.column_names.is_empty()
    }

    /// A copy of the table without the given data rows.
    pub fn without_rows(&self, drop: &[usize]) -> NormalizedTable {
        let rows = self.cells.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, r)| r.clone()).collect();
        let mut t = NormalizedTable::new(self.column_names.clone(), rows, self.alignments.clone(), PadMode::Pad)
            .expect("pad mode never fails");
        t.label = self.label.clone();
        t.caption = self.caption.clone();
        t
    }
}

/// (rows, cols) of the cell grid.
pub fn table_shape(t: &NormalizedTable) -> (usize, usize) {
    (t.rows(), t.cols())
}

/// A whitelisted-tag tree distilled from an HTML document; carries no text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructureTree {
    pub tag: String,
    pub children: Vec<StructureTree>,
}

impl StructureTree {
    pub fn leaf(tag: &str) -> Self {
        StructureTree { tag: tag.to_string(), children: Vec::new() }
    }

    pub fn node(tag: &str, children: Vec<StructureTree>) -> Self {
        StructureTree { tag: tag.to_string(), children }
    }

    /// Pre-order count of nodes satisfying `pred`.
    pub fn count_where(&self, pred: &impl Fn(&str) -> bool) -> usize {
        usize::from(pred(&self.tag)) + self.children.iter().map(|c| c.count_where(pred)).sum::<usize>()
    }

    pub fn node_count(&self) -> usize {
        self.count_where(&|_| true)
    }

    pub fn all_recognized(&self) -> bool {
        is_recognized_tag(&self.tag) && self.children.iter().all(StructureTree::all_recognized)
    }
}

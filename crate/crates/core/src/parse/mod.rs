//! Format-specific readers producing [`NormalizedTable`](crate::model::NormalizedTable) values.

pub mod html;
pub mod latex;
pub mod raw;

pub use html::{
    build_structure_tree, parse_html, parse_html_tables, serialize_structure_tree, HtmlDocument, HtmlTables,
};
pub use latex::{extract_latex_table, parse_latex_table, LatexError, LatexParse, LatexTableSource};
pub use raw::{parse_raw_tables, RawParseResult};

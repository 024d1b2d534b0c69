//! Writes normalized tables back out in each supported format.

use crate::model::{Alignment, NormalizedTable, TableFormat};
use crate::parse::raw::UNLABELED;

fn pipe_row(cells: &[String]) -> String {
    let mut line = String::from("|");
    for c in cells {
        line.push(' ');
        line.push_str(c);
        line.push_str(" |");
    }
    line
}

/// Pipe tables, each preceded by its label line (unless unlabeled) and
/// separated by blank lines. Column names form the first row.
pub fn render_raw(tables: &[NormalizedTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(label) = t.label.as_deref().filter(|l| *l != UNLABELED) {
            out.push_str(label);
            out.push('\n');
        }
        let header = if t.column_names.is_empty() { vec![String::new(); t.cols()] } else { t.column_names.clone() };
        out.push_str(&pipe_row(&header));
        out.push('\n');
        for row in t.cells() {
            out.push_str(&pipe_row(row));
            out.push('\n');
        }
    }
    out
}

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' | '%' | '_' | '#' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(c),
        }
    }
    out
}

/// A `table` float with caption and a ruled `tabular`. Column names, when
/// present, become the first row.
pub fn render_latex(t: &NormalizedTable) -> String {
    let spec: String = if t.alignments.is_empty() {
        "l".repeat(t.cols())
    } else {
        t.alignments
            .iter()
            .map(|a| match a {
                Alignment::Center => 'c',
                Alignment::Right => 'r',
                Alignment::Left | Alignment::Unspecified => 'l',
            })
            .collect()
    };
    let mut out = String::from("\\begin{table}[h]\n\\centering\n");
    if let Some(caption) = &t.caption {
        out.push_str(&format!("\\caption{{{}}}\n", latex_escape(caption)));
    }
    out.push_str(&format!("\\begin{{tabular}}{{{spec}}}\n\\hline\n"));
    let mut write_row = |row: &[String]| {
        let cells: Vec<String> = row.iter().map(|c| latex_escape(c)).collect();
        out.push_str(&cells.join(" & "));
        out.push_str(" \\\\\n");
    };
    if t.has_header() {
        write_row(&t.column_names);
    }
    for row in t.cells() {
        write_row(row);
    }
    out.push_str("\\hline\n\\end{tabular}\n\\end{table}\n");
    out
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `<table>` markup with a `<th>` header row when column names exist.
pub fn render_html(t: &NormalizedTable) -> String {
    let mut out = String::from("<table>\n");
    if t.has_header() {
        out.push_str("  <tr>");
        for c in &t.column_names {
            out.push_str(&format!("<th>{}</th>", html_escape(c)));
        }
        out.push_str("</tr>\n");
    }
    for row in t.cells() {
        out.push_str("  <tr>");
        for c in row {
            out.push_str(&format!("<td>{}</td>", html_escape(c)));
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</table>\n");
    out
}

/// Renders `tables` in `fmt`; LaTeX and HTML documents concatenate their tables.
pub fn render(tables: &[NormalizedTable], fmt: TableFormat) -> String {
    match fmt {
        TableFormat::RawText => render_raw(tables),
        TableFormat::Latex => tables.iter().map(render_latex).collect::<Vec<_>>().join("\n"),
        TableFormat::Html => tables.iter().map(render_html).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PadMode;
    use crate::parse::{extract_latex_table, parse_html_tables, parse_latex_table, parse_raw_tables};
    use proptest::prelude::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn latex_round_trip_cells() {
        let t = NormalizedTable::new(
            vec![],
            vec![s(&["a_1", "50%"]), s(&["{x}", "y"])],
            vec![Alignment::Left, Alignment::Right],
            PadMode::Strict,
        )
        .unwrap()
        .with_caption(Some("Caps & more".into()));
        let parsed = parse_latex_table(&extract_latex_table(&render_latex(&t)).unwrap()).table;
        assert_eq!(parsed.cells(), t.cells());
        assert_eq!(parsed.alignments, t.alignments);
        assert_eq!(parsed.caption, t.caption);
    }

    #[test]
    fn html_round_trip() {
        let t = NormalizedTable::new(s(&["A", "B"]), vec![s(&["<1>", "a & b"])], vec![], PadMode::Strict).unwrap();
        let parsed = parse_html_tables(&render_html(&t));
        assert_eq!(parsed.tables, vec![t]);
    }

    proptest! {
        #[test]
        fn raw_parse_render_parse(text in "((Team|Player|)\n([a-z0-9 ]{0,5}(\\|[a-z0-9 ]{0,5}){0,3}\n){0,4}\n?){0,4}") {
            let unpadded = |r: crate::parse::RawParseResult| {
                r.tables.into_iter().map(|(l, mut t)| { t.padded_cells = 0; (l, t) }).collect::<Vec<_>>()
            };
            let first = parse_raw_tables(&text);
            let second = parse_raw_tables(&render_raw(&first.table_list()));
            prop_assert_eq!(unpadded(first), unpadded(second));
        }
    }
}

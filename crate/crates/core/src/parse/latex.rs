//! Tabular-subset LaTeX reader: locates the first tabular environment with a
//! brace-aware scanner, then splits rows on top-level `\\` and cells on
//! top-level `&`.

use thiserror::Error;

use crate::model::{Alignment, NormalizedTable, PadMode};

const TABULAR_ENVS: [&str; 5] = ["tabular", "tabular*", "tabularx", "tabulary", "longtable"];
const RULE_COMMANDS: [&str; 8] =
    ["hline", "toprule", "midrule", "bottomrule", "cline", "cmidrule", "addlinespace", "specialrule"];
/// Commands whose brace arguments carry no cell content.
const DROP_ARG_COMMANDS: [&str; 14] = [
    "hspace",
    "vspace",
    "hskip",
    "vskip",
    "rule",
    "phantom",
    "hphantom",
    "vphantom",
    "color",
    "cellcolor",
    "rowcolor",
    "includegraphics",
    "setlength",
    "arraystretch",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatexError {
    #[error("no tabular environment found")]
    NoTableFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatexTableSource {
    /// Environment body with rule commands removed.
    pub tabular_body: String,
    pub column_spec: String,
    pub caption: Option<String>,
    pub has_hlines: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatexParse {
    pub table: NormalizedTable,
    pub diagnostics: Vec<String>,
}

fn is_escaped(bytes: &[u8], pos: usize) -> bool {
    let mut n = 0;
    let mut i = pos;
    while i > 0 && bytes[i - 1] == b'\\' {
        n += 1;
        i -= 1;
    }
    n % 2 == 1
}

/// Removes `%` comments through end of line.
fn strip_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    for line in src.split_inclusive('\n') {
        let bytes = line.as_bytes();
        let cut = (0..bytes.len()).find(|&i| bytes[i] == b'%' && !is_escaped(bytes, i));
        match cut {
            Some(i) => {
                out.push_str(&line[..i]);
                if line.ends_with('\n') {
                    out.push('\n');
                }
            }
            None => out.push_str(line),
        }
    }
    out
}

fn skip_ws(s: &str, mut pos: usize) -> usize {
    let bytes = s.as_bytes();
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

/// Reads a balanced `open ... close` group starting at `pos` (after optional
/// whitespace). Returns the inner text and the index just past the closer.
fn read_delimited(s: &str, pos: usize, open: u8, close: u8) -> Option<(&str, usize)> {
    let bytes = s.as_bytes();
    let start = skip_ws(s, pos);
    if bytes.get(start) != Some(&open) {
        return None;
    }
    let mut depth = 0usize;
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\\' {
            i += 2;
            continue;
        }
        if b == open {
            depth += 1;
        } else if b == close {
            depth -= 1;
            if depth == 0 {
                return Some((&s[start + 1..i], i + 1));
            }
        }
        i += 1;
    }
    None
}

fn read_group(s: &str, pos: usize) -> Option<(&str, usize)> {
    read_delimited(s, pos, b'{', b'}')
}

fn read_optional(s: &str, pos: usize) -> Option<(&str, usize)> {
    read_delimited(s, pos, b'[', b']')
}

/// Reads `\name` at `pos` (which must point at the backslash).
fn control_word(s: &str, pos: usize) -> Option<(&str, usize)> {
    let bytes = s.as_bytes();
    if bytes.get(pos) != Some(&b'\\') {
        return None;
    }
    let mut end = pos + 1;
    while end < bytes.len() && bytes[end].is_ascii_alphabetic() {
        end += 1;
    }
    if end == pos + 1 {
        return None;
    }
    // starred variants
    if bytes.get(end) == Some(&b'*') {
        end += 1;
    }
    Some((&s[pos + 1..end], end))
}

/// Finds `\begin{name}` or `\end{name}` occurrences for the given environment names.
fn find_env_marker(s: &str, from: usize, marker: &str, names: &[&str]) -> Option<(usize, usize, String)> {
    let mut search = from;
    while let Some(off) = s[search..].find(marker) {
        let at = search + off;
        if !is_escaped(s.as_bytes(), at) {
            if let Some((name, end)) = read_group(s, at + marker.len()) {
                let name = name.trim();
                if names.contains(&name) {
                    return Some((at, end, name.to_string()));
                }
            }
        }
        search = at + marker.len();
    }
    None
}

/// End of the environment `name` whose body starts at `body_start`, honoring nesting.
/// Returns `(body_end, after_end_marker)`.
fn find_env_end(s: &str, body_start: usize, name: &str) -> Option<(usize, usize)> {
    let mut depth = 1;
    let mut pos = body_start;
    loop {
        let next_begin = find_env_marker(s, pos, "\\begin", &[name]);
        let next_end = find_env_marker(s, pos, "\\end", &[name])?;
        match next_begin {
            Some((b, bend, _)) if b < next_end.0 => {
                depth += 1;
                pos = bend;
            }
            _ => {
                depth -= 1;
                if depth == 0 {
                    return Some((next_end.0, next_end.1));
                }
                pos = next_end.1;
            }
        }
    }
}

/// Removes horizontal rule commands (and their arguments).
fn remove_rules(body: &str) -> (String, bool) {
    let mut out = String::with_capacity(body.len());
    let mut found = false;
    let mut i = 0;
    let bytes = body.as_bytes();
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            if let Some((name, mut end)) = control_word(body, i) {
                if RULE_COMMANDS.contains(&name.trim_end_matches('*')) {
                    found = true;
                    // \cmidrule(lr){2-3}, \addlinespace[4pt], \specialrule{a}{b}{c}
                    let after = skip_ws(body, end);
                    if bytes.get(after) == Some(&b'(') {
                        if let Some(close) = body[after..].find(')') {
                            end = after + close + 1;
                        }
                    }
                    if let Some((_, e)) = read_optional(body, end) {
                        end = e;
                    }
                    while let Some((_, e)) = read_group(body, end) {
                        end = e;
                    }
                    i = end;
                    continue;
                }
                out.push_str(&body[i..end]);
                i = end;
                continue;
            }
            // control symbol: copy both characters verbatim
            let next = body[i + 1..].chars().next().map_or(0, char::len_utf8);
            out.push_str(&body[i..i + 1 + next]);
            i += 1 + next;
            continue;
        }
        let ch = body[i..].chars().next().unwrap();
        out.push(ch);
        i += ch.len_utf8();
    }
    (out, found)
}

fn find_caption(clean: &str, table_start: usize) -> Option<String> {
    let read_caption = |at: usize| -> Option<String> {
        let mut pos = at + "\\caption".len();
        if let Some((_, e)) = read_optional(clean, pos) {
            pos = e;
        }
        read_group(clean, pos).map(|(g, _)| latex_to_text(g, &mut Vec::new()))
    };
    let captions: Vec<usize> = clean
        .match_indices("\\caption")
        .map(|(i, _)| i)
        .filter(|&i| !clean[i + "\\caption".len()..].chars().next().is_some_and(|c| c.is_ascii_alphabetic()))
        .collect();
    if captions.is_empty() {
        return None;
    }
    // prefer a caption inside the float environment that encloses the tabular
    let mut pos = 0;
    while let Some((b, bend, name)) = find_env_marker(clean, pos, "\\begin", &["table", "table*"]) {
        if b > table_start {
            break;
        }
        if let Some((end, after)) = find_env_end(clean, bend, &name) {
            if end > table_start {
                if let Some(&c) = captions.iter().find(|&&c| c > b && c < end) {
                    return read_caption(c);
                }
                break;
            }
            pos = after;
        } else {
            break;
        }
    }
    let nearest = captions.iter().min_by_key(|&&c| c.abs_diff(table_start))?;
    read_caption(*nearest)
}

/// Locates the first tabular environment and its caption.
pub fn extract_latex_table(src: &str) -> Result<LatexTableSource, LatexError> {
    let clean = strip_comments(src);
    let (begin, after_begin, env) =
        find_env_marker(&clean, 0, "\\begin", &TABULAR_ENVS).ok_or(LatexError::NoTableFound)?;
    let mut diagnostics = Vec::new();

    let mut pos = after_begin;
    if env != "tabular" && env != "longtable" {
        // width argument
        if let Some((_, e)) = read_group(&clean, pos) {
            pos = e;
        }
    }
    if let Some((_, e)) = read_optional(&clean, pos) {
        pos = e;
    }
    let column_spec = match read_group(&clean, pos) {
        Some((spec, e)) => {
            pos = e;
            spec.trim().to_string()
        }
        None => {
            diagnostics.push("tabular has no column specification".to_string());
            String::new()
        }
    };

    let (body_end, after_end) = match find_env_end(&clean, pos, &env) {
        Some(found) => found,
        None => {
            diagnostics.push(format!("unterminated {env} environment"));
            (clean.len(), clean.len())
        }
    };
    let (body, has_hlines) = remove_rules(&clean[pos..body_end]);

    let more = std::iter::successors(find_env_marker(&clean, after_end, "\\begin", &TABULAR_ENVS), |(_, e, _)| {
        find_env_marker(&clean, *e, "\\begin", &TABULAR_ENVS)
    })
    .count();
    if more > 0 {
        diagnostics.push(format!("{} tabular environments found; using the first", more + 1));
    }

    Ok(LatexTableSource {
        tabular_body: body.trim().to_string(),
        column_spec,
        caption: find_caption(&clean, begin),
        has_hlines,
        diagnostics,
    })
}

/// Maps a column specification to per-column alignments.
pub fn parse_column_spec(spec: &str, diagnostics: &mut Vec<String>) -> Vec<Alignment> {
    let mut out = Vec::new();
    let bytes = spec.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'l' => out.push(Alignment::Left),
            b'c' => out.push(Alignment::Center),
            b'r' => out.push(Alignment::Right),
            b'|' | b':' | b' ' | b'\t' | b'\n' | b'\r' => {}
            b'@' | b'!' | b'>' | b'<' => {
                if let Some((_, e)) = read_group(spec, i + 1) {
                    i = e;
                    continue;
                }
            }
            b'*' => {
                if let Some((n, e)) = read_group(spec, i + 1) {
                    if let Some((inner, e2)) = read_group(spec, e) {
                        let n: usize = n.trim().parse().unwrap_or(1);
                        let once = parse_column_spec(inner, diagnostics);
                        for _ in 0..n.min(256) {
                            out.extend_from_slice(&once);
                        }
                        i = e2;
                        continue;
                    }
                }
            }
            other => {
                let c = other as char;
                let mut end = i + 1;
                if let Some((_, e)) = read_group(spec, end) {
                    end = e;
                }
                if c.is_ascii_alphabetic() {
                    diagnostics.push(format!("column type '{}' treated as left-aligned", &spec[i..end]));
                    out.push(Alignment::Left);
                }
                i = end;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Splits `text` at top-level occurrences of a separator. `is_sep` returns the
/// separator length at a byte offset (or 0).
fn split_top_level(text: &str, diagnostics: &mut Vec<String>, is_sep: impl Fn(&str, usize) -> usize) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut parts = Vec::new();
    let mut depth: i64 = 0;
    let mut start = 0;
    let mut i = 0;
    let mut underflow = false;
    while i < bytes.len() {
        if depth == 0 {
            let n = is_sep(text, i);
            if n > 0 {
                parts.push(text[start..i].to_string());
                i += n;
                start = i;
                continue;
            }
        }
        match bytes[i] {
            b'\\' => {
                let next = text[i + 1..].chars().next().map_or(0, char::len_utf8);
                i += 1 + next;
                continue;
            }
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth < 0 {
                    underflow = true;
                    depth = 0;
                }
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(text[start..].to_string());
    if underflow || depth > 0 {
        diagnostics.push("unbalanced braces".to_string());
    }
    parts
}

fn row_separator(text: &str, i: usize) -> usize {
    let rest = &text[i..];
    let len = if rest.starts_with("\\\\") {
        2
    } else if rest.starts_with("\\tabularnewline") {
        "\\tabularnewline".len()
    } else {
        return 0;
    };
    let mut end = i + len;
    if text.as_bytes().get(end) == Some(&b'*') {
        end += 1;
    }
    if let Some((_, e)) = read_optional(text, end) {
        end = e;
    }
    end - i
}

fn cell_separator(text: &str, i: usize) -> usize {
    usize::from(text.as_bytes()[i] == b'&')
}

/// Converts cell markup to plain text: formatting and unknown commands are
/// dropped but their brace contents kept; escapes resolve to literals.
pub fn latex_to_text(s: &str, diagnostics: &mut Vec<String>) -> String {
    let mut out = String::with_capacity(s.len());
    let bytes = s.as_bytes();
    let mut depth: i64 = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => {
                if let Some((name, end)) = control_word(s, i) {
                    let name = name.trim_end_matches('*');
                    let mut pos = skip_ws(s, end);
                    match name {
                        "textbackslash" => out.push('\\'),
                        "ldots" | "dots" => out.push_str("..."),
                        "pm" => out.push('±'),
                        "times" => out.push('×'),
                        "textcolor" | "colorbox" => {
                            if let Some((_, e)) = read_group(s, pos) {
                                pos = e;
                            }
                        }
                        "begin" | "end" => {
                            if let Some((env, e)) = read_group(s, pos) {
                                pos = e;
                                let env = env.trim();
                                if name == "begin" && TABULAR_ENVS.contains(&env) {
                                    if env != "tabular" && env != "longtable" {
                                        if let Some((_, e)) = read_group(s, pos) {
                                            pos = e;
                                        }
                                    }
                                    if let Some((_, e)) = read_optional(s, pos) {
                                        pos = e;
                                    }
                                    if let Some((_, e)) = read_group(s, pos) {
                                        pos = e;
                                    }
                                }
                            }
                        }
                        "multirow" => {
                            for _ in 0..2 {
                                if let Some((_, e)) = read_optional(s, pos) {
                                    pos = e;
                                }
                                if let Some((_, e)) = read_group(s, pos) {
                                    pos = e;
                                }
                            }
                        }
                        n if DROP_ARG_COMMANDS.contains(&n) => {
                            if let Some((_, e)) = read_optional(s, pos) {
                                pos = e;
                            }
                            while let Some((_, e)) = read_group(s, pos) {
                                pos = e;
                                if n != "rule" && n != "setlength" && n != "includegraphics" {
                                    break;
                                }
                            }
                        }
                        _ => {
                            if let Some((_, e)) = read_optional(s, pos) {
                                pos = e;
                            }
                        }
                    }
                    i = pos;
                    continue;
                }
                let Some(next) = s[i + 1..].chars().next() else {
                    i += 1;
                    continue;
                };
                match next {
                    '%' | '&' | '_' | '#' | '$' | '{' | '}' => out.push(next),
                    '\\' | ' ' | ',' | ';' | ':' => out.push(' '),
                    _ => {}
                }
                i += 1 + next.len_utf8();
            }
            b'{' => {
                depth += 1;
                i += 1;
            }
            b'}' => {
                depth -= 1;
                i += 1;
            }
            b'$' => i += 1,
            b'~' => {
                out.push(' ');
                i += 1;
            }
            _ => {
                let ch = s[i..].chars().next().unwrap();
                out.push(ch);
                i += ch.len_utf8();
            }
        }
    }
    if depth != 0 {
        diagnostics.push(format!("unbalanced braces in cell {:?}", s.trim()));
    }
    out
}

fn expand_cell(cell: &str, out: &mut Vec<String>, diagnostics: &mut Vec<String>) {
    let trimmed = cell.trim();
    if let Some(rest) = trimmed.strip_prefix("\\multicolumn") {
        let base = trimmed.len() - rest.len();
        let parsed = read_group(trimmed, base).and_then(|(n, e1)| {
            let (_, e2) = read_group(trimmed, e1)?;
            let (content, e3) = read_group(trimmed, e2)?;
            Some((n, content, e3))
        });
        if let Some((n, content, end)) = parsed {
            let span: usize = n.trim().parse().unwrap_or(1).clamp(1, 256);
            let mut text = latex_to_text(content, diagnostics);
            text.push_str(&latex_to_text(&trimmed[end..], diagnostics));
            out.push(text);
            out.extend(std::iter::repeat_n(String::new(), span - 1));
            return;
        }
        diagnostics.push("malformed \\multicolumn".to_string());
    }
    out.push(latex_to_text(trimmed, diagnostics));
}

/// Splits the tabular body into a normalized grid.
pub fn parse_latex_table(src: &LatexTableSource) -> LatexParse {
    let mut diagnostics = Vec::new();
    let alignments = parse_column_spec(&src.column_spec, &mut diagnostics);
    let (body, _) = remove_rules(&src.tabular_body);

    let mut rows = Vec::new();
    for raw_row in split_top_level(&body, &mut diagnostics, row_separator) {
        if raw_row.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in split_top_level(&raw_row, &mut diagnostics, cell_separator) {
            expand_cell(&cell, &mut row, &mut diagnostics);
        }
        rows.push(row);
    }

    let widest = rows.iter().map(Vec::len).max().unwrap_or(0);
    if !alignments.is_empty() && widest > alignments.len() {
        diagnostics.push(format!("rows have {} cells but the column spec declares {}", widest, alignments.len()));
    }
    diagnostics.dedup();

    let table = NormalizedTable::new(Vec::new(), rows, alignments, PadMode::Pad)
        .expect("pad mode never fails")
        .with_caption(src.caption.clone());
    if table.padded_cells > 0 {
        diagnostics.push(format!("padded {} cells", table.padded_cells));
    }
    LatexParse { table, diagnostics }
}

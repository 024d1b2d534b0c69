//! Pipe-delimited raw-text tables, optionally introduced by `Team` / `Player`
//! header lines.

use crate::model::{NormalizedTable, PadMode};

pub const TEAM: &str = "Team";
pub const PLAYER: &str = "Player";
pub const UNLABELED: &str = "Unlabeled";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawParseResult {
    /// `(label, table)` in source order; the table carries the same label.
    pub tables: Vec<(String, NormalizedTable)>,
    pub diagnostics: Vec<String>,
}

impl RawParseResult {
    pub fn table_list(&self) -> Vec<NormalizedTable> {
        self.tables.iter().map(|(_, t)| t.clone()).collect()
    }
}

/// Recognizes a header line such as `Team`, `Team:` or `**Player table**`.
fn header_label(line: &str) -> Option<&'static str> {
    if line.contains('|') {
        return None;
    }
    let trimmed = line.trim().trim_matches(|c: char| c == '#' || c == '*' || c == ':' || c.is_whitespace());
    if trimmed.split_whitespace().count() > 3 {
        return None;
    }
    let lower = trimmed.to_lowercase();
    if lower.starts_with("team") {
        Some(TEAM)
    } else if lower.starts_with("player") {
        Some(PLAYER)
    } else {
        None
    }
}

/// Markdown rule rows like `|---|:--:|`.
fn is_separator(line: &str) -> bool {
    let t = line.trim();
    t.contains('-') && t.chars().all(|c| matches!(c, '-' | ':' | '|' | '+' | ' ' | '='))
}

/// Splits one row on `|`, dropping the empty pieces produced by boundary pipes.
pub fn split_row(line: &str) -> Vec<String> {
    let t = line.trim();
    let mut pieces: Vec<&str> = t.split('|').collect();
    if t.starts_with('|') && pieces.len() > 1 {
        pieces.remove(0);
    }
    if t.ends_with('|') && pieces.len() > 1 {
        pieces.pop();
    }
    pieces.into_iter().map(str::to_string).collect()
}

struct Region<'a> {
    label: &'static str,
    lines: Vec<&'a str>,
}

fn regions(text: &str) -> Vec<Region<'_>> {
    let mut out: Vec<Region> = Vec::new();
    let mut current: Option<Region> = None;
    for line in text.lines() {
        if let Some(label) = header_label(line) {
            if let Some(r) = current.take() {
                out.push(r);
            }
            current = Some(Region { label, lines: Vec::new() });
            continue;
        }
        if line.trim().is_empty() {
            // a labeled header followed directly by a blank line keeps waiting for its rows
            match &current {
                Some(r) if r.label != UNLABELED && r.lines.is_empty() => {}
                _ => {
                    if let Some(r) = current.take() {
                        out.push(r);
                    }
                }
            }
            continue;
        }
        match &mut current {
            Some(r) => {
                if r.label == UNLABELED && !line.contains('|') {
                    out.push(current.take().unwrap());
                } else {
                    r.lines.push(line);
                }
            }
            None => {
                if line.contains('|') {
                    current = Some(Region { label: UNLABELED, lines: vec![line] });
                }
            }
        }
    }
    if let Some(r) = current.take() {
        out.push(r);
    }
    out
}

/// Finds every table region, splits rows on newlines and cells on `|`.
/// The first row of a region becomes the column names.
pub fn parse_raw_tables(text: &str) -> RawParseResult {
    let mut result = RawParseResult::default();
    let mut seen_team = false;
    let mut seen_player = false;

    for region in regions(text) {
        let rows: Vec<Vec<String>> = region.lines.iter().filter(|l| !is_separator(l)).map(|l| split_row(l)).collect();
        if rows.len() < 2 {
            result.diagnostics.push(format!("{} table dropped: fewer than 1 data row", region.label));
            continue;
        }
        let slot = match region.label {
            TEAM => &mut seen_team,
            PLAYER => &mut seen_player,
            _ => &mut false,
        };
        let label = if *slot {
            result.diagnostics.push(format!("duplicate {} table kept as {}", region.label, UNLABELED));
            UNLABELED
        } else {
            *slot = region.label != UNLABELED;
            region.label
        };
        let mut rows = rows.into_iter();
        let header = rows.next().unwrap_or_default();
        let table = NormalizedTable::new(header, rows.collect(), Vec::new(), PadMode::Pad)
            .expect("pad mode never fails")
            .with_label(label);
        if table.padded_cells > 0 {
            result.diagnostics.push(format!("{} table: padded {} cells", label, table.padded_cells));
        }
        result.tables.push((label.to_string(), table));
    }

    if result.tables.is_empty() {
        result.diagnostics.push("no tables found".to_string());
    }
    result
}

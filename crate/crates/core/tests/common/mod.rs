//! Deterministic synthetic tables and corpora shared by the integration tests
//! and the fixture-writing example.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tablescore::corpus::{AbilityAnnotation, CorpusItem, PredictionRecord};
use tablescore::model::{Alignment, NormalizedTable, PadMode, TableFormat};
use tablescore::render::{render_html, render_latex, render_raw};

pub const FIXTURE_SEED: u64 = 2023;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const TEAMS: [&str; 16] = [
    "Suns",
    "Grizzlies",
    "Celtics",
    "Lakers",
    "Heat",
    "Bulls",
    "Knicks",
    "Spurs",
    "Jazz",
    "Nets",
    "Hawks",
    "Magic",
    "Kings",
    "Pistons",
    "Raptors",
    "Bucks",
];

pub const PLAYERS: [&str; 24] = [
    "Eric Bledsoe",
    "Marc Gasol",
    "Mike Conley",
    "Isaiah Thomas",
    "Devin Booker",
    "Zach Randolph",
    "Al Horford",
    "Jae Crowder",
    "Tony Allen",
    "Avery Bradley",
    "Tyson Chandler",
    "T.J. Warren",
    "Kelly Olynyk",
    "Marcus Smart",
    "JaMychal Green",
    "Alex Len",
    "Vince Carter",
    "Amir Johnson",
    "Troy Daniels",
    "Brandan Wright",
    "Jerami Grant",
    "Terry Rozier",
    "P.J. Tucker",
    "Leandro Barbosa",
];

const TEAM_STATS: [&str; 10] = [
    "Wins",
    "Losses",
    "Total points",
    "Points in 1st quarter",
    "Points in 2nd quarter",
    "Rebounds",
    "Assists",
    "Turnovers",
    "Percentage of field goals",
    "Percentage of 3 points",
];

const PLAYER_STATS: [&str; 12] = [
    "Minutes played",
    "Points",
    "Rebounds",
    "Assists",
    "Field goals made",
    "Field goals attempted",
    "Field goal percentage",
    "Steals",
    "Blocks",
    "Turnovers",
    "3-pointers made",
    "Free throws made",
];

const WORDS: [&str; 24] = [
    "alpha", "model", "baseline", "accuracy", "recall", "dataset", "train", "test", "epoch", "loss", "layer", "token",
    "method", "score", "ours", "prior", "delta", "gamma", "large", "small", "split", "ratio", "mean", "total",
];

fn stat_value<R: Rng>(rng: &mut R, name: &str) -> String {
    if name.contains("ercent") {
        format!("{}%", rng.gen_range(20..65))
    } else if name == "Minutes played" {
        format!("{}:{:02}", rng.gen_range(5..42), rng.gen_range(0..60))
    } else if name == "Wins" || name == "Losses" {
        rng.gen_range(0..60).to_string()
    } else {
        rng.gen_range(0..120).to_string()
    }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Team table: a leading unnamed column of team names plus `cols - 1` stats.
pub fn team_table<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> NormalizedTable {
    let mut header = vec![String::new()];
    header.extend(TEAM_STATS[..cols - 1].iter().map(|s| s.to_string()));
    let names: Vec<&&str> = TEAMS.choose_multiple(rng, rows).collect();
    let body = names
        .iter()
        .map(|n| {
            let mut r = vec![n.to_string()];
            r.extend(header[1..].iter().map(|h| stat_value(rng, h)));
            r
        })
        .collect();
    NormalizedTable::new(header, body, vec![], PadMode::Strict).unwrap().with_label("Team")
}

pub fn player_table<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> NormalizedTable {
    let mut header = vec![String::new()];
    header.extend(PLAYER_STATS[..cols - 1].iter().map(|s| s.to_string()));
    let names: Vec<&&str> = PLAYERS.choose_multiple(rng, rows).collect();
    let body = names
        .iter()
        .map(|n| {
            let mut r = vec![n.to_string()];
            r.extend(header[1..].iter().map(|h| stat_value(rng, h)));
            r
        })
        .collect();
    NormalizedTable::new(header, body, vec![], PadMode::Strict).unwrap().with_label("Player")
}

/// A table with distinct word headers, distinct word row names in the first
/// column and numeric cells. `rows` counts data rows only.
pub fn generic_table<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> NormalizedTable {
    let mut pool = WORDS.to_vec();
    pool.shuffle(rng);
    let header: Vec<String> = pool[..cols].iter().map(|w| w[..1].to_uppercase() + &w[1..]).collect();
    pool.shuffle(rng);
    let body = (0..rows)
        .map(|r| {
            let mut row = vec![format!("{} {}", pool[r % pool.len()], r + 1)];
            row.extend((1..cols).map(|_| format!("{}.{}", rng.gen_range(0..100), rng.gen_range(0..10))));
            row
        })
        .collect();
    let alignments =
        (0..cols).map(|_| *[Alignment::Left, Alignment::Center, Alignment::Right].choose(rng).unwrap()).collect();
    NormalizedTable::new(header, body, alignments, PadMode::Strict).unwrap()
}

fn caption<R: Rng>(rng: &mut R) -> String {
    let a = WORDS.choose(rng).unwrap();
    let b = WORDS.choose(rng).unwrap();
    format!("Comparison of {a} and {b} results")
}

fn describe(t: &NormalizedTable) -> String {
    let mut s = String::new();
    for (r, row) in t.cells().iter().enumerate() {
        if r > 0 {
            s.push(' ');
        }
        let facts: Vec<String> = t.column_names.iter().zip(row).skip(1).map(|(h, v)| format!("{h} {v}")).collect();
        s.push_str(&format!("{}: {}.", row[0], facts.join(", ")));
    }
    s
}

/// Twenty items per format with shapes chosen so the per-table means land on
/// the target corpus averages (raw 7.25 x 8.75, LaTeX 2.75 x 4.45, HTML
/// 5.50 x 3.55 as parsed).
pub fn corpus60() -> Vec<CorpusItem> {
    let mut rng = rng(FIXTURE_SEED);
    let mut items = Vec::with_capacity(60);

    for i in 0..20 {
        // teams: 2 rows x 8 cols; players alternate 12/13 rows and 9/10 cols
        let team = team_table(&mut rng, 2, 8);
        let player = player_table(&mut rng, 12 + i % 2, 9 + (i / 2) % 2);
        let input = format!("{} {}", describe(&team), describe(&player));
        items.push(CorpusItem {
            id: format!("raw-{i:02}"),
            instruction: "Summarize the game statistics as a Team table and a Player table.".into(),
            input,
            output: render_raw(&[team, player]),
            format: TableFormat::RawText,
        });
    }

    // LaTeX rows include the header line: 15 x 3 + 5 x 2 = 55; cols 9 x 5 + 11 x 4 = 89
    let mut latex_rows: Vec<usize> = [vec![3; 15], vec![2; 5]].concat();
    let mut latex_cols: Vec<usize> = [vec![5; 9], vec![4; 11]].concat();
    latex_rows.shuffle(&mut rng);
    latex_cols.shuffle(&mut rng);
    for i in 0..20 {
        let t = generic_table(&mut rng, latex_rows[i] - 1, latex_cols[i]);
        let t = t.with_caption(Some(caption(&mut rng)));
        items.push(CorpusItem {
            id: format!("latex-{i:02}"),
            instruction: "Write a LaTeX table with the described format and content.".into(),
            input: describe(&t),
            output: render_latex(&t),
            format: TableFormat::Latex,
        });
    }

    // HTML data rows 10 x 5 + 10 x 6 = 110; cols 11 x 4 + 9 x 3 = 71
    let mut html_rows: Vec<usize> = [vec![5; 10], vec![6; 10]].concat();
    let mut html_cols: Vec<usize> = [vec![4; 11], vec![3; 9]].concat();
    html_rows.shuffle(&mut rng);
    html_cols.shuffle(&mut rng);
    for i in 0..20 {
        let t = generic_table(&mut rng, html_rows[i], html_cols[i]);
        let title = caption(&mut rng);
        items.push(CorpusItem {
            id: format!("html-{i:02}"),
            instruction: "Write an HTML page containing the described table.".into(),
            input: describe(&t),
            output: format!("<div>\n<h3>{title}</h3>\n{}</div>\n", render_html(&t)),
            format: TableFormat::Html,
        });
    }
    items
}

pub fn to_jsonl<T: serde::Serialize>(records: &[T]) -> String {
    records.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

/// Random gold document in `fmt`, roughly the corpus shape.
pub fn random_gold<R: Rng>(rng: &mut R, fmt: TableFormat) -> (Vec<NormalizedTable>, String) {
    match fmt {
        TableFormat::RawText => {
            let team_cols = rng.gen_range(4..9);
            let team = team_table(rng, 2, team_cols);
            let (rows, cols) = (rng.gen_range(4..14), rng.gen_range(4..11));
            let player = player_table(rng, rows, cols);
            let tables = vec![team, player];
            let text = render_raw(&tables);
            (tables, text)
        }
        TableFormat::Latex => {
            let (rows, cols) = (rng.gen_range(2..8), rng.gen_range(2..7));
            let t = generic_table(rng, rows, cols);
            let t = t.with_caption(Some(caption(rng)));
            let text = render_latex(&t);
            (vec![t], text)
        }
        TableFormat::Html => {
            let (rows, cols) = (rng.gen_range(2..9), rng.gen_range(2..6));
            let t = generic_table(rng, rows, cols);
            let text = render_html(&t);
            (vec![t], text)
        }
    }
}

fn is_data_line(line: &str, fmt: TableFormat) -> bool {
    match fmt {
        TableFormat::RawText => line.starts_with('|'),
        TableFormat::Latex => line.ends_with("\\\\"),
        TableFormat::Html => line.trim_start().starts_with("<tr><td>"),
    }
}

/// Text-level edits used to build imperfect predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Identity,
    DropLastRow,
    CorruptLastCell,
    Empty,
}

pub fn mutate(text: &str, fmt: TableFormat, m: Mutation) -> String {
    let lines: Vec<&str> = text.lines().collect();
    let last = lines.iter().rposition(|l| is_data_line(l, fmt));
    let mut out: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    match (m, last) {
        (Mutation::Identity, _) | (_, None) => return text.to_string(),
        (Mutation::Empty, _) => return String::new(),
        (Mutation::DropLastRow, Some(i)) => {
            out.remove(i);
        }
        (Mutation::CorruptLastCell, Some(i)) => {
            let line = &out[i];
            let cut = match fmt {
                TableFormat::RawText => line.trim_end_matches(" |").rfind("| ").map(|p| (p + 2, line.len() - 2)),
                TableFormat::Latex => line.rfind("& ").map(|p| (p + 2, line.len() - 3)),
                TableFormat::Html => line.rfind("<td>").map(|p| (p + 4, line.rfind("</td>").unwrap())),
            };
            if let Some((a, b)) = cut {
                out[i] = format!("{}zzz{}", &line[..a], &line[b..]);
            }
        }
    }
    let mut s = out.join("\n");
    s.push('\n');
    s
}

pub fn identity_predictions(items: &[CorpusItem]) -> Vec<PredictionRecord> {
    items.iter().map(|i| PredictionRecord { id: i.id.clone(), prediction: i.output.clone() }).collect()
}

/// Cycles through the mutations; every tenth item has no prediction at all.
pub fn mixed_predictions(items: &[CorpusItem]) -> Vec<PredictionRecord> {
    items
        .iter()
        .enumerate()
        .filter(|(n, _)| n % 10 != 9)
        .map(|(n, i)| {
            let m = [Mutation::Identity, Mutation::DropLastRow, Mutation::CorruptLastCell, Mutation::Empty][n % 4];
            PredictionRecord { id: i.id.clone(), prediction: mutate(&i.output, i.format, m) }
        })
        .collect()
}

pub fn annotations() -> Vec<AbilityAnnotation> {
    vec![
        AbilityAnnotation {
            model: "model-a".into(),
            coverage: 8.5,
            formatting: 9.0,
            reasoning: 6.0,
            comprehension: 7.5,
            pragmatics: 7.0,
            hallucination_control: 5.5,
        },
        AbilityAnnotation {
            model: "model-b".into(),
            coverage: 6.0,
            formatting: 4.5,
            reasoning: 3.0,
            comprehension: 5.0,
            pragmatics: 4.0,
            hallucination_control: 6.5,
        },
    ]
}

pub fn reformat(value: &str) -> Option<String> {
    if let Some(v) = value.strip_suffix('%') {
        return Some(v.to_string());
    }
    if let Some((m, s)) = value.split_once(':') {
        let minutes = m.parse::<f64>().ok()? + s.parse::<f64>().ok()? / 60.0;
        // only exact binary fractions survive a decimal round trip
        return (minutes * 4.0).fract().eq(&0.0).then(|| format!("{minutes}"));
    }
    value.parse::<u32>().ok().map(|v| format!("{v}.0"))
}

/// Plants exactly (k1, k2, k3, k4) errors in a copy of `gold`.
pub fn plant<R: Rng>(rng: &mut R, gold: &NormalizedTable, k: [usize; 4]) -> Option<NormalizedTable> {
    let rows = gold.rows();
    let cols = gold.cols();
    let mut header = gold.column_names.clone();
    let mut grid: Vec<Vec<String>> = gold.cells().to_vec();

    let mut row_ids: Vec<usize> = (0..rows).collect();
    row_ids.shuffle(rng);
    let (deleted, kept) = row_ids.split_at(k[0].min(rows.saturating_sub(1)));
    if deleted.len() != k[0] {
        return None;
    }

    let mut renamable: Vec<usize> = (1..cols).collect();
    renamable.shuffle(rng);
    if renamable.len() < k[1] {
        return None;
    }
    for &c in &renamable[..k[1]] {
        header[c].pop();
    }

    let mut cells: Vec<(usize, usize)> = kept.iter().flat_map(|&r| (1..cols).map(move |c| (r, c))).collect();
    cells.shuffle(rng);
    let mut iter = cells.into_iter();
    let mut corrupted = 0;
    let mut reformatted = 0;
    for (r, c) in iter.by_ref() {
        if corrupted == k[2] {
            break;
        }
        grid[r][c] = "1234567".to_string();
        corrupted += 1;
    }
    for (r, c) in iter {
        if reformatted == k[3] {
            break;
        }
        if let Some(v) = reformat(&grid[r][c]) {
            grid[r][c] = v;
            reformatted += 1;
        }
    }
    if corrupted != k[2] || reformatted != k[3] {
        return None;
    }
    let kept_rows: Vec<Vec<String>> = (0..rows).filter(|r| !deleted.contains(r)).map(|r| grid[r].clone()).collect();
    let t = NormalizedTable::new(header, kept_rows, vec![], PadMode::Strict).unwrap();
    Some(match &gold.label {
        Some(l) => t.with_label(l.clone()),
        None => t,
    })
}

//! Content and structure H-Scores for a (prediction, gold) pair.
//!
//! Content compares cell strings after pairing tables and aligning rows and
//! columns. Structure is format specific and always the unweighted mean of
//! the components reported in [`ScoreReport::components`]:
//!
//! | format | components |
//! |--------|------------|
//! | raw text | `column_names`, `row_count`, `column_count` |
//! | LaTeX | `row_count`, `column_count`, `caption`, `alignment` |
//! | HTML | `tree`, `cell_count` |

pub mod align;
pub mod errors;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use align::{
    align_tables, content_score, greedy_match, pair_tables, table_content_score, CellAlignment, TablePairing,
};
pub use errors::{canonical_number, classify_errors, ErrorReport};

use crate::model::{NormalizedTable, TableFormat};
use crate::parse::{self, HtmlDocument, LatexParse, LatexTableSource, RawParseResult};
use crate::similarity::{string_similarity, SimilarityScore};

pub type Components = BTreeMap<String, SimilarityScore>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub content: SimilarityScore,
    pub structure: SimilarityScore,
    pub components: Components,
    pub diagnostics: Vec<String>,
}

/// A structure score with its components.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureScore {
    pub score: SimilarityScore,
    pub components: Components,
}

impl StructureScore {
    fn from_components(components: Components) -> Self {
        let values: Vec<SimilarityScore> = components.values().copied().collect();
        StructureScore { score: SimilarityScore::mean(&values), components }
    }

    fn uniform(names: &[&str], value: SimilarityScore) -> Self {
        StructureScore::from_components(names.iter().map(|n| (n.to_string(), value)).collect())
    }
}

const RAW_COMPONENTS: [&str; 3] = ["column_names", "row_count", "column_count"];
const LATEX_COMPONENTS: [&str; 4] = ["row_count", "column_count", "caption", "alignment"];

/// One parsed side of a comparison.
#[derive(Debug, Clone)]
pub enum ParsedDocument {
    Raw(RawParseResult),
    Latex(Option<Box<(LatexTableSource, LatexParse)>>, Vec<String>),
    Html(HtmlDocument),
}

impl ParsedDocument {
    pub fn parse(text: &str, fmt: TableFormat) -> Self {
        match fmt {
            TableFormat::RawText => ParsedDocument::Raw(parse::parse_raw_tables(text)),
            TableFormat::Latex => match parse::extract_latex_table(text) {
                Ok(src) => {
                    let parsed = parse::parse_latex_table(&src);
                    ParsedDocument::Latex(Some(Box::new((src, parsed))), Vec::new())
                }
                Err(e) => ParsedDocument::Latex(None, vec![e.to_string()]),
            },
            TableFormat::Html => ParsedDocument::Html(parse::parse_html(text)),
        }
    }

    pub fn tables(&self) -> Vec<NormalizedTable> {
        match self {
            ParsedDocument::Raw(r) => r.table_list(),
            ParsedDocument::Latex(Some(b), _) => vec![b.1.table.clone()],
            ParsedDocument::Latex(None, _) => Vec::new(),
            ParsedDocument::Html(h) => h.tables.clone(),
        }
    }

    pub fn diagnostics(&self) -> Vec<String> {
        match self {
            ParsedDocument::Raw(r) => r.diagnostics.clone(),
            ParsedDocument::Latex(Some(b), extra) => {
                let (src, p) = &**b;
                src.diagnostics.iter().chain(&p.diagnostics).chain(extra).cloned().collect()
            }
            ParsedDocument::Latex(None, extra) => extra.clone(),
            ParsedDocument::Html(h) => h.diagnostics.clone(),
        }
    }
}

fn caption_similarity(pred: Option<&str>, gold: Option<&str>) -> SimilarityScore {
    match (pred.filter(|s| !s.is_empty()), gold.filter(|s| !s.is_empty())) {
        (None, None) => SimilarityScore::ONE,
        (Some(p), Some(g)) => string_similarity(p, g),
        _ => SimilarityScore::ZERO,
    }
}

/// Row and column counts, caption and alignment markers. A side without a
/// tabular (`None`) scores 0 unless both sides lack one.
pub fn structure_score_latex(
    pred: Option<(&NormalizedTable, &LatexTableSource)>,
    gold: Option<(&NormalizedTable, &LatexTableSource)>,
) -> StructureScore {
    let ((pt, ps), (gt, gs)) = match (pred, gold) {
        (Some(p), Some(g)) => (p, g),
        (None, None) => return StructureScore::uniform(&LATEX_COMPONENTS, SimilarityScore::ONE),
        _ => return StructureScore::uniform(&LATEX_COMPONENTS, SimilarityScore::ZERO),
    };
    let matching = pt.alignments.iter().zip(&gt.alignments).filter(|(a, b)| a == b).count();
    let widest = pt.alignments.len().max(gt.alignments.len());
    let alignment =
        if widest == 0 { SimilarityScore::ONE } else { SimilarityScore::new(matching as f64 / widest as f64) };
    let caption = caption_similarity(
        pt.caption.as_deref().or(ps.caption.as_deref()),
        gt.caption.as_deref().or(gs.caption.as_deref()),
    );
    let mut c = Components::new();
    c.insert("row_count".into(), SimilarityScore::ratio(pt.rows(), gt.rows()));
    c.insert("column_count".into(), SimilarityScore::ratio(pt.cols(), gt.cols()));
    c.insert("caption".into(), caption);
    c.insert("alignment".into(), alignment);
    StructureScore::from_components(c)
}

/// Similarity of the serialized structure trees and of the total cell counts.
pub fn structure_score_html(pred: &HtmlDocument, gold: &HtmlDocument) -> StructureScore {
    let tree =
        string_similarity(&parse::serialize_structure_tree(&pred.tree), &parse::serialize_structure_tree(&gold.tree));
    let mut c = Components::new();
    c.insert("tree".into(), tree);
    c.insert("cell_count".into(), SimilarityScore::ratio(pred.cell_count(), gold.cell_count()));
    StructureScore::from_components(c)
}

/// Column-name similarity and row/column count ratios per paired table;
/// unpaired tables contribute 0 to every component.
pub fn structure_score_raw(pred: &RawParseResult, gold: &RawParseResult) -> StructureScore {
    let pt = pred.table_list();
    let gt = gold.table_list();
    let pairing = pair_tables(&pt, &gt);
    let slots = pairing.slots();
    if slots == 0 {
        return StructureScore::uniform(&RAW_COMPONENTS, SimilarityScore::ONE);
    }
    let mut sums = [0.0f64; 3];
    for &(p, g) in &pairing.pairs {
        let (p, g) = (&pt[p], &gt[g]);
        let widest = p.column_names.len().max(g.column_names.len());
        let names = if widest == 0 {
            1.0
        } else {
            p.column_names.iter().zip(&g.column_names).map(|(a, b)| string_similarity(a, b).value()).sum::<f64>()
                / widest as f64
        };
        sums[0] += names;
        sums[1] += SimilarityScore::ratio(p.rows(), g.rows()).value();
        sums[2] += SimilarityScore::ratio(p.cols(), g.cols()).value();
    }
    let components = RAW_COMPONENTS
        .iter()
        .zip(sums)
        .map(|(name, s)| (name.to_string(), SimilarityScore::new(s / slots as f64)))
        .collect();
    StructureScore::from_components(components)
}

fn structure_of(pred: &ParsedDocument, gold: &ParsedDocument) -> StructureScore {
    match (pred, gold) {
        (ParsedDocument::Raw(p), ParsedDocument::Raw(g)) => structure_score_raw(p, g),
        (ParsedDocument::Latex(p, _), ParsedDocument::Latex(g, _)) => {
            structure_score_latex(p.as_deref().map(|(s, t)| (&t.table, s)), g.as_deref().map(|(s, t)| (&t.table, s)))
        }
        (ParsedDocument::Html(p), ParsedDocument::Html(g)) => structure_score_html(p, g),
        _ => unreachable!("both sides are parsed with the same format"),
    }
}

fn tagged(side: &str, diagnostics: Vec<String>) -> impl Iterator<Item = String> + '_ {
    diagnostics.into_iter().map(move |d| format!("{side}: {d}"))
}

/// Parses both texts in `fmt` and computes both H-Scores. Never fails: parse
/// problems surface as low scores plus diagnostics.
pub fn score_pair(pred_text: &str, gold_text: &str, fmt: TableFormat) -> ScoreReport {
    let pred = ParsedDocument::parse(pred_text, fmt);
    let gold = ParsedDocument::parse(gold_text, fmt);
    score_parsed(&pred, &gold)
}

pub fn score_parsed(pred: &ParsedDocument, gold: &ParsedDocument) -> ScoreReport {
    let content = content_score(&pred.tables(), &gold.tables());
    let structure = structure_of(pred, gold);
    let diagnostics = tagged("pred", pred.diagnostics()).chain(tagged("gold", gold.diagnostics())).collect();
    ScoreReport { content, structure: structure.score, components: structure.components, diagnostics }
}

/// Error taxonomy for a text pair.
pub fn classify_pair(pred_text: &str, gold_text: &str, fmt: TableFormat) -> ErrorReport {
    let pred = ParsedDocument::parse(pred_text, fmt);
    let gold = ParsedDocument::parse(gold_text, fmt);
    classify_errors(&pred.tables(), &gold.tables())
}

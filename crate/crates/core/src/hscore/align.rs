//! Table pairing, row/column alignment and the content score.

use crate::model::NormalizedTable;
use crate::parse::raw::UNLABELED;
use crate::similarity::{string_similarity, SimilarityScore};

fn real_label(t: &NormalizedTable) -> Option<&str> {
    t.label.as_deref().filter(|l| *l != UNLABELED)
}

/// Tables matched between prediction and gold.
#[derive(Debug, Clone, Default)]
pub struct TablePairing {
    /// `(pred_index, gold_index)`, ordered by gold index.
    pub pairs: Vec<(usize, usize)>,
    pub unpaired_pred: Vec<usize>,
    pub unpaired_gold: Vec<usize>,
}

impl TablePairing {
    /// Pairs plus unpaired tables; the denominator of per-table means.
    pub fn slots(&self) -> usize {
        self.pairs.len() + self.unpaired_pred.len() + self.unpaired_gold.len()
    }
}

/// Labeled tables (`Team`, `Player`) pair by label; the rest pair in source
/// order as long as their labels do not conflict.
pub fn pair_tables(pred: &[NormalizedTable], gold: &[NormalizedTable]) -> TablePairing {
    let mut pred_used = vec![false; pred.len()];
    let mut gold_pair: Vec<Option<usize>> = vec![None; gold.len()];

    for (g, gt) in gold.iter().enumerate() {
        if let Some(label) = real_label(gt) {
            if let Some(p) = (0..pred.len()).find(|&p| !pred_used[p] && real_label(&pred[p]) == Some(label)) {
                pred_used[p] = true;
                gold_pair[g] = Some(p);
            }
        }
    }
    let mut next_pred = 0;
    for (g, gt) in gold.iter().enumerate() {
        if gold_pair[g].is_some() {
            continue;
        }
        while next_pred < pred.len() && pred_used[next_pred] {
            next_pred += 1;
        }
        if next_pred >= pred.len() {
            break;
        }
        let compatible = match (real_label(gt), real_label(&pred[next_pred])) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        if compatible {
            pred_used[next_pred] = true;
            gold_pair[g] = Some(next_pred);
        }
    }

    let mut pairing = TablePairing::default();
    for (g, p) in gold_pair.iter().enumerate() {
        match p {
            Some(p) => pairing.pairs.push((*p, g)),
            None => pairing.unpaired_gold.push(g),
        }
    }
    pairing.unpaired_pred = (0..pred.len()).filter(|&p| !pred_used[p]).collect();
    pairing
}

/// Greedy one-to-one matching of two name lists: repeatedly take the most
/// similar remaining pair (ties: lower gold index, then lower pred index).
/// Returns `(pred_index, gold_index)` pairs, `min(len)` of them.
pub fn greedy_match(pred: &[String], gold: &[String]) -> Vec<(usize, usize)> {
    let mut candidates = Vec::with_capacity(pred.len() * gold.len());
    for (p, pn) in pred.iter().enumerate() {
        for (g, gn) in gold.iter().enumerate() {
            candidates.push((string_similarity(pn, gn).value(), g, p));
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let want = pred.len().min(gold.len());
    let mut pred_used = vec![false; pred.len()];
    let mut gold_used = vec![false; gold.len()];
    let mut out = Vec::with_capacity(want);
    for (_, g, p) in candidates {
        if out.len() == want {
            break;
        }
        if !pred_used[p] && !gold_used[g] {
            pred_used[p] = true;
            gold_used[g] = true;
            out.push((p, g));
        }
    }
    out.sort_by_key(|&(_, g)| g);
    out
}

fn positional(n_pred: usize, n_gold: usize) -> Vec<(usize, usize)> {
    (0..n_pred.min(n_gold)).map(|i| (i, i)).collect()
}

/// Row and column correspondence between two tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellAlignment {
    /// `(pred_row, gold_row)` sorted by gold row.
    pub rows: Vec<(usize, usize)>,
    /// `(pred_col, gold_col)` sorted by gold column.
    pub cols: Vec<(usize, usize)>,
    /// Prediction column holding the row names, when rows were matched on
    /// them. It is the column aligned with the gold first column.
    pub row_name_col: Option<usize>,
    pub by_column_name: bool,
}

impl CellAlignment {
    pub fn by_row_name(&self) -> bool {
        self.row_name_col.is_some()
    }
}

/// Columns by column-name similarity, then rows by the similarity of their
/// names: the gold first column against whichever prediction column was
/// aligned with it. Both fall back to positional order when names are missing.
pub fn align_tables(pred: &NormalizedTable, gold: &NormalizedTable) -> CellAlignment {
    let by_column_name = !pred.column_names.is_empty() && !gold.column_names.is_empty();
    let cols = if by_column_name {
        greedy_match(&pred.column_names, &gold.column_names)
    } else {
        positional(pred.cols(), gold.cols())
    };
    let row_name_col = if pred.row_names.is_empty() || gold.row_names.is_empty() {
        None
    } else {
        cols.iter().find(|&&(_, g)| g == 0).map(|&(p, _)| p)
    };
    let rows = match row_name_col {
        Some(pc) => {
            let keys: Vec<String> = (0..pred.rows()).map(|r| pred.cell(r, pc).unwrap_or("").to_string()).collect();
            greedy_match(&keys, &gold.row_names)
        }
        None => positional(pred.rows(), gold.rows()),
    };
    CellAlignment { rows, cols, row_name_col, by_column_name }
}

/// Mean cell similarity over the union of both grids under `alignment`;
/// cells without a partner score 0. Sums run in gold row-major order.
pub fn table_content_score(
    pred: &NormalizedTable,
    gold: &NormalizedTable,
    alignment: &CellAlignment,
) -> SimilarityScore {
    let aligned = alignment.rows.len() * alignment.cols.len();
    let union = pred.cell_count() + gold.cell_count() - aligned;
    if union == 0 {
        return SimilarityScore::ONE;
    }
    let mut total = 0.0;
    for &(pr, gr) in &alignment.rows {
        for &(pc, gc) in &alignment.cols {
            let p = pred.cell(pr, pc).unwrap_or("");
            let g = gold.cell(gr, gc).unwrap_or("");
            total += string_similarity(p, g).value();
        }
    }
    SimilarityScore::new(total / union as f64)
}

/// Content H-Score over two table lists: tables are paired, cells aligned and
/// compared, and the per-table scores averaged with unpaired tables counting 0.
pub fn content_score(pred: &[NormalizedTable], gold: &[NormalizedTable]) -> SimilarityScore {
    let pairing = pair_tables(pred, gold);
    let slots = pairing.slots();
    if slots == 0 {
        return SimilarityScore::ONE;
    }
    let total: f64 = pairing
        .pairs
        .iter()
        .map(|&(p, g)| {
            let a = align_tables(&pred[p], &gold[g]);
            table_content_score(&pred[p], &gold[g], &a).value()
        })
        .sum();
    SimilarityScore::new(total / slots as f64)
}

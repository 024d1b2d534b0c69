//! Batch scoring of predictions against a corpus.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::load::{CorpusItem, PredictionRecord};
use super::report::{AggregateReport, MetricValue};
use super::CorpusError;
use crate::gpt::{ChatTransport, GptError, GptScorePair, GptScorer};
use crate::hscore::{classify_errors, score_parsed, ErrorReport, ParsedDocument, ScoreReport};
use crate::model::TableFormat;
use crate::similarity::SimilarityScore;
use crate::text_metrics::{bleu, rouge_l, sentence_bleu};

pub struct EvalOptions<'a> {
    /// Worker threads; 0 means one.
    pub parallelism: usize,
    pub gptscore: Option<&'a GptScorer<Box<dyn ChatTransport>>>,
}

impl Default for EvalOptions<'_> {
    fn default() -> Self {
        EvalOptions { parallelism: 1, gptscore: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GptStatus {
    Full,
    Partial,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GptOutcome {
    pub status: GptStatus,
    /// Both-order mean, or the single successful order when partial.
    pub scores: Option<GptScorePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemResult {
    pub id: String,
    pub format: TableFormat,
    pub missing_prediction: bool,
    pub score: ScoreReport,
    pub errors: ErrorReport,
    pub sentence_bleu: f64,
    pub rouge_l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gptscore: Option<GptOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub report: AggregateReport,
    /// One entry per corpus item, in corpus order.
    pub items: Vec<ItemResult>,
}

fn gpt_outcome(scorer: &GptScorer<Box<dyn ChatTransport>>, pred: &str, gold: &str) -> GptOutcome {
    match scorer.gptscore(pred, gold) {
        Ok(s) => GptOutcome { status: GptStatus::Full, scores: Some(s.pair), error: None },
        Err(GptError::PartialResult { pair, cause, .. }) => {
            GptOutcome { status: GptStatus::Partial, scores: Some(pair), error: Some(cause.to_string()) }
        }
        Err(e) => GptOutcome { status: GptStatus::Failed, scores: None, error: Some(e.to_string()) },
    }
}

fn score_item(item: &CorpusItem, prediction: Option<&str>, opts: &EvalOptions<'_>) -> ItemResult {
    let gold = ParsedDocument::parse(&item.output, item.format);
    let pred_text = prediction.unwrap_or("");
    let pred = ParsedDocument::parse(pred_text, item.format);
    let errors = classify_errors(&pred.tables(), &gold.tables());
    let Some(pred_text) = prediction else {
        return ItemResult {
            id: item.id.clone(),
            format: item.format,
            missing_prediction: true,
            score: ScoreReport {
                content: SimilarityScore::ZERO,
                structure: SimilarityScore::ZERO,
                components: Default::default(),
                diagnostics: vec!["missing prediction".to_string()],
            },
            errors,
            sentence_bleu: 0.0,
            rouge_l: 0.0,
            gptscore: opts.gptscore.map(|_| GptOutcome {
                status: GptStatus::Failed,
                scores: None,
                error: Some("missing prediction".into()),
            }),
        };
    };
    ItemResult {
        id: item.id.clone(),
        format: item.format,
        missing_prediction: false,
        score: score_parsed(&pred, &gold),
        errors,
        sentence_bleu: sentence_bleu(pred_text, &item.output).score,
        rouge_l: rouge_l(pred_text, &item.output),
        gptscore: opts.gptscore.map(|s| gpt_outcome(s, pred_text, &item.output)),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Scores every corpus item. Items are processed on a pool of
/// `parallelism` threads and merged back in corpus order, so the result does
/// not depend on the thread count.
pub fn evaluate(
    corpus: &[CorpusItem],
    predictions: &[PredictionRecord],
    opts: &EvalOptions<'_>,
) -> Result<Evaluation, CorpusError> {
    let index: HashMap<&str, usize> = corpus.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    let mut by_item: Vec<Option<&str>> = vec![None; corpus.len()];
    let mut first_seen: HashMap<&str, usize> = HashMap::new();
    for (n, p) in predictions.iter().enumerate() {
        let &i = index.get(p.id.as_str()).ok_or_else(|| CorpusError::UnknownPrediction { id: p.id.clone() })?;
        if let Some(&first) = first_seen.get(p.id.as_str()) {
            return Err(CorpusError::DuplicateId { id: p.id.clone(), first_line: first + 1, second_line: n + 1 });
        }
        first_seen.insert(&p.id, n);
        by_item[i] = Some(&p.prediction);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| CorpusError::Pool(e.to_string()))?;
    let items: Vec<ItemResult> = pool.install(|| {
        corpus.par_iter().zip(by_item.par_iter()).map(|(item, pred)| score_item(item, *pred, opts)).collect()
    });

    let report = aggregate(corpus, &by_item, &items, opts.gptscore.is_some());
    Ok(Evaluation { report, items })
}

fn aggregate(corpus: &[CorpusItem], preds: &[Option<&str>], items: &[ItemResult], with_gpt: bool) -> AggregateReport {
    let mut metrics = Vec::new();
    if !items.is_empty() {
        let hyps: Vec<&str> = preds.iter().map(|p| p.unwrap_or("")).collect();
        let refs: Vec<&str> = corpus.iter().map(|c| c.output.as_str()).collect();
        let corpus_bleu = bleu(&hyps, &refs).expect("non-empty corpus of equal length");
        let mut push = |name: &str, value: Option<f64>| {
            if let Some(value) = value {
                metrics.push(MetricValue { name: name.to_string(), value });
            }
        };
        push("bleu", Some(corpus_bleu.score));
        push("rouge_l", mean(items.iter().map(|i| i.rouge_l)));
        push("content_hscore", mean(items.iter().map(|i| i.score.content.value())));
        push("format_hscore", mean(items.iter().map(|i| i.score.structure.value())));
        if with_gpt {
            let full = || items.iter().filter_map(|i| i.gptscore.as_ref()).filter(|g| g.status == GptStatus::Full);
            push("content_gptscore", mean(full().filter_map(|g| g.scores).map(|s| s.content_similarity)));
            push("format_gptscore", mean(full().filter_map(|g| g.scores).map(|s| s.structural_similarity)));
        }
    }
    let mut error_totals = ErrorReport::default();
    for i in items {
        error_totals.add(&i.errors);
    }
    let count_gpt = |status| items.iter().filter(|i| i.gptscore.as_ref().is_some_and(|g| g.status == status)).count();
    AggregateReport {
        item_count: items.len(),
        failure_count: items.iter().filter(|i| i.missing_prediction).count(),
        metrics,
        error_totals,
        error_proportions: AggregateReport::proportions(&error_totals),
        gptscore_partial: count_gpt(GptStatus::Partial),
        gptscore_failed: count_gpt(GptStatus::Failed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, output: &str) -> CorpusItem {
        CorpusItem {
            id: id.into(),
            instruction: String::new(),
            input: String::new(),
            output: output.into(),
            format: TableFormat::Html,
        }
    }

    fn pred(id: &str, p: &str) -> PredictionRecord {
        PredictionRecord { id: id.into(), prediction: p.into() }
    }

    #[test]
    fn identity_and_missing() {
        let corpus = vec![item("a", "<ul><li>x y</li></ul>"), item("b", "<ul><li>z</li></ul>")];
        let e = evaluate(&corpus, &[pred("a", "<ul><li>x y</li></ul>")], &EvalOptions::default()).unwrap();
        assert_eq!(e.report.metric("content_hscore"), Some(0.5));
        assert_eq!(e.report.failure_count, 1);
        assert!(e.items[1].missing_prediction);
        let full =
            evaluate(&corpus, &[pred("a", &corpus[0].output), pred("b", &corpus[1].output)], &EvalOptions::default())
                .unwrap();
        assert_eq!(full.report.metric("bleu"), Some(100.0));
        assert_eq!(full.report.metric("rouge_l"), Some(1.0));
    }

    #[test]
    fn unknown_and_duplicate_predictions() {
        let corpus = vec![item("a", "<p>x</p>")];
        assert_eq!(
            evaluate(&corpus, &[pred("zz", "")], &EvalOptions::default()).unwrap_err(),
            CorpusError::UnknownPrediction { id: "zz".into() }
        );
        assert!(matches!(
            evaluate(&corpus, &[pred("a", ""), pred("a", "")], &EvalOptions::default()),
            Err(CorpusError::DuplicateId { .. })
        ));
    }

    #[test]
    fn empty_run() {
        let e = evaluate(&[], &[], &EvalOptions::default()).unwrap();
        assert_eq!(e.report.item_count, 0);
        assert!(e.report.metrics.is_empty());
    }
}

mod common;

use std::sync::atomic::{AtomicUsize, Ordering};

use common::{corpus60, mixed_predictions, to_jsonl};
use rand::Rng;
use tablescore::corpus::{
    emit_report, evaluate, parse_corpus, parse_predictions, CorpusError, CorpusItem, EvalOptions, GptStatus,
    PredictionRecord, ReportFormat,
};
use tablescore::gpt::{
    ChatEndpointConfig, ChatTransport, GptScorer, RecordingTransport, ReplayTransport, TransportError,
};
use tablescore::model::TableFormat;
use tablescore::render::render_raw;

/// Answers (8, 6) except every fifth call, which is unparseable.
struct Flaky(AtomicUsize);

impl ChatTransport for Flaky {
    fn complete(&self, _: &str) -> Result<String, TransportError> {
        let n = self.0.fetch_add(1, Ordering::SeqCst);
        Ok(if n % 5 == 4 {
            "no idea".into()
        } else {
            r#"{"content_similarity": 8, "structural_similarity": 6}"#.into()
        })
    }
}

fn cfg() -> ChatEndpointConfig {
    let mut c = ChatEndpointConfig::new("http://127.0.0.1:9", "fake");
    c.max_retries = 0;
    c.max_in_flight = 1;
    c.retry_base_delay = std::time::Duration::ZERO;
    c
}

#[test]
fn gpt_metrics_are_recorded_and_replayed() {
    let items: Vec<_> = corpus60().into_iter().take(12).collect();
    let preds = mixed_predictions(&items);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transcript.jsonl");

    let recorder: Box<dyn ChatTransport> =
        Box::new(RecordingTransport::new(Flaky(AtomicUsize::new(0)), &path).unwrap());
    let scorer = GptScorer::new(recorder, cfg()).unwrap();
    let live = evaluate(&items, &preds, &EvalOptions { parallelism: 1, gptscore: Some(&scorer) }).unwrap();

    let outcomes: Vec<_> = live.items.iter().map(|i| i.gptscore.as_ref().unwrap()).collect();
    let missing = live.items.iter().filter(|i| i.missing_prediction).count();
    assert_eq!(missing, 1);
    assert!(outcomes.iter().any(|g| g.status == GptStatus::Full));
    assert!(outcomes.iter().any(|g| g.status == GptStatus::Partial));
    assert_eq!(live.report.metric("content_gptscore"), Some(8.0));
    assert_eq!(live.report.metric("format_gptscore"), Some(6.0));
    assert!(live.report.gptscore_failed >= missing);

    let replay: Box<dyn ChatTransport> = Box::new(ReplayTransport::load(&path).unwrap());
    let scorer = GptScorer::new(replay, cfg()).unwrap();
    let again = evaluate(&items, &preds, &EvalOptions { parallelism: 1, gptscore: Some(&scorer) }).unwrap();
    let fmt = ReportFormat::Json;
    assert_eq!(emit_report(&again.report, fmt), emit_report(&live.report, fmt));
}

#[test]
fn prediction_id_problems_are_reported() {
    let items = corpus60();
    let mut preds = mixed_predictions(&items);
    preds.push(preds[0].clone());
    match evaluate(&items, &preds, &EvalOptions::default()) {
        Err(CorpusError::DuplicateId { id, first_line, second_line }) => {
            assert_eq!(id, preds[0].id);
            assert_eq!((first_line, second_line), (1, preds.len()));
        }
        other => panic!("expected DuplicateId, got {other:?}"),
    }
    let mut preds = mixed_predictions(&items);
    preds[3].id = "nope".into();
    assert!(matches!(evaluate(&items, &preds, &EvalOptions::default()), Err(CorpusError::UnknownPrediction { .. })));
}

#[test]
fn loader_keeps_good_lines_and_numbers_bad_ones() {
    let items = corpus60();
    let mut text = to_jsonl(&items[..3]);
    text.push_str("{not json\n\n");
    text.push_str(r#"{"id":"x","instruction":"","input":"","output":"| a |","format":"raw_text","extra":1}"#);
    text.push('\n');
    let loaded = parse_corpus(&text).unwrap();
    assert_eq!(loaded.records.len(), 3);
    assert_eq!(loaded.errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![4, 6]);

    assert!(matches!(parse_predictions("garbage\nmore garbage\n"), Err(CorpusError::MalformedFile { .. })));
    assert!(parse_predictions("\n\n").unwrap().records.is_empty());

    let dup = to_jsonl(&[items[0].clone(), items[1].clone(), items[0].clone()]);
    assert!(matches!(parse_corpus(&dup), Err(CorpusError::DuplicateId { first_line: 1, second_line: 3, .. })));
}

#[test]
fn empty_prediction_set_scores_zero() {
    let items: Vec<_> = corpus60().into_iter().step_by(7).collect();
    let eval = evaluate(&items, &[], &EvalOptions::default()).unwrap();
    assert_eq!(eval.report.failure_count, items.len());
    assert_eq!(eval.report.metric("content_hscore"), Some(0.0));
    assert_eq!(eval.report.metric("bleu"), Some(0.0));
    assert!(eval.report.error_totals.total() > 0);
}

#[test]
fn aggregate_error_totals_equal_planted_counts() {
    let mut rng = common::rng(632);
    let mut items = Vec::new();
    let mut preds = Vec::new();
    let mut planted = [0usize; 4];
    while items.len() < 20 {
        let (tables, gold) = common::random_gold(&mut rng, TableFormat::RawText);
        let k = [rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..4), rng.gen_range(0..4)];
        let Some(player) = common::plant(&mut rng, &tables[1], k) else { continue };
        let id = format!("item-{}", items.len());
        preds.push(PredictionRecord { id: id.clone(), prediction: render_raw(&[tables[0].clone(), player]) });
        items.push(CorpusItem {
            id,
            instruction: String::new(),
            input: String::new(),
            output: gold,
            format: TableFormat::RawText,
        });
        for (total, n) in planted.iter_mut().zip(k) {
            *total += n;
        }
    }
    let totals = evaluate(&items, &preds, &EvalOptions::default()).unwrap().report.error_totals;
    assert_eq!(
        [totals.structure_errors, totals.structure_naming_errors, totals.element_errors, totals.element_format_errors],
        planted
    );
}

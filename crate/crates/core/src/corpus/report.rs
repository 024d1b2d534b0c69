//! Aggregate report and its JSON, CSV and Markdown renderings.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::hscore::ErrorReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
}

/// Share of each error type in the total; all zero when there are no errors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorProportions {
    pub structure_errors: f64,
    pub structure_naming_errors: f64,
    pub element_errors: f64,
    pub element_format_errors: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub item_count: usize,
    /// Items without a prediction.
    pub failure_count: usize,
    /// Means over items, except `bleu` which is corpus level.
    pub metrics: Vec<MetricValue>,
    pub error_totals: ErrorReport,
    pub error_proportions: ErrorProportions,
    pub gptscore_partial: usize,
    pub gptscore_failed: usize,
}

const ERROR_TYPES: [&str; 4] =
    ["structure_errors", "structure_naming_errors", "element_errors", "element_format_errors"];

fn error_counts(e: &ErrorReport) -> [usize; 4] {
    [e.structure_errors, e.structure_naming_errors, e.element_errors, e.element_format_errors]
}

fn proportion_values(p: &ErrorProportions) -> [f64; 4] {
    [p.structure_errors, p.structure_naming_errors, p.element_errors, p.element_format_errors]
}

impl AggregateReport {
    pub fn empty() -> Self {
        AggregateReport {
            item_count: 0,
            failure_count: 0,
            metrics: Vec::new(),
            error_totals: ErrorReport::default(),
            error_proportions: ErrorProportions::default(),
            gptscore_partial: 0,
            gptscore_failed: 0,
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    pub fn proportions(totals: &ErrorReport) -> ErrorProportions {
        let total = totals.total();
        if total == 0 {
            return ErrorProportions::default();
        }
        let share = |n: usize| n as f64 / total as f64;
        ErrorProportions {
            structure_errors: share(totals.structure_errors),
            structure_naming_errors: share(totals.structure_naming_errors),
            element_errors: share(totals.element_errors),
            element_format_errors: share(totals.element_format_errors),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?} (expected json, csv or markdown)")),
        }
    }
}

pub fn emit_report(report: &AggregateReport, fmt: ReportFormat) -> String {
    match fmt {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

/// `metric,value` rows. Floats use the shortest text that parses back to the
/// same value.
fn emit_csv(r: &AggregateReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |k: &str, v: String| w.write_record([k, v.as_str()]).expect("in-memory write");
    row("metric", "value".into());
    row("item_count", r.item_count.to_string());
    row("failure_count", r.failure_count.to_string());
    for m in &r.metrics {
        row(&m.name, m.value.to_string());
    }
    for (name, n) in ERROR_TYPES.iter().zip(error_counts(&r.error_totals)) {
        row(&format!("errors.{name}"), n.to_string());
    }
    for (name, p) in ERROR_TYPES.iter().zip(proportion_values(&r.error_proportions)) {
        row(&format!("error_proportion.{name}"), p.to_string());
    }
    row("gptscore_partial", r.gptscore_partial.to_string());
    row("gptscore_failed", r.gptscore_failed.to_string());
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Reads a report back from its CSV rendering.
pub fn parse_csv_report(text: &str) -> Result<AggregateReport, CorpusError> {
    let bad = |m: String| CorpusError::MalformedFile {
        file: "<csv report>".into(),
        errors: vec![super::LineError { line: 0, message: m }],
    };
    let mut r = AggregateReport::empty();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let (key, value) = (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""));
        let int = || value.parse::<usize>().map_err(|e| bad(format!("{key}: {e}")));
        let float = || value.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
        match key {
            "item_count" => r.item_count = int()?,
            "failure_count" => r.failure_count = int()?,
            "gptscore_partial" => r.gptscore_partial = int()?,
            "gptscore_failed" => r.gptscore_failed = int()?,
            k if k.starts_with("errors.") => {
                let n = int()?;
                let e = &mut r.error_totals;
                match &k[7..] {
                    "structure_errors" => e.structure_errors = n,
                    "structure_naming_errors" => e.structure_naming_errors = n,
                    "element_errors" => e.element_errors = n,
                    "element_format_errors" => e.element_format_errors = n,
                    other => return Err(bad(format!("unknown error type {other}"))),
                }
            }
            k if k.starts_with("error_proportion.") => {
                let v = float()?;
                let p = &mut r.error_proportions;
                match &k[17..] {
                    "structure_errors" => p.structure_errors = v,
                    "structure_naming_errors" => p.structure_naming_errors = v,
                    "element_errors" => p.element_errors = v,
                    "element_format_errors" => p.element_format_errors = v,
                    other => return Err(bad(format!("unknown error type {other}"))),
                }
            }
            k => r.metrics.push(MetricValue { name: k.to_string(), value: float()? }),
        }
    }
    Ok(r)
}

fn emit_markdown(r: &AggregateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Evaluation report\n");
    let _ = writeln!(s, "Items: {} (missing predictions: {})\n", r.item_count, r.failure_count);
    s.push_str("| Metric | Value |\n|---|---:|\n");
    for m in &r.metrics {
        let _ = writeln!(s, "| {} | {:.4} |", m.name, m.value);
    }
    s.push_str("\n| Error type | Count | Proportion |\n|---|---:|---:|\n");
    for ((name, n), p) in
        ERROR_TYPES.iter().zip(error_counts(&r.error_totals)).zip(proportion_values(&r.error_proportions))
    {
        let _ = writeln!(s, "| {name} | {n} | {p:.4} |");
    }
    if r.gptscore_partial + r.gptscore_failed > 0 {
        let _ = writeln!(s, "\nGPTscore: {} partial, {} failed", r.gptscore_partial, r.gptscore_failed);
    }
    s
}

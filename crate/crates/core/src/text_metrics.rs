//! Corpus BLEU and ROUGE-L over a simple punctuation-aware tokenization.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORDER: usize = 4;
pub const SMOOTHING_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TextMetricsError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("{hypotheses} hypotheses but {references} references")]
    LengthMismatch { hypotheses: usize, references: usize },
}

/// Splits on whitespace after detaching punctuation. A `.` or `,` between two
/// digits stays inside the number.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        let numeric_sep = matches!(c, '.' | ',')
            && i > 0
            && chars[i - 1].is_ascii_digit()
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
        if c.is_alphanumeric() || numeric_sep {
            current.push(c);
        } else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            tokens.push(c.to_string());
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// In `[0, 100]`.
    pub score: f64,
    /// Modified n-gram precisions for n = 1..4. Orders the hypothesis has no
    /// n-grams for take the geometric mean of the other orders, so they are
    /// neutral; a zero precision is replaced by [`SMOOTHING_EPSILON`].
    pub precisions: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus-level BLEU: clipped n-gram matches and totals are summed over all
/// items before the precisions are formed.
pub fn bleu<H: AsRef<str>, R: AsRef<str>>(hypotheses: &[H], references: &[R]) -> Result<BleuReport, TextMetricsError> {
    if hypotheses.len() != references.len() {
        return Err(TextMetricsError::LengthMismatch { hypotheses: hypotheses.len(), references: references.len() });
    }
    if hypotheses.is_empty() {
        return Err(TextMetricsError::EmptyCorpus);
    }
    let mut matches = [0usize; MAX_ORDER];
    let mut totals = [0usize; MAX_ORDER];
    let (mut hyp_len, mut ref_len) = (0, 0);
    for (h, r) in hypotheses.iter().zip(references) {
        let h = tokenize(h.as_ref());
        let r = tokenize(r.as_ref());
        hyp_len += h.len();
        ref_len += r.len();
        for n in 1..=MAX_ORDER {
            let ref_counts = ngram_counts(&r, n);
            for (gram, count) in ngram_counts(&h, n) {
                matches[n - 1] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
                totals[n - 1] += count;
            }
        }
    }
    Ok(bleu_from_counts(&matches, &totals, hyp_len, ref_len))
}

fn bleu_from_counts(
    matches: &[usize; MAX_ORDER],
    totals: &[usize; MAX_ORDER],
    hyp_len: usize,
    ref_len: usize,
) -> BleuReport {
    if hyp_len == 0 {
        let (score, bp) = if ref_len == 0 { (100.0, 1.0) } else { (0.0, 0.0) };
        return BleuReport { score, precisions: [1.0; MAX_ORDER], brevity_penalty: bp, hyp_len, ref_len };
    }
    let mut logs = Vec::with_capacity(MAX_ORDER);
    let mut precisions = [f64::NAN; MAX_ORDER];
    for n in 0..MAX_ORDER {
        if totals[n] > 0 {
            let p = if matches[n] == 0 { SMOOTHING_EPSILON } else { matches[n] as f64 / totals[n] as f64 };
            precisions[n] = p;
            logs.push(p.ln());
        }
    }
    let geo = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    for p in precisions.iter_mut().filter(|p| p.is_nan()) {
        *p = geo;
    }
    let brevity_penalty = if hyp_len < ref_len { (1.0 - ref_len as f64 / hyp_len as f64).exp() } else { 1.0 };
    let score = (brevity_penalty * geo * 100.0).clamp(0.0, 100.0);
    BleuReport { score, precisions, brevity_penalty, hyp_len, ref_len }
}

/// BLEU of a single hypothesis against its reference.
pub fn sentence_bleu(hypothesis: &str, reference: &str) -> BleuReport {
    bleu(&[hypothesis], &[reference]).expect("one item on each side")
}

/// Length of the longest common subsequence.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// LCS-based F1. Two empty texts score 1.
pub fn rouge_l(hypothesis: &str, reference: &str) -> f64 {
    let h = tokenize(hypothesis);
    let r = tokenize(reference);
    if h.is_empty() && r.is_empty() {
        return 1.0;
    }
    if h.is_empty() || r.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(&h, &r) as f64;
    let p = lcs / h.len() as f64;
    let rc = lcs / r.len() as f64;
    if p + rc == 0.0 {
        0.0
    } else {
        2.0 * p * rc / (p + rc)
    }
}

/// Mean ROUGE-L over paired items.
pub fn corpus_rouge_l<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[R],
) -> Result<f64, TextMetricsError> {
    if hypotheses.len() != references.len() {
        return Err(TextMetricsError::LengthMismatch { hypotheses: hypotheses.len(), references: references.len() });
    }
    if hypotheses.is_empty() {
        return Err(TextMetricsError::EmptyCorpus);
    }
    let total: f64 = hypotheses.iter().zip(references).map(|(h, r)| rouge_l(h.as_ref(), r.as_ref())).sum();
    Ok(total / hypotheses.len() as f64)
}

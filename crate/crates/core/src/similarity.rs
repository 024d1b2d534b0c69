//! String similarity kernel: Levenshtein, Ratcliff/Obershelp and their average.
//!
//! Everything operates on Unicode scalar values, so a multibyte character is a
//! single edit.

use serde::{Deserialize, Serialize};

/// A similarity value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub const ZERO: SimilarityScore = SimilarityScore(0.0);
    pub const ONE: SimilarityScore = SimilarityScore(1.0);

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            SimilarityScore(0.0)
        } else {
            SimilarityScore(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `min / max` of two counts, 1 when both are zero.
    pub fn ratio(a: usize, b: usize) -> Self {
        let hi = a.max(b);
        if hi == 0 {
            SimilarityScore::ONE
        } else {
            SimilarityScore(a.min(b) as f64 / hi as f64)
        }
    }

    /// Arithmetic mean; 1 for an empty slice.
    pub fn mean(scores: &[SimilarityScore]) -> Self {
        if scores.is_empty() {
            return SimilarityScore::ONE;
        }
        SimilarityScore::new(scores.iter().map(|s| s.0).sum::<f64>() / scores.len() as f64)
    }
}

impl From<SimilarityScore> for f64 {
    fn from(s: SimilarityScore) -> f64 {
        s.0
    }
}

/// Minimum number of single-character insertions, deletions and substitutions.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    // keep the DP row over the shorter input
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, sc) in short.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(lc != sc);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[short.len()]
}

/// `1 - distance / max(|a|, |b|)`, 1 when both are empty.
pub fn levenshtein_similarity(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_similarity_chars(&a, &b)
}

fn levenshtein_similarity_chars(a: &[char], b: &[char]) -> SimilarityScore {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return SimilarityScore::ONE;
    }
    SimilarityScore::new(1.0 - levenshtein_chars(a, b) as f64 / longest as f64)
}

/// Longest common contiguous block as `(start_a, start_b, len)`. Among blocks of
/// maximal length the earliest in `a` wins, then the earliest in `b`.
fn longest_block(a: &[char], b: &[char]) -> (usize, usize, usize) {
    let mut best = (0, 0, 0);
    // run[j + 1] = length of the common suffix ending at a[i], b[j]
    let mut run = vec![0usize; b.len() + 1];
    for (i, ac) in a.iter().enumerate() {
        let mut prev_diag = 0;
        for (j, bc) in b.iter().enumerate() {
            let here = run[j + 1];
            run[j + 1] = if ac == bc { prev_diag + 1 } else { 0 };
            prev_diag = here;
            let k = run[j + 1];
            if k > best.2 {
                best = (i + 1 - k, j + 1 - k, k);
            } else if k == best.2 && k > 0 {
                let (si, sj) = (i + 1 - k, j + 1 - k);
                if si < best.0 || (si == best.0 && sj < best.1) {
                    best = (si, sj, k);
                }
            }
        }
    }
    best
}

/// Total matched characters of the recursive gestalt matching.
fn matched_chars(a: &[char], b: &[char]) -> usize {
    let mut total = 0;
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        if x.is_empty() || y.is_empty() {
            continue;
        }
        let (i, j, k) = longest_block(x, y);
        if k == 0 {
            continue;
        }
        total += k;
        stack.push((&x[..i], &y[..j]));
        stack.push((&x[i + k..], &y[j + k..]));
    }
    total
}

/// Ratcliff/Obershelp gestalt similarity `2M / (|a| + |b|)`, 1 when both empty.
/// No junk heuristic is applied.
pub fn ratcliff_obershelp(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    ratcliff_obershelp_chars(&a, &b)
}

fn ratcliff_obershelp_chars(a: &[char], b: &[char]) -> SimilarityScore {
    let total = a.len() + b.len();
    if total == 0 {
        return SimilarityScore::ONE;
    }
    SimilarityScore::new(2.0 * matched_chars(a, b) as f64 / total as f64)
}

/// Mean of [`levenshtein_similarity`] and [`ratcliff_obershelp`].
pub fn string_similarity(a: &str, b: &str) -> SimilarityScore {
    if a == b {
        return SimilarityScore::ONE;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let lev = levenshtein_similarity_chars(&a, &b).value();
    let ro = ratcliff_obershelp_chars(&a, &b).value();
    SimilarityScore::new((lev + ro) / 2.0)
}

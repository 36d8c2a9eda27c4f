//! Evaluation: segmentation scores, record comparison, P/R/F with nulls,
//! confusion matrices and paired significance tests.

mod compare;
mod segmentation;
mod stats;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use compare::{
    author_match, compare_category, cosine_match, cosine_similarity, email_match, journal_match,
    smith_waterman_similarity, text_match, Category, MatchCounts, COSINE_THRESHOLD, SW_THRESHOLD,
};
pub use segmentation::{segmentation_scores, SegmentationScores};
pub use stats::{bonferroni, mcnemar, mid_ranks, wilcoxon_signed_rank, TestOutcome};

use crate::record::DocumentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f: Option<f64>,
}

impl Prf {
    pub fn from_counts(m: MatchCounts) -> Prf {
        let precision = (m.extracted > 0).then(|| m.matched as f64 / m.extracted as f64);
        let recall = (m.truth > 0).then(|| m.matched as f64 / m.truth as f64);
        let f = match (precision, recall) {
            (None, None) => None,
            (Some(p), Some(r)) if p * r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => Some(0.0),
        };
        Prf { precision, recall, f }
    }
}

/// P/R/F of one category on one document.
pub fn prf(extracted: &DocumentRecord, truth: &DocumentRecord, category: Category) -> Prf {
    Prf::from_counts(compare_category(extracted, truth, category))
}

fn mean_non_null(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Mean of every component over the documents where it is non-null.
pub fn aggregate(scores: &[Prf]) -> Prf {
    Prf {
        precision: mean_non_null(scores.iter().map(|s| s.precision)),
        recall: mean_non_null(scores.iter().map(|s| s.recall)),
        f: mean_non_null(scores.iter().map(|s| s.f)),
    }
}

/// Counts keyed by (true label, predicted label).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelConfusion {
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
}

impl LabelConfusion {
    pub fn add(&mut self, truth: &str, predicted: &str) {
        *self
            .counts
            .entry(truth.to_string())
            .or_default()
            .entry(predicted.to_string())
            .or_default() += 1;
    }

    pub fn row_total(&self, truth: &str) -> usize {
        self.counts.get(truth).map_or(0, |r| r.values().sum())
    }

    pub fn total(&self) -> usize {
        self.counts.values().flat_map(|r| r.values()).sum()
    }

    pub fn trace(&self) -> usize {
        self.counts
            .iter()
            .map(|(t, r)| r.get(t).copied().unwrap_or(0))
            .sum()
    }

    pub fn accuracy(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| self.trace() as f64 / n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryScore {
    pub category: Category,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f: Option<f64>,
    /// Documents contributing a non-null F.
    pub documents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub category: Category,
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub significant_at: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub documents: usize,
    pub categories: Vec<CategoryScore>,
    /// Per-document F for each category, in input order; nulls kept.
    pub per_document: BTreeMap<String, Vec<Option<f64>>>,
    pub confusion: BTreeMap<String, LabelConfusion>,
    pub tests: Vec<SignificanceResult>,
}

impl EvalReport {
    pub fn score(&self, category: Category) -> Option<&CategoryScore> {
        self.categories.iter().find(|c| c.category == category)
    }
}

/// Scores paired (extracted, truth) records over every category.
pub fn evaluate(pairs: &[(DocumentRecord, DocumentRecord)]) -> EvalReport {
    let mut report = EvalReport {
        documents: pairs.len(),
        ..EvalReport::default()
    };
    for &category in Category::ALL {
        let scores: Vec<Prf> = pairs.iter().map(|(e, t)| prf(e, t, category)).collect();
        let agg = aggregate(&scores);
        report.categories.push(CategoryScore {
            category,
            precision: agg.precision,
            recall: agg.recall,
            f: agg.f,
            documents: scores.iter().filter(|s| s.f.is_some()).count(),
        });
        report
            .per_document
            .insert(category.to_string(), scores.iter().map(|s| s.f).collect());
    }
    report
}

fn is_single(category: Category) -> bool {
    matches!(
        category,
        Category::Title
            | Category::Abstract
            | Category::Journal
            | Category::Volume
            | Category::Issue
            | Category::Pages
            | Category::Year
            | Category::Doi
    )
}

/// Compares two systems scored on the same documents: McNemar for single
/// fields, Wilcoxon for lists, each at the Bonferroni level for `m` tests.
/// Documents where either system has a null F are dropped.
pub fn compare_systems(a: &EvalReport, b: &EvalReport, alpha: f64, m: usize) -> Vec<SignificanceResult> {
    let level = bonferroni(alpha, m);
    let mut out = Vec::new();
    for &category in Category::ALL {
        let key = category.to_string();
        let (Some(fa), Some(fb)) = (a.per_document.get(&key), b.per_document.get(&key)) else {
            continue;
        };
        let paired: Vec<(f64, f64)> = fa
            .iter()
            .zip(fb)
            .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
            .collect();
        if paired.is_empty() {
            continue;
        }
        let (test, outcome) = if is_single(category) {
            let b_count = paired.iter().filter(|(x, y)| *x == 1.0 && *y != 1.0).count() as u64;
            let c_count = paired.iter().filter(|(x, y)| *x != 1.0 && *y == 1.0).count() as u64;
            ("mcnemar", mcnemar(b_count, c_count))
        } else {
            let diffs: Vec<f64> = paired.iter().map(|(x, y)| x - y).collect();
            ("wilcoxon", wilcoxon_signed_rank(&diffs))
        };
        out.push(SignificanceResult {
            category,
            test: test.to_string(),
            statistic: outcome.statistic,
            p_value: outcome.p_value,
            significant_at: level,
            significant: outcome.p_value < level,
        });
    }
    out
}

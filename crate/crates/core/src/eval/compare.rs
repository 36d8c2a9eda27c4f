//! Per-category matching of an extracted record against the ground truth.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{DocumentRecord, SectionNode};

/// Minimum Smith–Waterman similarity for titles, abstracts and headers.
pub const SW_THRESHOLD: f64 = 0.85;
/// Minimum cosine similarity for affiliations and references.
pub const COSINE_THRESHOLD: f64 = 0.75;

fn words(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn norm_alnum(s: &str) -> String {
    s.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect()
}

fn norm_letters(s: &str) -> String {
    s.chars().filter(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect()
}

/// Local alignment score with match 1, mismatch −1, gap −1, normalized as
/// `2·sw / (len₁ + len₂)`.
pub fn smith_waterman_similarity<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut prev = vec![0i64; b.len() + 1];
    let mut cur = vec![0i64; b.len() + 1];
    let mut best = 0;
    for x in a {
        for (j, y) in b.iter().enumerate() {
            let diag = prev[j] + if x == y { 1 } else { -1 };
            let v = diag.max(prev[j + 1] - 1).max(cur[j] - 1).max(0);
            cur[j + 1] = v;
            best = best.max(v);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    2.0 * best as f64 / (a.len() + b.len()) as f64
}

/// Cosine similarity of word-count vectors.
pub fn cosine_similarity(a: &str, b: &str) -> f64 {
    let count = |s: &str| {
        let mut m: BTreeMap<String, f64> = BTreeMap::new();
        for w in words(s) {
            *m.entry(w).or_default() += 1.0;
        }
        m
    };
    let (x, y) = (count(a), count(b));
    let dot: f64 = x.iter().filter_map(|(k, v)| y.get(k).map(|w| v * w)).sum();
    let nx: f64 = x.values().map(|v| v * v).sum::<f64>().sqrt();
    let ny: f64 = y.values().map(|v| v * v).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return if nx == ny { 1.0 } else { 0.0 };
    }
    dot / (nx * ny)
}

fn is_subsequence(needle: &str, hay: &str) -> bool {
    let mut it = hay.chars();
    needle.chars().all(|c| it.any(|h| h == c))
}

pub fn text_match(a: &str, b: &str) -> bool {
    let (na, nb) = (norm_alnum(a), norm_alnum(b));
    na == nb || smith_waterman_similarity(&words(a), &words(b)) >= SW_THRESHOLD
}

pub fn author_match(a: &str, b: &str) -> bool {
    norm_letters(a) == norm_letters(b)
}

pub fn cosine_match(a: &str, b: &str) -> bool {
    cosine_similarity(a, b) >= COSINE_THRESHOLD
}

pub fn email_match(a: &str, b: &str) -> bool {
    let n = |s: &str| -> String {
        s.chars()
            .filter(|c| c.is_alphanumeric() || *c == '@')
            .flat_map(char::to_lowercase)
            .collect()
    };
    n(a) == n(b)
}

/// Extracted journal name whose letters form a non-empty subsequence of the
/// ground truth's letters.
pub fn journal_match(extracted: &str, truth: &str) -> bool {
    let e = norm_letters(extracted);
    !e.is_empty() && is_subsequence(&e, &norm_letters(truth))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Title,
    Abstract,
    Keywords,
    Authors,
    Affiliations,
    AuthorAffiliation,
    Emails,
    AuthorEmail,
    Journal,
    Volume,
    Issue,
    Pages,
    Year,
    Doi,
    References,
    SectionTitles,
    SectionHierarchy,
}

impl Category {
    pub const ALL: &'static [Category] = &[
        Category::Title,
        Category::Abstract,
        Category::Keywords,
        Category::Authors,
        Category::Affiliations,
        Category::AuthorAffiliation,
        Category::Emails,
        Category::AuthorEmail,
        Category::Journal,
        Category::Volume,
        Category::Issue,
        Category::Pages,
        Category::Year,
        Category::Doi,
        Category::References,
        Category::SectionTitles,
        Category::SectionHierarchy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Title => "title",
            Category::Abstract => "abstract",
            Category::Keywords => "keywords",
            Category::Authors => "authors",
            Category::Affiliations => "affiliations",
            Category::AuthorAffiliation => "author_affiliation",
            Category::Emails => "emails",
            Category::AuthorEmail => "author_email",
            Category::Journal => "journal",
            Category::Volume => "volume",
            Category::Issue => "issue",
            Category::Pages => "pages",
            Category::Year => "year",
            Category::Doi => "doi",
            Category::References => "references",
            Category::SectionTitles => "section_titles",
            Category::SectionHierarchy => "section_hierarchy",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown evaluation category {s}")))
    }
}

/// Sizes of the extracted and true sets and of their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchCounts {
    pub extracted: usize,
    pub truth: usize,
    pub matched: usize,
}

/// Greedy one-to-one matching in order; returns, per extracted item, the
/// index of its truth partner.
fn greedy<A, B>(ex: &[A], tr: &[B], eq: impl Fn(&A, &B) -> bool) -> Vec<Option<usize>> {
    let mut used = vec![false; tr.len()];
    ex.iter()
        .map(|e| {
            let j = (0..tr.len()).find(|&j| !used[j] && eq(e, &tr[j]))?;
            used[j] = true;
            Some(j)
        })
        .collect()
}

fn list<A, B>(ex: &[A], tr: &[B], eq: impl Fn(&A, &B) -> bool) -> MatchCounts {
    MatchCounts {
        extracted: ex.len(),
        truth: tr.len(),
        matched: greedy(ex, tr, eq).iter().flatten().count(),
    }
}

fn single(ex: Option<&str>, tr: Option<&str>, eq: impl Fn(&str, &str) -> bool) -> MatchCounts {
    let e: Vec<&str> = ex.into_iter().filter(|s| !s.trim().is_empty()).collect();
    let t: Vec<&str> = tr.into_iter().filter(|s| !s.trim().is_empty()).collect();
    list(&e, &t, |a, b| eq(a, b))
}

fn relations(
    ex_rel: &[(usize, usize)],
    tr_rel: &[(usize, usize)],
    left: &[Option<usize>],
    right: &[Option<usize>],
) -> MatchCounts {
    let mapped: Vec<Option<(usize, usize)>> = ex_rel
        .iter()
        .map(|&(a, b)| Some((left.get(a).copied().flatten()?, right.get(b).copied().flatten()?)))
        .collect();
    let matched = mapped.iter().flatten().filter(|p| tr_rel.contains(p)).count();
    MatchCounts {
        extracted: ex_rel.len(),
        truth: tr_rel.len(),
        matched,
    }
}

fn headers(nodes: &[SectionNode]) -> Vec<(u8, String)> {
    SectionNode::flatten(nodes).into_iter().filter(|(_, t)| !t.trim().is_empty()).collect()
}

pub fn compare_category(extracted: &DocumentRecord, truth: &DocumentRecord, category: Category) -> MatchCounts {
    let (e, t) = (&extracted.front, &truth.front);
    match category {
        Category::Title => single(e.title.as_deref(), t.title.as_deref(), text_match),
        Category::Abstract => single(e.abstract_text.as_deref(), t.abstract_text.as_deref(), text_match),
        Category::Keywords => list(&e.keywords, &t.keywords, |a, b| norm_alnum(a) == norm_alnum(b)),
        Category::Authors => list(&e.authors, &t.authors, |a, b| author_match(a, b)),
        Category::Affiliations => list(&e.affiliations, &t.affiliations, |a, b| cosine_match(&a.raw, &b.raw)),
        Category::Emails => list(&e.emails, &t.emails, |a, b| email_match(a, b)),
        Category::AuthorAffiliation => {
            let authors = greedy(&e.authors, &t.authors, |a, b| author_match(a, b));
            let affs = greedy(&e.affiliations, &t.affiliations, |a, b| cosine_match(&a.raw, &b.raw));
            relations(&e.author_affiliation, &t.author_affiliation, &authors, &affs)
        }
        Category::AuthorEmail => {
            let authors = greedy(&e.authors, &t.authors, |a, b| author_match(a, b));
            let emails = greedy(&e.emails, &t.emails, |a, b| email_match(a, b));
            relations(&e.author_email, &t.author_email, &authors, &emails)
        }
        Category::Journal => single(e.journal.as_deref(), t.journal.as_deref(), journal_match),
        Category::Volume => single(e.volume.as_deref(), t.volume.as_deref(), |a, b| norm_alnum(a) == norm_alnum(b)),
        Category::Issue => single(e.issue.as_deref(), t.issue.as_deref(), |a, b| norm_alnum(a) == norm_alnum(b)),
        Category::Year => single(e.year.as_deref(), t.year.as_deref(), |a, b| norm_alnum(a) == norm_alnum(b)),
        Category::Doi => single(e.doi.as_deref(), t.doi.as_deref(), |a, b| a.trim().eq_ignore_ascii_case(b.trim())),
        Category::Pages => {
            let ex: Vec<&(String, String)> = e.pages.iter().collect();
            let tr: Vec<&(String, String)> = t.pages.iter().collect();
            list(&ex, &tr, |a, b| a.0.trim() == b.0.trim() && a.1.trim() == b.1.trim())
        }
        Category::References => list(&extracted.back, &truth.back, |a, b| cosine_match(&a.raw, &b.raw)),
        Category::SectionTitles => list(&headers(&extracted.body), &headers(&truth.body), |a, b| text_match(&a.1, &b.1)),
        Category::SectionHierarchy => {
            list(&headers(&extracted.body), &headers(&truth.body), |a, b| a.0 == b.0 && text_match(&a.1, &b.1))
        }
    }
}

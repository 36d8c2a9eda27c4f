//! Zone feature vectors over a fixed 103-feature schema. docs/features.md
//! describes each feature.

use std::collections::HashMap;

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dict::{Dictionaries, KeywordClass};
use crate::error::{Error, Result};
use crate::geom::{BoundingBox, CategoryLabel, Document, Zone};
use crate::text;
use crate::tokens::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Geometric,
    Sequential,
    Formatting,
    Lexical,
    Heuristic,
}

use FeatureKind::*;

/// Every feature in extraction order.
pub const FEATURES: &[(&str, FeatureKind)] = &[
    ("height", Geometric),
    ("width", Geometric),
    ("aspect_ratio", Geometric),
    ("x_left", Geometric),
    ("x_right", Geometric),
    ("y_top", Geometric),
    ("y_bottom", Geometric),
    ("x_center", Geometric),
    ("y_center", Geometric),
    ("area", Geometric),
    ("nearest_zone_distance", Geometric),
    ("empty_above", Geometric),
    ("empty_below", Geometric),
    ("empty_left", Geometric),
    ("empty_right", Geometric),
    ("line_height_rel", Geometric),
    ("line_height_abs", Geometric),
    ("at_top", Geometric),
    ("at_bottom", Geometric),
    ("at_left", Geometric),
    ("at_right", Geometric),
    ("full_width", Geometric),
    ("line_spacing", Geometric),
    ("char_density", Geometric),
    ("centered", Geometric),
    ("page_position", Sequential),
    ("first_page", Sequential),
    ("last_page", Sequential),
    ("document_position", Sequential),
    ("page_zone_position", Sequential),
    ("prev_metadata", Sequential),
    ("prev_references", Sequential),
    ("prev_body", Sequential),
    ("prev_other", Sequential),
    ("prev_unlabeled", Sequential),
    ("next_metadata", Sequential),
    ("next_references", Sequential),
    ("next_body", Sequential),
    ("next_other", Sequential),
    ("next_unlabeled", Sequential),
    ("repeated_on_adjacent_page", Sequential),
    ("first_on_page", Sequential),
    ("last_on_page", Sequential),
    ("prev_same_font", Sequential),
    ("next_same_font", Sequential),
    ("gap_prev", Sequential),
    ("gap_next", Sequential),
    ("font_size_rel_document", Formatting),
    ("font_size_rel_prev", Formatting),
    ("font_size_rel_next", Formatting),
    ("font_size", Formatting),
    ("bold", Formatting),
    ("italic", Formatting),
    ("dominant_document_font", Formatting),
    ("font_count", Formatting),
    ("font_rank", Formatting),
    ("blank_fraction", Formatting),
    ("mean_indent", Formatting),
    ("first_line_indent", Formatting),
    ("line_width_spread", Formatting),
    ("last_line_ratio", Formatting),
    ("superscript_fraction", Formatting),
    ("centered_lines", Formatting),
    ("kw_affiliation", Lexical),
    ("kw_acknowledgment", Lexical),
    ("kw_abstract", Lexical),
    ("kw_keywords", Lexical),
    ("kw_dates", Lexical),
    ("kw_references", Lexical),
    ("kw_type", Lexical),
    ("kw_correspondence", Lexical),
    ("kw_editor", Lexical),
    ("kw_copyright", Lexical),
    ("kw_bibinfo", Lexical),
    ("starts_abstract", Lexical),
    ("starts_keywords", Lexical),
    ("starts_references", Lexical),
    ("starts_acknowledgment", Lexical),
    ("has_email", Lexical),
    ("caption_pattern", Lexical),
    ("has_doi_or_url", Lexical),
    ("place_name", Lexical),
    ("month_name", Lexical),
    ("line_count", Heuristic),
    ("word_count", Heuristic),
    ("char_count", Heuristic),
    ("uppercase_words", Heuristic),
    ("capitalized_words", Heuristic),
    ("letters", Heuristic),
    ("digits", Heuristic),
    ("whitespace", Heuristic),
    ("punctuation", Heuristic),
    ("bracket_count", Heuristic),
    ("brackets", Heuristic),
    ("comma_count", Heuristic),
    ("commas", Heuristic),
    ("dot_count", Heuristic),
    ("dots", Heuristic),
    ("enumerated_lines", Heuristic),
    ("first_line_enumerated", Heuristic),
    ("digits_only", Heuristic),
    ("mean_word_length", Heuristic),
    ("year_count", Heuristic),
];

pub const FEATURE_COUNT: usize = 103;

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURES.iter().position(|(n, _)| *n == name)
}

/// An ordered subset of [`FEATURES`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    names: Vec<String>,
    #[serde(skip)]
    indices: Vec<usize>,
}

impl FeatureSchema {
    pub fn full() -> Self {
        Self {
            names: FEATURES.iter().map(|(n, _)| n.to_string()).collect(),
            indices: (0..FEATURES.len()).collect(),
        }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let indices = names
            .iter()
            .map(|n| feature_index(n.as_ref()).ok_or_else(|| Error::Schema(format!("unknown feature {:?}", n.as_ref()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            indices,
        })
    }

    /// Rebuilds the index table after deserialization.
    pub fn resolve(&self) -> Result<Self> {
        Self::from_names(&self.names)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Selects this schema's features from a full-length vector.
    pub fn project(&self, full: &[f64]) -> Vec<f64> {
        self.indices.iter().map(|&i| full[i]).collect()
    }
}

static YEAR: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b(19|20)\d{2}\b").unwrap());
static URL: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)(https?://|www\.|doi:|\b10\.\d{4,9}/)").unwrap());
static MONTH: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"(?i)\b(jan(uary)?|feb(ruary)?|mar(ch)?|apr(il)?|may|june?|july?|aug(ust)?|sep(t(ember)?)?|oct(ober)?|nov(ember)?|dec(ember)?)\b")
        .unwrap()
});

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

fn log_count(n: usize) -> f64 {
    (n as f64).ln_1p()
}

/// Feature vector under construction; in debug builds each push is checked
/// against the schema order.
struct Builder(Vec<f64>);

impl Builder {
    fn put(&mut self, name: &str, v: f64) {
        debug_assert_eq!(FEATURES[self.0.len()].0, name, "feature order");
        self.0.push(if v.is_finite() { v } else { 0.0 });
    }
}

struct ZoneStats {
    font: u32,
    size: f64,
    text: String,
    norm_text: String,
}

fn dominant_font(zone: &Zone) -> u32 {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for c in zone.chars() {
        *counts.entry(c.font).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map_or(0, |(f, _)| f)
}

fn mean_char_height(zone: &Zone) -> f64 {
    let (s, n) = zone.chars().fold((0.0, 0), |(s, n), c| (s + c.bbox.height(), n + 1));
    ratio(s, n as f64)
}

fn repetition_key(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.chars().map(|c| if c.is_ascii_digit() { '#' } else { c }).collect::<String>())
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Precomputed document-level context for feature extraction.
pub struct FeatureContext<'a> {
    doc: &'a Document,
    dict: &'a Dictionaries,
    stats: Vec<Vec<ZoneStats>>,
    /// `(page, zone)` in document order.
    order: Vec<(usize, usize)>,
    mean_size: f64,
    mean_line_height: f64,
    font_rank: HashMap<u32, usize>,
    dominant: u32,
}

impl<'a> FeatureContext<'a> {
    pub fn new(doc: &'a Document, dict: &'a Dictionaries) -> Self {
        let mut font_counts: HashMap<u32, usize> = HashMap::new();
        let (mut size_sum, mut size_n) = (0.0, 0usize);
        for c in doc.chars() {
            *font_counts.entry(c.font).or_default() += 1;
            size_sum += doc.fonts.size(c.font).unwrap_or(c.bbox.height());
            size_n += 1;
        }
        let mut ranked: Vec<(u32, usize)> = font_counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let font_rank: HashMap<u32, usize> = ranked.iter().enumerate().map(|(r, (f, _))| (*f, r)).collect();
        let dominant = ranked.first().map_or(0, |(f, _)| *f);
        let (mut lh_sum, mut lh_n) = (0.0, 0usize);
        for l in doc.zones().flat_map(|z| &z.lines) {
            lh_sum += l.bbox.height();
            lh_n += 1;
        }
        let stats = doc
            .pages
            .iter()
            .map(|p| {
                p.zones
                    .iter()
                    .map(|z| {
                        let font = dominant_font(z);
                        let text = z.text();
                        ZoneStats {
                            font,
                            size: doc.fonts.size(font).unwrap_or_else(|| mean_char_height(z)),
                            norm_text: repetition_key(&text),
                            text,
                        }
                    })
                    .collect()
            })
            .collect();
        let order = doc
            .pages
            .iter()
            .enumerate()
            .flat_map(|(pi, p)| (0..p.zones.len()).map(move |zi| (pi, zi)))
            .collect();
        Self {
            doc,
            dict,
            stats,
            order,
            mean_size: ratio(size_sum, size_n as f64),
            mean_line_height: ratio(lh_sum, lh_n as f64),
            font_rank,
            dominant,
        }
    }

    pub fn document(&self) -> &Document {
        self.doc
    }

    /// Full 103-feature vector of zone `zi` on page `pi`.
    pub fn zone_features(&self, pi: usize, zi: usize) -> Vec<f64> {
        let doc = self.doc;
        let page = &doc.pages[pi];
        let zone = &page.zones[zi];
        let st = &self.stats[pi][zi];
        let (pw, ph) = (page.width.max(1.0), page.height.max(1.0));
        let b = zone.bbox;
        let mut f = Builder(Vec::with_capacity(FEATURE_COUNT));

        // Geometric
        f.put("height", b.height() / ph);
        f.put("width", b.width() / pw);
        f.put("aspect_ratio", ratio(b.height(), b.width()).min(50.0));
        f.put("x_left", b.x1 / pw);
        f.put("x_right", b.x2 / pw);
        f.put("y_top", b.y1 / ph);
        f.put("y_bottom", b.y2 / ph);
        f.put("x_center", b.center().0 / pw);
        f.put("y_center", b.center().1 / ph);
        f.put("area", b.area() / (pw * ph));
        let others: Vec<&BoundingBox> =
            page.zones.iter().enumerate().filter(|(i, _)| *i != zi).map(|(_, z)| &z.bbox).collect();
        let nearest = others
            .iter()
            .map(|o| {
                let dx = (o.x1 - b.x2).max(b.x1 - o.x2).max(0.0);
                let dy = (o.y1 - b.y2).max(b.y1 - o.y2).max(0.0);
                dx.hypot(dy)
            })
            .fold(f64::INFINITY, f64::min);
        f.put("nearest_zone_distance", if nearest.is_finite() { nearest / ph } else { 1.0 });
        let hov = |o: &BoundingBox| o.horizontal_overlap(&b) > 0.0;
        let vov = |o: &BoundingBox| o.vertical_overlap(&b) > 0.0;
        let above = others.iter().filter(|o| hov(o) && o.y2 <= b.y1 + 0.5).map(|o| b.y1 - o.y2).fold(f64::INFINITY, f64::min);
        let below = others.iter().filter(|o| hov(o) && o.y1 >= b.y2 - 0.5).map(|o| o.y1 - b.y2).fold(f64::INFINITY, f64::min);
        let left = others.iter().filter(|o| vov(o) && o.x2 <= b.x1 + 0.5).map(|o| b.x1 - o.x2).fold(f64::INFINITY, f64::min);
        let right = others.iter().filter(|o| vov(o) && o.x1 >= b.x2 - 0.5).map(|o| o.x1 - b.x2).fold(f64::INFINITY, f64::min);
        f.put("empty_above", (if above.is_finite() { above } else { b.y1 }).max(0.0) / ph);
        f.put("empty_below", (if below.is_finite() { below } else { ph - b.y2 }).max(0.0) / ph);
        f.put("empty_left", (if left.is_finite() { left } else { b.x1 }).max(0.0) / pw);
        f.put("empty_right", (if right.is_finite() { right } else { pw - b.x2 }).max(0.0) / pw);
        let n_lines = zone.lines.len();
        let line_h = ratio(zone.lines.iter().map(|l| l.bbox.height()).sum(), n_lines as f64);
        f.put("line_height_rel", ratio(line_h, self.mean_line_height));
        f.put("line_height_abs", line_h);
        f.put("at_top", flag(!above.is_finite()));
        f.put("at_bottom", flag(!below.is_finite()));
        f.put("at_left", flag(!left.is_finite()));
        f.put("at_right", flag(!right.is_finite()));
        f.put("full_width", flag(b.width() > 0.6 * pw));
        let spacing = if n_lines > 1 {
            let gaps: f64 = zone.lines.windows(2).map(|w| w[1].bbox.y1 - w[0].bbox.y2).sum();
            ratio(gaps / (n_lines - 1) as f64, line_h)
        } else {
            0.0
        };
        f.put("line_spacing", spacing);
        let n_chars = zone.char_count();
        f.put("char_density", ratio(n_chars as f64 * line_h * line_h, b.area()).min(10.0));
        f.put("centered", flag((b.center().0 - pw / 2.0).abs() < 0.03 * pw && b.width() < 0.9 * (pw - 2.0 * b.x1.min(pw - b.x2))));

        // Sequential
        let n_pages = doc.pages.len();
        f.put("page_position", ratio(pi as f64, (n_pages.max(1) - 1) as f64));
        f.put("first_page", flag(pi == 0));
        f.put("last_page", flag(pi + 1 == n_pages));
        let pos = self.order.iter().position(|&k| k == (pi, zi)).unwrap_or(0);
        f.put("document_position", ratio(pos as f64, (self.order.len().max(1) - 1) as f64));
        f.put("page_zone_position", ratio(zi as f64, (page.zones.len().max(1) - 1) as f64));
        let prev = pos.checked_sub(1).map(|p| self.order[p]);
        let next = self.order.get(pos + 1).copied();
        let cat = |k: Option<(usize, usize)>| k.and_then(|(p, z)| doc.pages[p].zones[z].category);
        for (prefix, k) in [("prev", prev), ("next", next)] {
            let c = cat(k);
            for (name, want) in [
                ("metadata", Some(CategoryLabel::Metadata)),
                ("references", Some(CategoryLabel::References)),
                ("body", Some(CategoryLabel::Body)),
                ("other", Some(CategoryLabel::Other)),
                ("unlabeled", None),
            ] {
                f.put(&format!("{prefix}_{name}"), flag(c == want));
            }
        }
        let repeated = !st.norm_text.is_empty()
            && [pi.checked_sub(1), Some(pi + 1)]
                .into_iter()
                .flatten()
                .filter_map(|p| self.stats.get(p))
                .any(|zs| zs.iter().any(|s| s.norm_text == st.norm_text));
        f.put("repeated_on_adjacent_page", flag(repeated));
        f.put("first_on_page", flag(zi == 0));
        f.put("last_on_page", flag(zi + 1 == page.zones.len()));
        let stat = |k: Option<(usize, usize)>| k.map(|(p, z)| &self.stats[p][z]);
        f.put("prev_same_font", flag(stat(prev).is_some_and(|s| s.font == st.font)));
        f.put("next_same_font", flag(stat(next).is_some_and(|s| s.font == st.font)));
        let gap = |k: Option<(usize, usize)>, up: bool| match k {
            Some((p, z)) if p == pi => {
                let o = doc.pages[p].zones[z].bbox;
                (if up { b.y1 - o.y2 } else { o.y1 - b.y2 }) / ph
            }
            _ => 0.0,
        };
        f.put("gap_prev", gap(prev, true));
        f.put("gap_next", gap(next, false));

        // Formatting
        f.put("font_size_rel_document", ratio(st.size, self.mean_size));
        f.put("font_size_rel_prev", stat(prev).map_or(1.0, |s| ratio(st.size, s.size)));
        f.put("font_size_rel_next", stat(next).map_or(1.0, |s| ratio(st.size, s.size)));
        f.put("font_size", st.size);
        let family = doc.fonts.family(st.font).unwrap_or("");
        f.put("bold", flag(family.contains("Bold") || family.contains("Black") || family.contains("Heavy")));
        f.put("italic", flag(family.contains("Italic") || family.contains("Oblique")));
        f.put("dominant_document_font", flag(st.font == self.dominant));
        let mut fonts: Vec<u32> = zone.chars().map(|c| c.font).collect();
        fonts.sort_unstable();
        fonts.dedup();
        f.put("font_count", fonts.len() as f64);
        f.put("font_rank", self.font_rank.get(&st.font).copied().unwrap_or(0).min(10) as f64);
        let ink: f64 = zone.chars().map(|c| c.bbox.area()).sum();
        f.put("blank_fraction", (1.0 - ratio(ink, b.area())).clamp(0.0, 1.0));
        let w = b.width().max(1e-9);
        f.put("mean_indent", ratio(zone.lines.iter().map(|l| l.bbox.x1 - b.x1).sum(), n_lines as f64) / w);
        f.put("first_line_indent", zone.lines.first().map_or(0.0, |l| (l.bbox.x1 - b.x1) / w));
        let widths: Vec<f64> = zone.lines.iter().map(|l| l.bbox.width()).collect();
        let mean_w = ratio(widths.iter().sum(), n_lines as f64);
        let var = ratio(widths.iter().map(|x| (x - mean_w).powi(2)).sum(), n_lines as f64);
        f.put("line_width_spread", var.sqrt() / w);
        let max_w = widths.iter().copied().fold(0.0, f64::max);
        f.put("last_line_ratio", widths.last().map_or(0.0, |l| ratio(*l, max_w)));
        let mut heights: Vec<f64> = zone.chars().map(|c| c.bbox.height()).collect();
        heights.sort_by(f64::total_cmp);
        let median_h = heights.get(heights.len() / 2).copied().unwrap_or(0.0);
        let small = heights.iter().filter(|h| **h < 0.75 * median_h).count();
        f.put("superscript_fraction", ratio(small as f64, heights.len() as f64));
        let centered = zone
            .lines
            .iter()
            .filter(|l| l.bbox.width() < 0.9 * w && (l.bbox.center().0 - b.center().0).abs() < 0.05 * w)
            .count();
        f.put("centered_lines", ratio(centered as f64, n_lines as f64));

        // Lexical
        let t = &st.text;
        let d = self.dict;
        for (name, class) in [
            ("kw_affiliation", KeywordClass::Affiliation),
            ("kw_acknowledgment", KeywordClass::Acknowledgment),
            ("kw_abstract", KeywordClass::Abstract),
            ("kw_keywords", KeywordClass::Keywords),
            ("kw_dates", KeywordClass::Dates),
            ("kw_references", KeywordClass::References),
            ("kw_type", KeywordClass::Type),
            ("kw_correspondence", KeywordClass::Correspondence),
            ("kw_editor", KeywordClass::Editor),
            ("kw_copyright", KeywordClass::Copyright),
            ("kw_bibinfo", KeywordClass::BibInfo),
        ] {
            f.put(name, flag(d.has_keyword(class, t)));
        }
        for (name, class) in [
            ("starts_abstract", KeywordClass::Abstract),
            ("starts_keywords", KeywordClass::Keywords),
            ("starts_references", KeywordClass::References),
            ("starts_acknowledgment", KeywordClass::Acknowledgment),
        ] {
            f.put(name, flag(d.starts_with_keyword(class, t)));
        }
        f.put("has_email", flag(text::email_regex().is_match(t)));
        f.put("caption_pattern", flag(d.is_caption(t)));
        f.put("has_doi_or_url", flag(URL.is_match(t)));
        let lower: Vec<String> = tokenize(&t.to_lowercase()).into_iter().map(|k| k.text).collect();
        let place = d.countries.mark(&lower).iter().any(|m| *m) || d.cities.mark(&lower).iter().any(|m| *m);
        f.put("place_name", flag(place));
        f.put("month_name", flag(MONTH.is_match(t)));

        // Heuristic
        let words: Vec<&str> = t.split_whitespace().collect();
        let n_words = words.len();
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
        let nc = chars.len() as f64;
        let spaces = n_words.saturating_sub(n_lines);
        f.put("line_count", log_count(n_lines));
        f.put("word_count", log_count(n_words));
        f.put("char_count", log_count(chars.len()));
        let upper = words
            .iter()
            .filter(|w| w.chars().any(char::is_alphabetic) && !w.chars().any(char::is_lowercase))
            .count();
        let capital = words.iter().filter(|w| w.chars().next().is_some_and(char::is_uppercase)).count();
        f.put("uppercase_words", ratio(upper as f64, n_words as f64));
        f.put("capitalized_words", ratio(capital as f64, n_words as f64));
        let count = |p: &dyn Fn(char) -> bool| chars.iter().filter(|c| p(**c)).count();
        f.put("letters", ratio(count(&|c| c.is_alphabetic()) as f64, nc));
        f.put("digits", ratio(count(&|c| c.is_ascii_digit()) as f64, nc));
        f.put("whitespace", ratio(spaces as f64, nc + spaces as f64));
        f.put("punctuation", ratio(count(&|c| !c.is_alphanumeric()) as f64, nc));
        let brackets = count(&|c| "()[]{}".contains(c));
        f.put("bracket_count", log_count(brackets));
        f.put("brackets", ratio(brackets as f64, nc));
        let commas = count(&|c| c == ',');
        f.put("comma_count", log_count(commas));
        f.put("commas", ratio(commas as f64, nc));
        let dots = count(&|c| c == '.');
        f.put("dot_count", log_count(dots));
        f.put("dots", ratio(dots as f64, nc));
        let line_texts: Vec<String> = zone.lines.iter().map(|l| l.text()).collect();
        let enumerated = line_texts.iter().filter(|l| text::enumeration(l).is_some()).count();
        f.put("enumerated_lines", ratio(enumerated as f64, n_lines as f64));
        f.put(
            "first_line_enumerated",
            flag(line_texts.first().is_some_and(|l| text::enumeration(l).is_some() || text::starts_with_enumeration(l))),
        );
        f.put("digits_only", flag(!chars.is_empty() && chars.iter().all(char::is_ascii_digit)));
        f.put("mean_word_length", ratio(nc, n_words as f64));
        f.put("year_count", log_count(YEAR.find_iter(t).count()));

        debug_assert_eq!(f.0.len(), FEATURE_COUNT);
        f.0
    }

    /// Full vectors for every zone, indexed `[page][zone]`.
    pub fn all(&self) -> Vec<Vec<Vec<f64>>> {
        self.doc
            .pages
            .iter()
            .enumerate()
            .map(|(pi, p)| (0..p.zones.len()).map(|zi| self.zone_features(pi, zi)).collect())
            .collect()
    }
}

/// Full feature vector of one zone.
pub fn extract_zone_features(doc: &Document, page: usize, zone: usize, dict: &Dictionaries) -> Vec<f64> {
    FeatureContext::new(doc, dict).zone_features(page, zone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Character, Line, Page, Word};

    fn zone_at(text: &str, x: f64, y: f64) -> Zone {
        let words = text
            .split(' ')
            .enumerate()
            .map(|(wi, w)| {
                let x0 = x + wi as f64 * 40.0;
                Word::new(
                    w.chars()
                        .enumerate()
                        .map(|(i, c)| {
                            let cx = x0 + i as f64 * 5.0;
                            Character::new(c.to_string(), BoundingBox::new(cx, y, cx + 5.0, y + 10.0), 0)
                        })
                        .collect(),
                )
            })
            .collect();
        Zone::new(vec![Line::new(words)])
    }

    fn doc() -> Document {
        let mut fonts = crate::geom::FontTable::default();
        fonts.intern("Times-Roman,10");
        Document {
            pages: vec![Page::new(
                600.0,
                800.0,
                vec![zone_at("Title here", 50.0, 20.0), zone_at("References", 50.0, 300.0), zone_at("17", 300.0, 780.0)],
            )],
            fonts,
        }
    }

    fn value(v: &[f64], name: &str) -> f64 {
        v[feature_index(name).unwrap()]
    }

    #[test]
    fn schema_is_consistent() {
        assert_eq!(FEATURES.len(), FEATURE_COUNT);
        let mut names: Vec<&str> = FEATURES.iter().map(|f| f.0).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), FEATURE_COUNT);
        assert!(matches!(FeatureSchema::from_names(&["nope"]), Err(Error::Schema(_))));
    }

    #[test]
    fn documented_examples() {
        let d = doc();
        let dict = Dictionaries::builtin();
        let ctx = FeatureContext::new(&d, dict);
        let top = ctx.zone_features(0, 0);
        assert_eq!(top.len(), FEATURE_COUNT);
        assert_eq!(value(&top, "at_top"), 1.0);
        let refs = ctx.zone_features(0, 1);
        assert_eq!(value(&refs, "kw_references"), 1.0);
        assert_eq!(value(&refs, "at_top"), 0.0);
        let num = ctx.zone_features(0, 2);
        assert_eq!(value(&num, "digits"), 1.0);
        assert_eq!(value(&num, "digits_only"), 1.0);
        assert!(top.iter().chain(&refs).chain(&num).all(|v| v.is_finite()));
    }

    #[test]
    fn projection_follows_names() {
        let s = FeatureSchema::from_names(&["digits", "height"]).unwrap();
        let full: Vec<f64> = (0..FEATURE_COUNT).map(|i| i as f64).collect();
        assert_eq!(s.project(&full), vec![feature_index("digits").unwrap() as f64, 0.0]);
    }
}

//! Bibliography extraction: reference-zone lines are split into individual
//! references by 2-means clustering of five line features, then parsed.

use std::collections::HashMap;

use docharvest_learn::kmeans::{kmeans, KMeansInit};

use crate::citation::{clean_reference, parse_citation, ParsedReference};
use crate::dict::Dictionaries;
use crate::geom::{BoundingBox, CategoryLabel, Document, Zone};
use crate::tagger::TaggerModel;
use crate::text;

/// Indentation beyond the zone's usual left margin that counts.
pub const INDENT_THRESHOLD: f64 = 1.5;
/// Gap factor over the smallest gap between reference lines.
pub const GAP_FACTOR: f64 = 1.15;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RefLineFeatures {
    /// Starts with an enumeration whose neighbour number also occurs.
    pub enumerated: f64,
    pub prev_ends_with_dot: f64,
    /// Width of the previous line over its zone's width.
    pub prev_width_ratio: f64,
    pub indented: f64,
    pub gap_above: f64,
}

impl RefLineFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.enumerated, self.prev_ends_with_dot, self.prev_width_ratio, self.indented, self.gap_above]
    }
}

/// A line of a references zone.
#[derive(Debug, Clone, PartialEq)]
pub struct RefLine {
    pub text: String,
    pub bbox: BoundingBox,
    pub zone: usize,
}

/// Lines of the given zones in order, tagged with their zone index.
pub fn reference_lines(zones: &[&Zone]) -> Vec<RefLine> {
    zones
        .iter()
        .enumerate()
        .flat_map(|(zi, z)| {
            z.lines.iter().map(move |l| RefLine {
                text: l.text(),
                bbox: l.bbox,
                zone: zi,
            })
        })
        .collect()
}

/// Leftmost edge of a zone's lines. With hanging indents most lines are
/// indented, so the most common edge would be the indented one.
fn left_margin(lines: &[&RefLine]) -> f64 {
    lines.iter().map(|l| l.bbox.x1).fold(f64::INFINITY, f64::min)
}

fn gap_to_prev(lines: &[RefLine], i: usize) -> Option<f64> {
    let p = lines.get(i.checked_sub(1)?)?;
    let l = &lines[i];
    (p.zone == l.zone).then_some(l.bbox.y1 - p.bbox.y2)
}

pub fn reference_line_features(lines: &[RefLine], zones: &[&Zone]) -> Vec<RefLineFeatures> {
    let enums: Vec<Option<(text::EnumStyle, u32)>> = lines.iter().map(|l| text::enumeration(&l.text)).collect();
    let mut zone_left: HashMap<usize, f64> = HashMap::new();
    for zi in 0..zones.len() {
        let members: Vec<&RefLine> = lines.iter().filter(|l| l.zone == zi).collect();
        zone_left.insert(zi, left_margin(&members));
    }
    let min_gap = (0..lines.len())
        .filter_map(|i| gap_to_prev(lines, i))
        .filter(|g| *g > 0.0)
        .fold(f64::INFINITY, f64::min);
    (0..lines.len())
        .map(|i| {
            let l = &lines[i];
            let enumerated = enums[i].is_some_and(|(style, n)| {
                enums[..i].iter().any(|e| *e == Some((style, n.wrapping_sub(1))))
                    || enums[i + 1..].iter().any(|e| *e == Some((style, n + 1)))
            });
            let prev = i.checked_sub(1).map(|j| &lines[j]);
            let prev_width_ratio = prev.map_or(0.0, |p| {
                let w = zones.get(p.zone).map_or(0.0, |z| z.bbox.width());
                if w > 0.0 {
                    p.bbox.width() / w
                } else {
                    0.0
                }
            });
            let indent = l.bbox.x1 - zone_left.get(&l.zone).copied().unwrap_or(l.bbox.x1);
            let gap = gap_to_prev(lines, i).unwrap_or(0.0);
            let flag = |b: bool| if b { 1.0 } else { 0.0 };
            RefLineFeatures {
                enumerated: flag(enumerated),
                prev_ends_with_dot: flag(prev.is_some_and(|p| p.text.trim_end().ends_with('.'))),
                prev_width_ratio,
                indented: flag(indent > INDENT_THRESHOLD),
                gap_above: flag(min_gap.is_finite() && gap > GAP_FACTOR * min_gap),
            }
        })
        .collect()
}

/// Indices of the lines of each reference. Every line belongs to exactly
/// one group; the first group starts at the first line.
pub fn split_reference_lines(lines: &[RefLine], zones: &[&Zone]) -> Vec<Vec<usize>> {
    if lines.is_empty() {
        return Vec::new();
    }
    if lines.len() == 1 {
        return vec![vec![0]];
    }
    let mut features = reference_line_features(lines, zones);
    // Nothing precedes the first line, which leaves it looking like a
    // continuation; cluster it as if a finished reference came before.
    features[0].prev_ends_with_dot = 1.0;
    features[0].gap_above = 1.0;
    let vectors: Vec<Vec<f64>> = features.iter().map(RefLineFeatures::to_vec).collect();
    let assign = kmeans(&vectors, 2, KMeansInit::FarthestFirst)
        .expect("two or more vectors")
        .assignments;
    let first_cluster = assign[0];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &a) in assign.iter().enumerate() {
        if a == first_cluster || groups.is_empty() {
            groups.push(vec![i]);
        } else {
            groups.last_mut().expect("group").push(i);
        }
    }
    groups
}

/// Reference strings from the references zones, in reading order.
pub fn extract_reference_strings(zones: &[&Zone]) -> Vec<String> {
    let lines = reference_lines(zones);
    split_reference_lines(&lines, zones)
        .into_iter()
        .map(|g| {
            let texts: Vec<&str> = g.iter().map(|&i| lines[i].text.as_str()).collect();
            text::join_lines(&texts)
        })
        .collect()
}

pub fn references_zones(doc: &Document) -> Vec<&Zone> {
    doc.zones().filter(|z| z.category == Some(CategoryLabel::References)).collect()
}

/// Splits, parses and cleans the references. Without a citation model the
/// records carry the raw text and what cleaning recovers from it.
pub fn extract_bibliography(doc: &Document, model: Option<&TaggerModel>, dict: &Dictionaries) -> Vec<ParsedReference> {
    extract_reference_strings(&references_zones(doc))
        .into_iter()
        .map(|s| {
            let parsed = model
                .and_then(|m| parse_citation(&s, m, dict).ok())
                .unwrap_or_else(|| ParsedReference::raw_only(s.as_str()));
            clean_reference(&parsed, dict)
        })
        .collect()
}

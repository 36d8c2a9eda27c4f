//! Body extraction: header lines found as outliers among body_content lines,
//! grouped into a three-level section tree.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_zones, ZoneClassifier};
use crate::dict::Dictionaries;
use crate::error::Result;
use crate::geom::{BoundingBox, CategoryLabel, Document, ZoneLabel};
use crate::record::SectionNode;
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeaderConfig {
    /// Candidates longer than this z_l are dropped.
    pub max_zl: f64,
    /// Candidates smaller than this z_h are dropped.
    pub min_zh: f64,
    /// |z_f|, |z_d| and |z_x| all below this mark a typical line (first pass).
    pub typicality_strict: f64,
    /// The same bound for the second pass.
    pub typicality_soft: f64,
    /// |z_f| above which a font counts as a header font.
    pub font_outlier: f64,
    pub min_font_candidates: usize,
    pub max_followers: usize,
    /// Relative height difference still considered similar.
    pub height_tolerance: f64,
    /// A follower is noticeably shorter below this fraction of the first line.
    pub shorter_ratio: f64,
}

impl Default for HeaderConfig {
    fn default() -> Self {
        Self {
            max_zl: 1.0,
            min_zh: -0.3,
            typicality_strict: 0.35,
            typicality_soft: 0.7,
            font_outlier: 0.5,
            min_font_candidates: 3,
            max_followers: 3,
            height_tolerance: 0.1,
            shorter_ratio: 0.9,
        }
    }
}

/// A body_content line in reading order.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyLine {
    pub text: String,
    pub bbox: BoundingBox,
    pub font: u32,
    pub page: usize,
    /// Running index of the zone in the document.
    pub zone: usize,
    pub zone_left: f64,
    pub first_in_zone: bool,
}

pub fn body_lines(doc: &Document) -> Vec<BodyLine> {
    let mut out = Vec::new();
    let mut zone_no = 0;
    for (pi, page) in doc.pages.iter().enumerate() {
        for zone in &page.zones {
            zone_no += 1;
            if zone.category != Some(CategoryLabel::Body) || zone.label == Some(ZoneLabel::BodyOther) {
                continue;
            }
            for (li, line) in zone.lines.iter().enumerate() {
                out.push(BodyLine {
                    text: line.text(),
                    bbox: line.bbox,
                    font: line.dominant_font(),
                    page: pi,
                    zone: zone_no - 1,
                    zone_left: zone.bbox.x1,
                    first_in_zone: li == 0,
                });
            }
        }
    }
    out
}

/// Raw values and standard scores of one line: height, length, x offset
/// within the zone, distance from the previous line, and font code.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LineStats {
    pub raw: [f64; 5],
    pub z: [f64; 5],
    /// Whether the distance to the previous line is defined.
    pub has_distance: bool,
}

impl LineStats {
    pub fn zh(&self) -> f64 {
        self.z[0]
    }
    pub fn zl(&self) -> f64 {
        self.z[1]
    }
    pub fn zx(&self) -> f64 {
        self.z[2]
    }
    pub fn zd(&self) -> f64 {
        self.z[3]
    }
    pub fn zf(&self) -> f64 {
        self.z[4]
    }
}

fn zscores(values: &[Option<f64>]) -> Vec<f64> {
    let pop: Vec<f64> = values.iter().flatten().copied().collect();
    if pop.len() < 2 {
        return vec![0.0; values.len()];
    }
    let n = pop.len() as f64;
    let mean = pop.iter().sum::<f64>() / n;
    let sd = (pop.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    values
        .iter()
        .map(|v| match v {
            Some(v) if sd > 1e-12 => (v - mean) / sd,
            _ => 0.0,
        })
        .collect()
}

/// Fonts numbered by decreasing frequency among the lines (most common = 0).
fn font_codes(lines: &[BodyLine]) -> HashMap<u32, usize> {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for l in lines {
        *counts.entry(l.font).or_default() += 1;
    }
    let mut v: Vec<(u32, usize)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    v.into_iter().enumerate().map(|(i, (f, _))| (f, i)).collect()
}

pub fn compute_line_zscores(lines: &[BodyLine]) -> Vec<LineStats> {
    if lines.len() < 2 {
        return lines
            .iter()
            .map(|l| LineStats {
                raw: [l.bbox.height(), l.bbox.width(), l.bbox.x1 - l.zone_left, 0.0, 0.0],
                ..LineStats::default()
            })
            .collect();
    }
    let codes = font_codes(lines);
    let distance = |i: usize| -> Option<f64> {
        let (p, l) = (&lines[i.checked_sub(1)?], &lines[i]);
        (p.page == l.page && p.bbox.y2 <= l.bbox.y1 && p.bbox.horizontal_overlap(&l.bbox) > 0.0)
            .then_some(l.bbox.y1 - p.bbox.y2)
    };
    let raw: Vec<[Option<f64>; 5]> = (0..lines.len())
        .map(|i| {
            let l = &lines[i];
            [
                Some(l.bbox.height()),
                Some(l.bbox.width()),
                Some(l.bbox.x1 - l.zone_left),
                distance(i),
                Some(codes[&l.font] as f64),
            ]
        })
        .collect();
    let cols: Vec<Vec<f64>> = (0..5).map(|k| zscores(&raw.iter().map(|r| r[k]).collect::<Vec<_>>())).collect();
    raw.iter()
        .enumerate()
        .map(|(i, r)| LineStats {
            raw: r.map(|v| v.unwrap_or(0.0)),
            z: [cols[0][i], cols[1][i], cols[2][i], cols[3][i], cols[4][i]],
            has_distance: r[3].is_some(),
        })
        .collect()
}

fn has_letter_run(s: &str, n: usize) -> bool {
    let mut run = 0;
    for c in s.chars() {
        run = if c.is_alphabetic() { run + 1 } else { 0 };
        if run >= n {
            return true;
        }
    }
    false
}

fn violates(
    i: usize,
    lines: &[BodyLine],
    stats: &[LineStats],
    cfg: &HeaderConfig,
    typicality: f64,
    dict: &Dictionaries,
) -> bool {
    let (l, s) = (&lines[i], &stats[i]);
    if s.zl() > cfg.max_zl || s.zh() < cfg.min_zh {
        return true;
    }
    if s.zf().abs() < typicality && s.zd().abs() < typicality && s.zx().abs() < typicality {
        return true;
    }
    if dict.is_caption(&l.text) || l.text.chars().any(|c| dict.equation_chars.contains(&c)) {
        return true;
    }
    let visible: Vec<char> = l.text.chars().filter(|c| !c.is_whitespace()).collect();
    let letters = visible.iter().filter(|c| c.is_alphabetic()).count();
    if 2 * letters < visible.len() || !has_letter_run(&l.text, 4) {
        return true;
    }
    // Only applies when something follows.
    let next = &lines[i + 1..lines.len().min(i + 6)];
    !next.is_empty() && !next.iter().any(|n| text::starts_uppercase(&n.text))
}

/// First lines of headers: seeded from zone-initial lines, pruned, extended
/// by header fonts, and pruned again with tolerant thresholds.
pub fn detect_first_header_lines(
    lines: &[BodyLine],
    stats: &[LineStats],
    cfg: &HeaderConfig,
    dict: &Dictionaries,
) -> Vec<usize> {
    let mut candidates: Vec<usize> = (0..lines.len())
        .filter(|&i| lines[i].first_in_zone && text::matches_header_pattern(&lines[i].text))
        .collect();
    candidates.retain(|&i| !violates(i, lines, stats, cfg, cfg.typicality_strict, dict));
    let mut per_font: HashMap<u32, (usize, f64)> = HashMap::new();
    for &i in &candidates {
        let e = per_font.entry(lines[i].font).or_insert((0, stats[i].zf()));
        e.0 += 1;
    }
    let header_fonts: Vec<u32> = per_font
        .iter()
        .filter(|(_, (n, zf))| *n >= cfg.min_font_candidates && zf.abs() > cfg.font_outlier)
        .map(|(f, _)| *f)
        .collect();
    for i in 0..lines.len() {
        if header_fonts.contains(&lines[i].font) && text::matches_header_pattern(&lines[i].text) && !candidates.contains(&i) {
            candidates.push(i);
        }
    }
    candidates.sort_unstable();
    candidates.retain(|&i| !violates(i, lines, stats, cfg, cfg.typicality_soft, dict));
    candidates
}

fn similar_height(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.max(b)
}

/// Adds up to `max_followers` lines to each first header line.
pub fn extend_headers(lines: &[BodyLine], first: &[usize], cfg: &HeaderConfig) -> Vec<Vec<usize>> {
    first
        .iter()
        .map(|&h| {
            let head = &lines[h];
            let mut followers = Vec::new();
            let mut j = h + 1;
            while j < lines.len() && followers.len() < cfg.max_followers && !first.contains(&j) {
                let l = &lines[j];
                if l.font != head.font || !similar_height(l.bbox.height(), head.bbox.height(), cfg.height_tolerance) {
                    break;
                }
                followers.push(j);
                j += 1;
            }
            let mut group = vec![h];
            if let Some(&last) = followers.last() {
                let last_line = &lines[last];
                let conditions = match lines.get(last + 1) {
                    Some(next) => [
                        last_line.bbox.width() < cfg.shorter_ratio * head.bbox.width(),
                        (last_line.bbox.x1 - last_line.zone_left - (next.bbox.x1 - next.zone_left)).abs() > 1.0,
                        text::starts_uppercase(&next.text),
                        last_line.font != next.font,
                    ],
                    None => [last_line.bbox.width() < cfg.shorter_ratio * head.bbox.width(), true, true, true],
                };
                if conditions.iter().filter(|c| **c).count() >= 2 {
                    group.extend(followers);
                }
            }
            group
        })
        .collect()
}

/// Level (1–3) of each header group, or `None` for headers in a fourth or
/// later style cluster.
pub fn header_levels(lines: &[BodyLine], headers: &[Vec<usize>], cfg: &HeaderConfig) -> Vec<Option<u8>> {
    let mut reps: Vec<(u32, f64)> = Vec::new();
    let cluster: Vec<usize> = headers
        .iter()
        .map(|g| {
            let l = &lines[g[0]];
            let h = l.bbox.height();
            match reps.iter().position(|&(f, rh)| f == l.font && similar_height(h, rh, cfg.height_tolerance)) {
                Some(c) => c,
                None => {
                    reps.push((l.font, h));
                    reps.len() - 1
                }
            }
        })
        .collect();
    let mut levels: Vec<Option<u8>> = vec![None; headers.len()];
    let Some(&top) = cluster.first() else {
        return levels;
    };
    let mut i = 0;
    while i < headers.len() {
        if cluster[i] >= 3 {
            i += 1;
            continue;
        }
        if cluster[i] != top {
            // Headers before the first top-level one cannot occur: the
            // first header defines the top cluster.
            i += 1;
            continue;
        }
        levels[i] = Some(1);
        let mut j = i + 1;
        let mut second = None;
        while j < headers.len() && cluster[j] != top {
            if cluster[j] < 3 {
                let c = *second.get_or_insert(cluster[j]);
                levels[j] = Some(if cluster[j] == c { 2 } else { 3 });
            }
            j += 1;
        }
        i = j;
    }
    levels
}

fn push_node(siblings: &mut Vec<SectionNode>, node: SectionNode) {
    match siblings.last_mut() {
        Some(parent) if parent.level < node.level => push_node(&mut parent.children, node),
        _ => siblings.push(node),
    }
}

fn section_content(lines: &[&str]) -> String {
    text::normalize_ligatures(&text::join_lines(lines))
}

/// Section tree from header groups; everything between headers is content.
/// Text before the first header goes to an untitled level-1 node.
pub fn build_section_hierarchy(lines: &[BodyLine], headers: &[Vec<usize>], cfg: &HeaderConfig) -> Vec<SectionNode> {
    let levels = header_levels(lines, headers, cfg);
    let mut starts: HashMap<usize, usize> = HashMap::new();
    for (k, g) in headers.iter().enumerate() {
        if levels[k].is_some() {
            starts.insert(g[0], k);
        }
    }
    let mut flat: Vec<(u8, Vec<&str>, Vec<&str>)> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if let Some(&k) = starts.get(&i) {
            let g = &headers[k];
            flat.push((levels[k].unwrap(), g.iter().map(|&j| lines[j].text.as_str()).collect(), Vec::new()));
            i = g[g.len() - 1] + 1;
            continue;
        }
        if flat.is_empty() {
            flat.push((1, Vec::new(), Vec::new()));
        }
        flat.last_mut().unwrap().2.push(lines[i].text.as_str());
        i += 1;
    }
    let mut roots = Vec::new();
    let mut parent_level = 0;
    for (level, title, content) in flat {
        // A level can only deepen one step at a time.
        let level = level.min(parent_level + 1);
        parent_level = level;
        push_node(
            &mut roots,
            SectionNode {
                level,
                title: section_content(&title),
                content: section_content(&content),
                children: Vec::new(),
            },
        );
    }
    roots
}

/// Section tree of the body. When a body classifier is given, body zones
/// are (re)labelled first.
pub fn extract_body(
    doc: &Document,
    classifier: Option<&ZoneClassifier>,
    dict: &Dictionaries,
    cfg: &HeaderConfig,
) -> Result<Vec<SectionNode>> {
    let labelled;
    let doc = match classifier {
        Some(c) => {
            labelled = classify_zones(doc, c, dict)?;
            &labelled
        }
        None => doc,
    };
    let lines = body_lines(doc);
    if lines.is_empty() {
        return Ok(Vec::new());
    }
    let stats = compute_line_zscores(&lines);
    let first = detect_first_header_lines(&lines, &stats, cfg, dict);
    let headers = extend_headers(&lines, &first, cfg);
    Ok(build_section_hierarchy(&lines, &headers, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(text: &str, font: u32, y: f64, h: f64, zone: usize, first: bool) -> BodyLine {
        BodyLine {
            text: text.into(),
            bbox: BoundingBox::new(50.0, y, 50.0 + 5.0 * text.len() as f64, y + h),
            font,
            page: 0,
            zone,
            zone_left: 50.0,
            first_in_zone: first,
        }
    }

    #[test]
    fn zscore_edge_cases() {
        let one = [line("Alone", 0, 0.0, 10.0, 0, true)];
        assert_eq!(compute_line_zscores(&one)[0].z, [0.0; 5]);
        let flat: Vec<BodyLine> = (0..4).map(|i| line("same text", 0, i as f64 * 12.0, 10.0, 0, i == 0)).collect();
        let s = compute_line_zscores(&flat);
        assert!(s.iter().all(|x| x.zh() == 0.0 && x.zl() == 0.0));
        assert!(!s[0].has_distance && s[1].has_distance);
        let mut tall = flat.clone();
        tall[2].bbox.y2 += 10.0;
        let s = compute_line_zscores(&tall);
        let max = s.iter().map(|x| x.zh()).fold(f64::MIN, f64::max);
        assert_eq!(s[2].zh(), max);
    }

    fn levels_of(fonts: &[u32]) -> Vec<Option<u8>> {
        let lines: Vec<BodyLine> = fonts.iter().enumerate().map(|(i, &f)| line("Head", f, i as f64 * 20.0, 10.0, i, true)).collect();
        let groups: Vec<Vec<usize>> = (0..fonts.len()).map(|i| vec![i]).collect();
        header_levels(&lines, &groups, &HeaderConfig::default())
    }

    #[test]
    fn hierarchy_rules() {
        assert_eq!(levels_of(&[1, 2, 1, 2]), vec![Some(1), Some(2), Some(1), Some(2)]);
        assert_eq!(levels_of(&[1, 1, 1]), vec![Some(1); 3]);
        assert_eq!(levels_of(&[1, 2, 3, 2]), vec![Some(1), Some(2), Some(3), Some(2)]);
        assert_eq!(levels_of(&[1, 2, 3, 4]), vec![Some(1), Some(2), Some(3), None]);
    }

    #[test]
    fn caption_candidate_is_pruned() {
        let dict = Dictionaries::builtin();
        let mut lines = vec![line("Table 2: results", 3, 0.0, 14.0, 0, true)];
        for i in 1..8 {
            lines.push(line("Body text of a paragraph that goes on", 0, 20.0 + 12.0 * i as f64, 10.0, 0, false));
        }
        let stats = compute_line_zscores(&lines);
        assert!(detect_first_header_lines(&lines, &stats, &HeaderConfig::default(), dict).is_empty());
        lines[0].text = "Results".into();
        assert_eq!(detect_first_header_lines(&lines, &stats, &HeaderConfig::default(), dict), vec![0]);
    }

    #[test]
    fn preamble_and_nesting() {
        let lines = vec![
            line("Opening words", 0, 0.0, 10.0, 0, true),
            line("Intro", 1, 20.0, 12.0, 1, true),
            line("text a", 0, 40.0, 10.0, 1, false),
            line("Detail", 2, 60.0, 11.0, 2, true),
            line("text b", 0, 80.0, 10.0, 2, false),
        ];
        let nodes = build_section_hierarchy(&lines, &[vec![1], vec![3]], &HeaderConfig::default());
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].title, "");
        assert_eq!(nodes[0].content, "Opening words");
        assert_eq!(nodes[1].children[0].title, "Detail");
        assert_eq!(nodes[1].children[0].content, "text b");
    }
}

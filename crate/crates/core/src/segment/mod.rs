//! Docstrum-style bottom-up page segmentation: nearest-neighbour pairs give
//! the text orientation and character spacing; transitive closure over
//! within-line pairs gives line segments, which are grouped into zones and
//! finally into lines and words.

mod histogram;
mod neighbors;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{union_box, BoundingBox, Character, Line, Page, Word, Zone};

pub use histogram::{histogram_peak, Histogram};
pub use neighbors::{angle_difference, fold_angle, nearest_neighbors, pair, NeighborPair};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmenterConfig {
    pub neighbor_count: usize,
    /// Radians.
    pub angle_hist_bin: f64,
    /// Points.
    pub spacing_hist_bin: f64,
    pub gauss_sigma_bins: f64,
    /// Radians.
    pub angle_tolerance: f64,
    /// Maximum edge gap inside a line segment, in within-line spacings.
    pub within_line_max_dist_factor: f64,
    /// Maximum centre offset perpendicular to the text, in within-line spacings.
    pub within_line_max_offset_factor: f64,
    /// Vertical overlap (fraction of the smaller height) for merging segments into a line.
    pub line_merge_overlap: f64,
    /// Maximum vertical gap between lines of one zone, in line heights.
    pub zone_line_dist_factor: f64,
    /// Maximum horizontal gap between non-overlapping lines of one zone, in within-line spacings.
    pub zone_horizontal_factor: f64,
    pub zone_overlap_merge_threshold: f64,
    pub word_space_factor: f64,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        Self {
            neighbor_count: 5,
            angle_hist_bin: PI / 256.0,
            spacing_hist_bin: 0.5,
            gauss_sigma_bins: 2.0,
            angle_tolerance: PI / 12.0,
            within_line_max_dist_factor: 2.5,
            within_line_max_offset_factor: 0.5,
            line_merge_overlap: 0.5,
            zone_line_dist_factor: 1.8,
            zone_horizontal_factor: 2.5,
            zone_overlap_merge_threshold: 0.9,
            word_space_factor: 0.6,
        }
    }
}

pub fn estimate_orientation(pairs: &[NeighborPair], cfg: &SegmenterConfig) -> Result<f64> {
    let angles: Vec<f64> = pairs.iter().map(|p| p.angle).collect();
    histogram_peak(&angles, cfg.angle_hist_bin, cfg.gauss_sigma_bins).map_err(|_| Error::NoData("orientation"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacings {
    pub within: Option<f64>,
    pub between: Option<f64>,
}

impl Spacings {
    pub fn within(&self) -> Result<f64> {
        self.within.ok_or(Error::NoData("within-line spacing"))
    }

    pub fn between(&self) -> Result<f64> {
        self.between.ok_or(Error::NoData("between-line spacing"))
    }
}

pub fn estimate_spacings(pairs: &[NeighborPair], theta: f64, cfg: &SegmenterConfig) -> Spacings {
    let pick = |dir: f64| {
        let d: Vec<f64> = pairs
            .iter()
            .filter(|p| angle_difference(p.angle, dir) <= cfg.angle_tolerance)
            .map(|p| p.distance)
            .collect();
        histogram_peak(&d, cfg.spacing_hist_bin, cfg.gauss_sigma_bins).ok()
    };
    Spacings {
        within: pick(theta),
        between: pick(theta + FRAC_PI_2),
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, so groups are identified by their first member
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Groups in order of their smallest member; members ascending.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}

/// A set of characters (indices into the page's character list).
#[derive(Debug, Clone, PartialEq)]
pub struct LineSegment {
    pub chars: Vec<usize>,
    pub bbox: BoundingBox,
}

fn group_box(chars: &[Character], members: &[usize]) -> BoundingBox {
    union_box(members.iter().map(|&i| &chars[i].bbox)).expect("non-empty group")
}

/// Transitive closure over neighbour pairs that run along the text direction
/// and are close both along it and across it.
pub fn build_lines(
    chars: &[Character],
    pairs: &[NeighborPair],
    theta: f64,
    within: f64,
    cfg: &SegmenterConfig,
) -> Vec<LineSegment> {
    let (sin, cos) = theta.sin_cos();
    let mut uf = UnionFind::new(chars.len());
    for p in pairs {
        if angle_difference(p.angle, theta) > cfg.angle_tolerance {
            continue;
        }
        let (a, b) = (&chars[p.a].bbox, &chars[p.b].bbox);
        let (ca, cb) = (a.center(), b.center());
        let (dx, dy) = (cb.0 - ca.0, cb.1 - ca.1);
        let along = dx * cos + dy * sin;
        let across = -dx * sin + dy * cos;
        let gap = along.abs() - (a.width() + b.width()) / 2.0;
        if gap <= within * cfg.within_line_max_dist_factor
            && across.abs() <= within * cfg.within_line_max_offset_factor
        {
            uf.union(p.a, p.b);
        }
    }
    uf.groups()
        .into_iter()
        .map(|g| LineSegment {
            bbox: group_box(chars, &g),
            chars: g,
        })
        .collect()
}

/// Groups line segments into zones (indices into `segments`).
pub fn build_zones(segments: &[LineSegment], within: f64, cfg: &SegmenterConfig) -> Vec<Vec<usize>> {
    let n = segments.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&segments[i].bbox, &segments[j].bbox);
            let v_gap = -a.vertical_overlap(b);
            let h_overlap = a.horizontal_overlap(b);
            let line_height = a.height().min(b.height());
            if v_gap <= line_height * cfg.zone_line_dist_factor
                && (h_overlap > 0.0 || -h_overlap <= within * cfg.zone_horizontal_factor)
            {
                uf.union(i, j);
            }
        }
    }
    let mut zones = uf.groups();
    // Merge zones whose boxes mostly overlap, until none do.
    loop {
        let boxes: Vec<BoundingBox> = zones
            .iter()
            .map(|z| union_box(z.iter().map(|&s| &segments[s].bbox)).unwrap())
            .collect();
        let mut merged = None;
        'outer: for i in 0..zones.len() {
            for j in i + 1..zones.len() {
                let inter = boxes[i].intersection_area(&boxes[j]);
                let min_area = boxes[i].area().min(boxes[j].area());
                if inter > 0.0 && inter >= cfg.zone_overlap_merge_threshold * min_area {
                    merged = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = merged else { break };
        let moved = zones.remove(j);
        zones[i].extend(moved);
        zones[i].sort_unstable();
    }
    zones
}

/// Merges the segments of one zone that share a text line (vertical overlap
/// of at least `line_merge_overlap` of the smaller height). Returns character
/// index lists sorted left to right, lines ordered top to bottom.
pub fn merge_line_segments(
    chars: &[Character],
    segments: &[&LineSegment],
    cfg: &SegmenterConfig,
) -> Vec<Vec<usize>> {
    let n = segments.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&segments[i].bbox, &segments[j].bbox);
            if a.vertical_overlap(b) >= cfg.line_merge_overlap * a.height().min(b.height()) {
                uf.union(i, j);
            }
        }
    }
    let mut lines: Vec<Vec<usize>> = uf
        .groups()
        .into_iter()
        .map(|g| {
            let mut cs: Vec<usize> = g.iter().flat_map(|&s| segments[s].chars.iter().copied()).collect();
            sort_left_to_right(chars, &mut cs);
            cs
        })
        .collect();
    lines.sort_by(|a, b| {
        let (ba, bb) = (group_box(chars, a), group_box(chars, b));
        ba.y1.total_cmp(&bb.y1).then(ba.x1.total_cmp(&bb.x1))
    });
    lines
}

fn sort_left_to_right(chars: &[Character], idx: &mut [usize]) {
    idx.sort_by(|&a, &b| {
        let (p, q) = (&chars[a].bbox, &chars[b].bbox);
        p.x1.total_cmp(&q.x1).then(p.y1.total_cmp(&q.y1)).then(a.cmp(&b))
    });
}

/// Splits a left-to-right character run wherever the horizontal gap exceeds
/// `within * word_space_factor`.
pub fn detect_words(chars: &[Character], line: &[usize], within: f64, cfg: &SegmenterConfig) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut right_edge = f64::NEG_INFINITY;
    for &c in line {
        let b = &chars[c].bbox;
        if words.is_empty() || b.x1 - right_edge > within * cfg.word_space_factor {
            words.push(vec![c]);
        } else {
            words.last_mut().unwrap().push(c);
        }
        right_edge = right_edge.max(b.x2);
    }
    words
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedPage {
    pub page: Page,
    pub theta: Option<f64>,
    pub spacings: Option<Spacings>,
    /// Set when the statistics could not be estimated and the single-zone
    /// fallback was used.
    pub warning: Option<String>,
}

fn make_line(chars: &[Character], words: Vec<Vec<usize>>) -> Line {
    Line::new(
        words
            .into_iter()
            .map(|w| Word::new(w.into_iter().map(|i| chars[i].clone()).collect()))
            .collect(),
    )
}

pub fn segment_page(chars: &[Character], width: f64, height: f64, cfg: &SegmenterConfig) -> SegmentedPage {
    if chars.is_empty() {
        return SegmentedPage {
            page: Page::new(width, height, vec![]),
            theta: None,
            spacings: None,
            warning: None,
        };
    }
    let boxes: Vec<BoundingBox> = chars.iter().map(|c| c.bbox).collect();
    let pairs = nearest_neighbors(&boxes, cfg.neighbor_count);
    let estimate = estimate_orientation(&pairs, cfg).and_then(|theta| {
        let sp = estimate_spacings(&pairs, theta, cfg);
        sp.within().map(|w| (theta, sp, w))
    });
    let (theta, spacings, within) = match estimate {
        Ok(v) => v,
        Err(e) => {
            let mut all: Vec<usize> = (0..chars.len()).collect();
            sort_left_to_right(chars, &mut all);
            let zone = Zone::new(vec![make_line(chars, vec![all])]);
            return SegmentedPage {
                page: Page::new(width, height, vec![zone]),
                theta: None,
                spacings: None,
                warning: (chars.len() > 1).then(|| format!("segmentation fallback: {e}")),
            };
        }
    };
    let segments = build_lines(chars, &pairs, theta, within, cfg);
    let zones = build_zones(&segments, within, cfg)
        .into_iter()
        .map(|members| {
            let segs: Vec<&LineSegment> = members.iter().map(|&s| &segments[s]).collect();
            let lines = merge_line_segments(chars, &segs, cfg)
                .into_iter()
                .map(|l| {
                    let words = detect_words(chars, &l, within, cfg);
                    make_line(chars, words)
                })
                .collect();
            Zone::new(lines)
        })
        .collect();
    SegmentedPage {
        page: Page::new(width, height, zones),
        theta: Some(theta),
        spacings: Some(spacings),
        warning: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(text: &str, x0: f64, y: f64, pitch: f64) -> Vec<Character> {
        text.chars()
            .enumerate()
            .filter(|(_, c)| *c != ' ')
            .map(|(i, c)| {
                let x = x0 + i as f64 * pitch;
                Character::new(c.to_string(), BoundingBox::new(x, y, x + pitch, y + 10.0), 0)
            })
            .collect()
    }

    #[test]
    fn empty_and_single() {
        let cfg = SegmenterConfig::default();
        assert!(segment_page(&[], 100.0, 100.0, &cfg).page.zones.is_empty());
        let one = row("a", 10.0, 10.0, 5.0);
        let s = segment_page(&one, 100.0, 100.0, &cfg);
        assert_eq!(s.page.zones.len(), 1);
        assert_eq!(s.page.zones[0].lines[0].words.len(), 1);
        assert!(s.warning.is_none());
    }

    #[test]
    fn one_paragraph_is_one_zone() {
        let mut chars = Vec::new();
        for l in 0..4 {
            chars.extend(row("lorem ipsum dolor sit amet", 50.0, 100.0 + l as f64 * 12.0, 5.0));
        }
        let s = segment_page(&chars, 600.0, 800.0, &SegmenterConfig::default());
        assert_eq!(s.page.zones.len(), 1);
        let z = &s.page.zones[0];
        assert_eq!(z.lines.len(), 4);
        assert_eq!(z.lines[0].text(), "lorem ipsum dolor sit amet");
    }

    #[test]
    fn punctuation_sticks_to_its_word() {
        let chars = row("word. next", 0.0, 0.0, 5.0);
        let line: Vec<usize> = (0..chars.len()).collect();
        let w = detect_words(&chars, &line, 5.0, &SegmenterConfig::default());
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].len(), 5);
    }

    #[test]
    fn union_find_groups_by_first_member() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 0);
        assert_eq!(uf.groups(), vec![vec![0, 3], vec![1, 4], vec![2]]);
    }
}

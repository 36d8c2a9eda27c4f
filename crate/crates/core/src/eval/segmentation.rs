//! Word, line and zone scores: an element is correct when its character set
//! equals the character set of some element at the same level in the other
//! document.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Character, Document};

type CharKey = (String, [u64; 4], u32);

fn key(c: &Character) -> CharKey {
    (
        c.text.clone(),
        [c.bbox.x1.to_bits(), c.bbox.y1.to_bits(), c.bbox.x2.to_bits(), c.bbox.y2.to_bits()],
        c.font,
    )
}

fn set<'a>(chars: impl Iterator<Item = &'a Character>) -> Vec<CharKey> {
    let mut v: Vec<CharKey> = chars.map(key).collect();
    v.sort();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentationScores {
    pub words: Option<f64>,
    pub lines: Option<f64>,
    pub zones: Option<f64>,
}

struct Levels {
    words: Vec<Vec<CharKey>>,
    lines: Vec<Vec<CharKey>>,
    zones: Vec<Vec<CharKey>>,
}

fn levels(d: &Document) -> Levels {
    let zones = d.zones().map(|z| set(z.chars())).collect();
    let lines = d.zones().flat_map(|z| &z.lines).map(|l| set(l.chars())).collect();
    let words = d
        .zones()
        .flat_map(|z| &z.lines)
        .flat_map(|l| &l.words)
        .map(|w| set(w.chars.iter()))
        .collect();
    Levels { words, lines, zones }
}

fn fraction(ground: &[Vec<CharKey>], test: &[Vec<CharKey>]) -> Option<f64> {
    if ground.is_empty() {
        return None;
    }
    let t: HashSet<&Vec<CharKey>> = test.iter().collect();
    Some(ground.iter().filter(|g| t.contains(g)).count() as f64 / ground.len() as f64)
}

pub fn segmentation_scores(ground: &Document, test: &Document) -> Result<SegmentationScores> {
    let mut counts: HashMap<CharKey, i64> = HashMap::new();
    for c in ground.chars() {
        *counts.entry(key(c)).or_default() += 1;
    }
    for c in test.chars() {
        *counts.entry(key(c)).or_default() -= 1;
    }
    if counts.values().any(|&n| n != 0) {
        return Err(Error::IncomparableDocuments("character multisets differ".into()));
    }
    let g = levels(ground);
    let t = levels(test);
    Ok(SegmentationScores {
        words: fraction(&g.words, &t.words),
        lines: fraction(&g.lines, &t.lines),
        zones: fraction(&g.zones, &t.zones),
    })
}

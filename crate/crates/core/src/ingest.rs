//! Character dumps and the cleaning pass applied before segmentation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BoundingBox, Character, FontTable};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CharDump {
    pub pages: Vec<DumpPage>,
    pub fonts: FontTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumpPage {
    pub width: f64,
    pub height: f64,
    pub chars: Vec<Character>,
}

#[derive(Serialize, Deserialize)]
struct RawDump {
    pages: Vec<RawPage>,
}

#[derive(Serialize, Deserialize)]
struct RawPage {
    width: f64,
    height: f64,
    chars: Vec<RawChar>,
}

#[derive(Serialize, Deserialize)]
struct RawChar {
    t: String,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    font: String,
}

pub fn load_chardump(bytes: &[u8]) -> Result<CharDump> {
    let raw: RawDump = serde_json::from_slice(bytes).map_err(Error::from_json)?;
    let mut fonts = FontTable::default();
    let mut pages = Vec::with_capacity(raw.pages.len());
    for (pi, p) in raw.pages.into_iter().enumerate() {
        if !(p.width > 0.0 && p.height > 0.0) {
            return Err(Error::parse(format!("page {pi}"), "page dimensions must be positive"));
        }
        let mut chars = Vec::with_capacity(p.chars.len());
        for (ci, c) in p.chars.into_iter().enumerate() {
            let bbox = BoundingBox::new(c.x1, c.y1, c.x2, c.y2);
            if c.t.is_empty() || !bbox.is_valid() {
                return Err(Error::parse(format!("page {pi} char {ci}"), "empty text or invalid box"));
            }
            chars.push(Character::new(c.t, bbox, fonts.intern(&c.font)));
        }
        pages.push(DumpPage {
            width: p.width,
            height: p.height,
            chars,
        });
    }
    Ok(CharDump { pages, fonts })
}

pub fn store_chardump(dump: &CharDump) -> Vec<u8> {
    let raw = RawDump {
        pages: dump
            .pages
            .iter()
            .map(|p| RawPage {
                width: p.width,
                height: p.height,
                chars: p
                    .chars
                    .iter()
                    .map(|c| RawChar {
                        t: c.text.clone(),
                        x1: c.bbox.x1,
                        y1: c.bbox.y1,
                        x2: c.bbox.x2,
                        y2: c.bbox.y2,
                        font: dump.fonts.name(c.font).unwrap_or("unknown,0").to_string(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_vec(&raw).expect("chardump serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningConfig {
    /// Side of the square density window, points.
    pub window: f64,
    pub window_step: f64,
    /// Characters per pt² above which a window is emptied.
    pub max_window_density: f64,
    /// Characters per pt² above which windows are scanned at all.
    pub max_page_density: f64,
    /// Box tolerance for duplicate detection, points.
    pub duplicate_tolerance: f64,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        Self {
            window: 50.0,
            window_step: 25.0,
            max_window_density: 0.15,
            max_page_density: 0.012,
            duplicate_tolerance: 1e-6,
        }
    }
}

pub fn clean_characters(dump: &CharDump, cfg: &CleaningConfig) -> CharDump {
    CharDump {
        pages: dump.pages.iter().map(|p| clean_page(p, cfg)).collect(),
        fonts: dump.fonts.clone(),
    }
}

pub fn clean_page(page: &DumpPage, cfg: &CleaningConfig) -> DumpPage {
    let frame = BoundingBox::new(0.0, 0.0, page.width, page.height);
    let inside: Vec<&Character> = page.chars.iter().filter(|c| frame.contains(&c.bbox)).collect();
    let unique = drop_duplicates(&inside, cfg.duplicate_tolerance);
    let kept = drop_dense(&unique, page.width, page.height, cfg);
    DumpPage {
        width: page.width,
        height: page.height,
        chars: kept.into_iter().cloned().collect(),
    }
}

fn same(a: &Character, b: &Character, tol: f64) -> bool {
    a.text == b.text && a.bbox.approx_eq(&b.bbox, tol)
}

/// Keeps the first of every group of characters with equal text and box.
fn drop_duplicates<'a>(chars: &[&'a Character], tol: f64) -> Vec<&'a Character> {
    let mut order: Vec<usize> = (0..chars.len()).collect();
    order.sort_by(|&a, &b| chars[a].bbox.x1.total_cmp(&chars[b].bbox.x1).then(a.cmp(&b)));
    let mut dropped = vec![false; chars.len()];
    for (k, &i) in order.iter().enumerate() {
        if dropped[i] {
            continue;
        }
        for &j in &order[k + 1..] {
            if chars[j].bbox.x1 - chars[i].bbox.x1 > tol {
                break;
            }
            if !dropped[j] && same(chars[i], chars[j], tol) {
                // keep whichever came first in the input
                let later = i.max(j);
                dropped[later] = true;
                if later == i {
                    break;
                }
            }
        }
    }
    chars
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(&c, _)| c)
        .collect()
}

/// Window origins stepping by `step` so that the last window touches `extent`.
pub fn window_origins(extent: f64, window: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = 0.0;
    loop {
        out.push(x);
        if x + window >= extent {
            break;
        }
        x += step;
    }
    out
}

fn drop_dense<'a>(chars: &[&'a Character], width: f64, height: f64, cfg: &CleaningConfig) -> Vec<&'a Character> {
    let page_density = chars.len() as f64 / (width * height);
    if page_density <= cfg.max_page_density || chars.is_empty() {
        return chars.to_vec();
    }
    // Count centres on a grid of step-sized cells; each window is a block of cells.
    let step = cfg.window_step;
    let cells_per_window = (cfg.window / step).round().max(1.0) as usize;
    let nx = (width / step).ceil().max(1.0) as usize;
    let ny = (height / step).ceil().max(1.0) as usize;
    let cell_of = |c: &Character| {
        let (cx, cy) = c.bbox.center();
        (
            ((cx / step) as usize).min(nx - 1),
            ((cy / step) as usize).min(ny - 1),
        )
    };
    let mut counts = vec![0usize; nx * ny];
    for c in chars {
        let (i, j) = cell_of(c);
        counts[j * nx + i] += 1;
    }
    let mut dense_cell = vec![false; nx * ny];
    let area = cfg.window * cfg.window;
    for wy in 0..ny {
        for wx in 0..nx {
            let (x_end, y_end) = ((wx + cells_per_window).min(nx), (wy + cells_per_window).min(ny));
            let mut n = 0;
            for j in wy..y_end {
                for i in wx..x_end {
                    n += counts[j * nx + i];
                }
            }
            if n as f64 / area > cfg.max_window_density {
                for j in wy..y_end {
                    for i in wx..x_end {
                        dense_cell[j * nx + i] = true;
                    }
                }
            }
        }
    }
    chars
        .iter()
        .filter(|c| {
            let (i, j) = cell_of(c);
            !dense_cell[j * nx + i]
        })
        .copied()
        .collect()
}

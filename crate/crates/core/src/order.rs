//! Reading order: sort characters, words and lines geometrically, then order
//! zones by agglomerative clustering into a binary tree whose children are
//! swapped where needed and read in order.

use std::cmp::Ordering;

use crate::geom::{BoundingBox, Document, Page, Zone};

#[derive(Debug, Clone, PartialEq)]
pub enum ZoneGroupTree {
    Leaf {
        zone: usize,
        bbox: BoundingBox,
    },
    Node {
        left: Box<ZoneGroupTree>,
        right: Box<ZoneGroupTree>,
        bbox: BoundingBox,
    },
}

impl ZoneGroupTree {
    pub fn bbox(&self) -> &BoundingBox {
        match self {
            Self::Leaf { bbox, .. } | Self::Node { bbox, .. } => bbox,
        }
    }

    /// Zone indices in in-order (left to right) traversal.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            Self::Leaf { zone, .. } => out.push(*zone),
            Self::Node { left, right, .. } => {
                left.collect(out);
                right.collect(out);
            }
        }
    }

    /// Applies the swap rule at every internal node.
    pub fn swap_children(&mut self) {
        if let Self::Node { left, right, .. } = self {
            left.swap_children();
            right.swap_children();
            if should_swap(left.bbox(), right.bbox()) {
                std::mem::swap(left, right);
            }
        }
    }
}

/// Cosine of the slope of the segment between two points (1 horizontal, 0 vertical).
fn slope_cos(p: (f64, f64), q: (f64, f64)) -> f64 {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let len = dx.hypot(dy);
    if len == 0.0 {
        1.0
    } else {
        dx.abs() / len
    }
}

/// Grows with the empty area a merged box would add, and is halved-ish for
/// vertically aligned boxes so that columns form before rows.
pub fn zone_distance(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let extra = a.union(b).area() - a.area() - b.area();
    let left_edge = |r: &BoundingBox| (r.x1, (r.y1 + r.y2) / 2.0);
    let cos_l = slope_cos(left_edge(a), left_edge(b));
    let cos_m = slope_cos(a.center(), b.center());
    extra * (0.5 + cos_l.min(cos_m))
}

/// True when the right group should be read before the left one.
pub fn should_swap(left: &BoundingBox, right: &BoundingBox) -> bool {
    if left.x2 <= right.x1 {
        return false;
    }
    if right.x2 <= left.x1 {
        return true;
    }
    if left.y2 <= right.y1 {
        return false;
    }
    if right.y2 <= left.y1 {
        return true;
    }
    let (lc, rc) = (left.center(), right.center());
    (rc.0 - lc.0) + (rc.1 - lc.1) < 0.0
}

/// Repeatedly joins the closest pair of groups (distance between group
/// boxes); ties go to the lexicographically lowest pair of positions.
pub fn cluster_zones(boxes: &[BoundingBox]) -> Option<ZoneGroupTree> {
    let mut groups: Vec<ZoneGroupTree> = boxes
        .iter()
        .enumerate()
        .map(|(zone, &bbox)| ZoneGroupTree::Leaf { zone, bbox })
        .collect();
    while groups.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let d = zone_distance(groups[i].bbox(), groups[j].bbox());
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let (_, i, j) = best;
        let right = groups.remove(j);
        let left = std::mem::replace(
            &mut groups[i],
            ZoneGroupTree::Leaf {
                zone: usize::MAX,
                bbox: BoundingBox::new(0.0, 0.0, 0.0, 0.0),
            },
        );
        let bbox = left.bbox().union(right.bbox());
        groups[i] = ZoneGroupTree::Node {
            left: Box::new(left),
            right: Box::new(right),
            bbox,
        };
    }
    groups.pop()
}

fn by_x(a: &BoundingBox, b: &BoundingBox) -> Ordering {
    a.x1.total_cmp(&b.x1).then(a.y1.total_cmp(&b.y1))
}

fn by_y(a: &BoundingBox, b: &BoundingBox) -> Ordering {
    a.y1.total_cmp(&b.y1).then(a.x1.total_cmp(&b.x1))
}

fn sort_zone_content(zone: &mut Zone) {
    for line in &mut zone.lines {
        for word in &mut line.words {
            word.chars.sort_by(|a, b| by_x(&a.bbox, &b.bbox));
        }
        line.words.sort_by(|a, b| by_x(&a.bbox, &b.bbox));
    }
    zone.lines.sort_by(|a, b| by_y(&a.bbox, &b.bbox));
}

pub fn order_page(page: &Page) -> Page {
    let mut zones = page.zones.clone();
    zones.iter_mut().for_each(sort_zone_content);
    // Presorting makes the clustering tie-break geometric rather than
    // dependent on the incoming order, which keeps the pass idempotent.
    zones.sort_by(|a, b| {
        by_y(&a.bbox, &b.bbox)
            .then(a.bbox.x2.total_cmp(&b.bbox.x2))
            .then(a.bbox.y2.total_cmp(&b.bbox.y2))
    });
    let boxes: Vec<BoundingBox> = zones.iter().map(|z| z.bbox).collect();
    let order = match cluster_zones(&boxes) {
        Some(mut tree) => {
            tree.swap_children();
            tree.leaves()
        }
        None => vec![],
    };
    let mut slots: Vec<Option<Zone>> = zones.into_iter().map(Some).collect();
    let zones = order.into_iter().map(|i| slots[i].take().unwrap()).collect();
    Page {
        width: page.width,
        height: page.height,
        zones,
    }
}

pub fn resolve_reading_order(doc: &Document) -> Document {
    Document {
        pages: doc.pages.iter().map(order_page).collect(),
        fonts: doc.fonts.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(x: f64, y: f64) -> BoundingBox {
        BoundingBox::new(x, y, x + 1.0, y + 1.0)
    }

    #[test]
    fn distance_cases() {
        // coincident boxes: the union adds no area, so the overlap is subtracted twice
        assert!((zone_distance(&unit(0.0, 0.0), &unit(0.0, 0.0)) + 1.5).abs() < 1e-12);
        assert!((zone_distance(&unit(0.0, 0.0), &unit(2.0, 0.0)) - 1.5).abs() < 1e-12);
        assert!((zone_distance(&unit(0.0, 0.0), &unit(0.0, 2.0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_rules() {
        assert!(!should_swap(&unit(0.0, 0.0), &unit(2.0, 0.0)));
        assert!(should_swap(&unit(2.0, 0.0), &unit(0.0, 0.0)));
        assert!(should_swap(&unit(0.0, 2.0), &unit(0.0, 0.0)));
        // overlapping: right centre is 3 left and 1 down
        let l = BoundingBox::new(3.0, 0.0, 6.0, 4.0);
        let r = BoundingBox::new(0.0, 1.0, 3.5, 5.0);
        assert!(should_swap(&l, &r));
    }

    #[test]
    fn close_pair_joins_first() {
        let t = cluster_zones(&[unit(0.0, 0.0), unit(1.5, 0.0), unit(30.0, 0.0)]).unwrap();
        let ZoneGroupTree::Node { left, .. } = t else { panic!() };
        assert_eq!(left.leaves(), vec![0, 1]);
    }
}

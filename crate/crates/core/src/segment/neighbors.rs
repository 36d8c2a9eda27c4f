use std::f64::consts::{FRAC_PI_2, PI};

use crate::geom::BoundingBox;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborPair {
    pub a: usize,
    pub b: usize,
    /// Distance between box centres, points.
    pub distance: f64,
    /// Direction from `a` to `b` folded into `(-π/2, π/2]`.
    pub angle: f64,
}

/// Folds an angle into `(-π/2, π/2]` (lines have no direction).
pub fn fold_angle(a: f64) -> f64 {
    let mut a = a % PI;
    if a > FRAC_PI_2 {
        a -= PI;
    } else if a <= -FRAC_PI_2 {
        a += PI;
    }
    a
}

/// Smallest difference between two undirected angles, in `[0, π/2]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    fold_angle(a - b).abs()
}

pub fn pair(a: usize, b: usize, ca: (f64, f64), cb: (f64, f64)) -> NeighborPair {
    let (dx, dy) = (cb.0 - ca.0, cb.1 - ca.1);
    NeighborPair {
        a,
        b,
        distance: dx.hypot(dy),
        angle: fold_angle(dy.atan2(dx)),
    }
}

/// For every box, its `min(k, n-1)` nearest boxes by centre distance, sorted
/// by `(distance, index)`. Output is grouped by `a` in input order.
pub fn nearest_neighbors(boxes: &[BoundingBox], k: usize) -> Vec<NeighborPair> {
    let n = boxes.len();
    if n < 2 || k == 0 {
        return vec![];
    }
    let k = k.min(n - 1);
    let centres: Vec<(f64, f64)> = boxes.iter().map(BoundingBox::center).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| centres[a].0.total_cmp(&centres[b].0).then(a.cmp(&b)));
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut out = Vec::with_capacity(n * k);
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for i in 0..n {
        best.clear();
        let ci = centres[i];
        let kth = |best: &Vec<(f64, usize)>| if best.len() < k { f64::INFINITY } else { best[k - 1].0 };
        let consider = |best: &mut Vec<(f64, usize)>, j: usize| {
            let d = (centres[j].0 - ci.0).hypot(centres[j].1 - ci.1);
            let entry = (d, j);
            let pos = best.partition_point(|e| e.0 < d || (e.0 == d && e.1 < j));
            if pos < k {
                best.insert(pos, entry);
                best.truncate(k);
            }
        };
        let r = rank[i];
        let (mut left, mut right) = (r as isize - 1, r + 1);
        loop {
            let limit = kth(&best);
            let dl = (left >= 0).then(|| ci.0 - centres[order[left as usize]].0);
            let dr = (right < n).then(|| centres[order[right]].0 - ci.0);
            let left_ok = dl.is_some_and(|d| d <= limit);
            let right_ok = dr.is_some_and(|d| d <= limit);
            if !left_ok && !right_ok {
                break;
            }
            // Advance the side whose next candidate is closer in x.
            let go_left = match (left_ok, right_ok) {
                (true, true) => dl.unwrap() <= dr.unwrap(),
                (l, _) => l,
            };
            if go_left {
                consider(&mut best, order[left as usize]);
                left -= 1;
            } else {
                consider(&mut best, order[right]);
                right += 1;
            }
        }
        for &(_, j) in &best {
            out.push(pair(i, j, ci, centres[j]));
        }
    }
    out
}

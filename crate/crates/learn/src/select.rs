//! Feature selection: Pearson correlation pruning and Goodman–Kruskal τ.

use std::collections::HashMap;

use crate::real::Real;

/// Pearson correlation; `None` when either column has zero variance.
pub fn pearson<F: Real>(a: &[F], b: &[F]) -> Option<F> {
    let n = F::of_usize(a.len());
    if a.is_empty() {
        return None;
    }
    let ma = a.iter().copied().sum::<F>() / n;
    let mb = b.iter().copied().sum::<F>() / n;
    let (mut sab, mut saa, mut sbb) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= F::zero() || sbb <= F::zero() {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).max(-F::one()).min(F::one()))
}

pub fn is_constant<F: Real>(column: &[F]) -> bool {
    column.windows(2).all(|w| w[0] == w[1])
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport<F> {
    pub kept: Vec<usize>,
    /// `(dropped, correlated partner, r)`
    pub correlated: Vec<(usize, usize, F)>,
    pub zero_variance: Vec<usize>,
}

/// Drops zero-variance columns, then for every pair with `|r| > threshold`
/// (strongest pair first) drops the member with the higher mean absolute
/// correlation to all other columns; ties drop the higher index.
pub fn correlation_prune<F: Real>(columns: &[Vec<F>], threshold: F) -> PruneReport<F> {
    let m = columns.len();
    let zero_variance: Vec<usize> = (0..m).filter(|&j| is_constant(&columns[j])).collect();
    let live: Vec<usize> = (0..m).filter(|j| !zero_variance.contains(j)).collect();
    let mut r = vec![vec![F::zero(); m]; m];
    for (ai, &a) in live.iter().enumerate() {
        for &b in &live[ai + 1..] {
            let v = pearson(&columns[a], &columns[b]).unwrap_or(F::zero());
            r[a][b] = v;
            r[b][a] = v;
        }
    }
    let mean_abs: Vec<F> = (0..m)
        .map(|a| {
            if live.len() < 2 {
                return F::zero();
            }
            live.iter()
                .filter(|&&b| b != a)
                .map(|&b| r[a][b].abs())
                .sum::<F>()
                / F::of_usize(live.len() - 1)
        })
        .collect();
    let mut pairs = Vec::new();
    for (ai, &a) in live.iter().enumerate() {
        for &b in &live[ai + 1..] {
            if r[a][b].abs() > threshold {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_by(|&(a1, b1), &(a2, b2)| {
        r[a2][b2]
            .abs()
            .partial_cmp(&r[a1][b1].abs())
            .unwrap()
            .then((a1, b1).cmp(&(a2, b2)))
    });
    let mut alive = vec![false; m];
    for &j in &live {
        alive[j] = true;
    }
    let mut correlated = Vec::new();
    for (a, b) in pairs {
        if !(alive[a] && alive[b]) {
            continue;
        }
        let (drop, keep) = if mean_abs[a] > mean_abs[b] { (a, b) } else { (b, a) };
        alive[drop] = false;
        correlated.push((drop, keep, r[a][b]));
    }
    PruneReport {
        kept: (0..m).filter(|&j| alive[j]).collect(),
        correlated,
        zero_variance,
    }
}

/// Maps feature values to categories: at most ten distinct values are used
/// directly, anything richer is bucketed into deciles by rank.
pub fn discretize<F: Real>(values: &[F]) -> Vec<usize> {
    let mut distinct: Vec<F> = values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() <= 10 {
        return values
            .iter()
            .map(|v| distinct.binary_search_by(|d| d.partial_cmp(v).unwrap()).unwrap())
            .collect();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    values
        .iter()
        .map(|v| {
            let rank = sorted.partition_point(|s| s < v);
            (rank * 10 / n).min(9)
        })
        .collect()
}

/// Variation `1 - sum p_t^2` of a label distribution given as counts.
fn variation(counts: &HashMap<usize, usize>, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts.values().map(|&c| (c as f64 / t).powi(2)).sum::<f64>()
}

/// Goodman–Kruskal τ of `labels` given categorical `feature` values:
/// `(V(l) - E[V(l|f)]) / V(l)`, 0 when the labels do not vary.
pub fn goodman_kruskal_tau(feature: &[usize], labels: &[usize]) -> f64 {
    let n = labels.len();
    let mut label_counts: HashMap<usize, usize> = HashMap::new();
    let mut joint: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for (&f, &l) in feature.iter().zip(labels) {
        *label_counts.entry(l).or_default() += 1;
        *joint.entry(f).or_default().entry(l).or_default() += 1;
    }
    let v = variation(&label_counts, n);
    if v <= 0.0 {
        return 0.0;
    }
    let mut keys: Vec<_> = joint.keys().copied().collect();
    keys.sort_unstable();
    let expected: f64 = keys
        .iter()
        .map(|s| {
            let counts = &joint[s];
            let ns: usize = counts.values().sum();
            ns as f64 / n as f64 * variation(counts, ns)
        })
        .sum();
    ((v - expected) / v).clamp(0.0, 1.0)
}

/// τ of each column after [`discretize`], in column order.
pub fn tau_scores<F: Real>(columns: &[Vec<F>], labels: &[usize]) -> Vec<f64> {
    columns
        .iter()
        .map(|c| goodman_kruskal_tau(&discretize(c), labels))
        .collect()
}

/// Column indices ordered by decreasing τ (ties keep column order).
pub fn rank_by_tau(scores: &[f64], candidates: &[usize]) -> Vec<usize> {
    let mut order = candidates.to_vec();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_extremes() {
        let labels = [0, 1, 2, 0, 1, 2];
        assert_eq!(goodman_kruskal_tau(&labels, &labels), 1.0);
        // Each feature value sees the same label distribution.
        let independent = [0, 0, 0, 1, 1, 1];
        assert!(goodman_kruskal_tau(&independent, &labels).abs() < 1e-12);
    }

    #[test]
    fn tau_hand_computed() {
        // labels: a a b b ; feature: x x x y
        // V(l) = 0.5 ; V(l|x) = 1 - (4/9 + 1/9) = 4/9 ; V(l|y) = 0
        // tau = (0.5 - 0.75 * 4/9) / 0.5 = 1/3
        let t = goodman_kruskal_tau(&[0, 0, 0, 1], &[0, 0, 1, 1]);
        assert!((t - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_column_is_pruned_once() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 0.0];
        let b = vec![0.3, -1.0, 2.0, 0.1, 0.7];
        let cols = vec![a.clone(), b, a];
        let rep = correlation_prune(&cols, 0.9);
        assert_eq!(rep.correlated.len(), 1);
        assert_eq!(rep.kept.len(), 2);
        assert!(rep.kept.contains(&1));
    }

    #[test]
    fn constant_columns_are_reported() {
        let cols = vec![vec![1.0f64, 1.0, 1.0], vec![0.0, 1.0, 2.0]];
        let rep = correlation_prune(&cols, 0.9);
        assert_eq!(rep.zero_variance, vec![0]);
        assert_eq!(rep.kept, vec![1]);
    }

    #[test]
    fn deciles() {
        let v: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let d = discretize(&v);
        assert_eq!(d[0], 0);
        assert_eq!(d[99], 9);
        assert_eq!(d[55], 5);
    }
}

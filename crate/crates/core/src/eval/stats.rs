//! Paired significance tests and the Bonferroni level.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

fn binomial_half_cdf(n: u64, k: u64) -> f64 {
    // P(X <= k) for X ~ Bin(n, 1/2), summed in log space.
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    let mut ln_c = 0.0f64;
    let mut total = 0.0;
    for i in 0..=k {
        if i > 0 {
            ln_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        total += (ln_c + ln_half_n).exp();
    }
    total
}

/// McNemar's test on the discordant counts `b` and `c`: continuity-corrected
/// χ², with the exact binomial p-value when `b + c < 25`.
pub fn mcnemar(b: u64, c: u64) -> TestOutcome {
    let n = b + c;
    if n == 0 {
        return TestOutcome {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    // Unclamped: b = c gives 1/(b+c), not 0.
    let d = (b as f64 - c as f64).abs() - 1.0;
    let statistic = d * d / n as f64;
    let p_value = if n < 25 {
        (2.0 * binomial_half_cdf(n, b.min(c))).min(1.0)
    } else {
        1.0 - ChiSquared::new(1.0).expect("valid dof").cdf(statistic)
    };
    TestOutcome { statistic, p_value }
}

/// Mid-ranks of `values` (1-based).
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Wilcoxon signed-rank test, two-sided. Zero differences are dropped;
/// exact null distribution for n < 20, normal approximation with tie
/// correction otherwise. The statistic is W⁺, the positive rank sum.
pub fn wilcoxon_signed_rank(diffs: &[f64]) -> TestOutcome {
    let nz: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let n = nz.len();
    if n == 0 {
        return TestOutcome {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    let abs: Vec<f64> = nz.iter().map(|d| d.abs()).collect();
    let ranks = mid_ranks(&abs);
    let w: f64 = nz.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let p_value = if n < 20 {
        // Mid-ranks are multiples of 1/2: count sign assignments by doubled sums.
        let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        let mut counts = vec![0.0f64; max + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=max).rev() {
                counts[s] += counts[s - r];
            }
        }
        let total = 2f64.powi(n as i32);
        let w2 = (w * 2.0).round() as usize;
        let lower: f64 = counts[..=w2].iter().sum::<f64>() / total;
        let upper: f64 = counts[w2..].iter().sum::<f64>() / total;
        (2.0 * lower.min(upper)).min(1.0)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let mut ties = 0.0;
        let mut sorted = abs.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            ties += t * t * t - t;
            i = j + 1;
        }
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties / 48.0;
        if var <= 0.0 {
            1.0
        } else {
            let z = (w - mean) / var.sqrt();
            let normal = Normal::new(0.0, 1.0).expect("standard normal");
            (2.0 * (1.0 - normal.cdf(z.abs()))).min(1.0)
        }
    };
    TestOutcome { statistic: w, p_value }
}

/// Per-test significance level for `m` simultaneous tests.
pub fn bonferroni(alpha: f64, m: usize) -> f64 {
    alpha / m.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcnemar_examples() {
        assert!((mcnemar(5, 5).statistic - 0.1).abs() < 1e-12);
        assert!((mcnemar(10, 0).p_value - 2.0 * 0.5f64.powi(10)).abs() < 1e-12);
        assert_eq!(mcnemar(0, 0).p_value, 1.0);
        assert_eq!(mcnemar(30, 12), mcnemar(12, 30));
    }

    #[test]
    fn wilcoxon_examples() {
        let all_pos: Vec<f64> = (1..=10).map(f64::from).collect();
        let t = wilcoxon_signed_rank(&all_pos);
        assert_eq!(t.statistic, 55.0);
        assert!((t.p_value - 2.0 / 1024.0).abs() < 1e-12);
        let sym = [1.0, -1.0, 2.0, -2.0];
        assert_eq!(wilcoxon_signed_rank(&sym).p_value, 1.0);
        assert_eq!(wilcoxon_signed_rank(&[0.0, 0.0]).p_value, 1.0);
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(mid_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn bonferroni_levels() {
        assert!((bonferroni(0.05, 20) - 0.0025).abs() < 1e-15);
        assert_eq!(bonferroni(0.05, 1), 0.05);
    }
}

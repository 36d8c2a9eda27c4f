use docharvest_learn::kmeans::{kmeans, wcss, KMeansInit};
use docharvest_learn::select::{correlation_prune, discretize, goodman_kruskal_tau, pearson, tau_scores};
use proptest::prelude::*;

fn best_two_partition(v: &[Vec<f64>]) -> f64 {
    let n = v.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let mut total = 0.0;
        for side in [0, 1] {
            let members: Vec<&Vec<f64>> = (0..n).filter(|&i| (mask >> i) & 1 == side).map(|i| &v[i]).collect();
            if members.is_empty() {
                continue;
            }
            let d = members[0].len();
            let centre: Vec<f64> = (0..d)
                .map(|j| members.iter().map(|m| m[j]).sum::<f64>() / members.len() as f64)
                .collect();
            total += members
                .iter()
                .map(|m| m.iter().zip(&centre).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
                .sum::<f64>();
        }
        best = best.min(total);
    }
    best
}

#[test]
fn two_groups_reach_the_exhaustive_optimum() {
    let v: Vec<Vec<f64>> = [0.0, 0.1, 1.0, 1.1].iter().map(|&x| vec![x]).collect();
    let r = kmeans(&v, 2, KMeansInit::FarthestFirst).unwrap();
    let got = wcss(&v, &r.assignments, &r.centroids);
    assert!((got - best_two_partition(&v)).abs() < 1e-12);
}

#[test]
fn perfect_and_independent_tau() {
    let labels: Vec<usize> = (0..60).map(|i| i % 3).collect();
    let perfect: Vec<f64> = labels.iter().map(|&l| l as f64 * 2.5).collect();
    let independent: Vec<f64> = (0..60).map(|i| ((i / 3) % 2) as f64).collect();
    let t = tau_scores(&[perfect, independent], &labels);
    assert!((t[0] - 1.0).abs() < 1e-12);
    assert!(t[1].abs() < 1e-12);
}

proptest! {
    #[test]
    fn kmeans_wcss_never_increases(points in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 2..12)) {
        let r = kmeans(&points, 2, KMeansInit::FarthestFirst).unwrap();
        for w in r.wcss_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        let opt = best_two_partition(&points);
        prop_assert!(wcss(&points, &r.assignments, &r.centroids) >= opt - 1e-9);
    }

    #[test]
    fn tau_in_unit_interval_and_relabel_invariant(
        pairs in prop::collection::vec((0usize..6, 0usize..4), 1..80),
        perm_seed in 0usize..720,
    ) {
        let (f, l): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let t = goodman_kruskal_tau(&f, &l);
        prop_assert!((0.0..=1.0).contains(&t));
        // Bijective relabeling of feature values via a permutation of 0..6.
        let mut perm: Vec<usize> = (0..6).collect();
        let mut s = perm_seed;
        for i in (1..6).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        let relabeled: Vec<usize> = f.iter().map(|&v| perm[v] + 100).collect();
        prop_assert!((goodman_kruskal_tau(&relabeled, &l) - t).abs() < 1e-12);
    }

    #[test]
    fn duplicated_column_loses_exactly_one_copy(col in prop::collection::vec(-5.0f64..5.0, 4..30),
                                                other in prop::collection::vec(-5.0f64..5.0, 30)) {
        prop_assume!(col.windows(2).any(|w| w[0] != w[1]));
        let other: Vec<f64> = other[..col.len()].to_vec();
        prop_assume!(pearson(&col, &other).is_none_or(|r| r.abs() <= 0.9));
        let cols = vec![col.clone(), col, other];
        let rep = correlation_prune(&cols, 0.9);
        let copies = rep.kept.iter().filter(|&&k| k < 2).count();
        prop_assert_eq!(copies, 1);
    }

    #[test]
    fn deciles_stay_in_range(v in prop::collection::vec(-1e3f64..1e3, 1..200)) {
        prop_assert!(discretize(&v).iter().all(|&b| b < 10));
    }
}

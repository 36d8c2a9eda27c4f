use crate::error::{LearnError, Result};
use crate::real::{squared_distance, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum KMeansInit<F> {
    /// First vector, then repeatedly the vector farthest from all chosen
    /// centroids. For `k = 2` this is the first vector and its farthest vector.
    FarthestFirst,
    Centroids(Vec<Vec<F>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult<F> {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<F>>,
    pub iterations: usize,
    /// Within-cluster sum of squares after each assignment step.
    pub wcss_history: Vec<F>,
}

pub fn wcss<F: Real>(vectors: &[Vec<F>], assignments: &[usize], centroids: &[Vec<F>]) -> F {
    vectors
        .iter()
        .zip(assignments)
        .map(|(v, &a)| squared_distance(v, &centroids[a]))
        .sum()
}

fn nearest<F: Real>(v: &[F], centroids: &[Vec<F>]) -> usize {
    let mut best = 0;
    let mut best_d = F::infinity();
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(v, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

fn farthest_first<F: Real>(vectors: &[Vec<F>], k: usize) -> Vec<Vec<F>> {
    let mut centroids = vec![vectors[0].clone()];
    let mut min_d: Vec<F> = vectors
        .iter()
        .map(|v| squared_distance(v, &vectors[0]))
        .collect();
    while centroids.len() < k {
        let mut best = 0;
        for (i, &d) in min_d.iter().enumerate() {
            if d > min_d[best] {
                best = i;
            }
        }
        let c = vectors[best].clone();
        for (m, v) in min_d.iter_mut().zip(vectors) {
            *m = m.min(squared_distance(v, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// Lloyd iterations until the assignment is a fixed point. Distance ties go to
/// the lower cluster index; an empty cluster keeps its previous centroid.
pub fn kmeans<F: Real>(vectors: &[Vec<F>], k: usize, init: KMeansInit<F>) -> Result<KMeansResult<F>> {
    if k == 0 || vectors.len() < k {
        return Err(LearnError::Config(format!(
            "k-means needs n >= k >= 1 (n = {}, k = {k})",
            vectors.len()
        )));
    }
    let mut centroids = match init {
        KMeansInit::FarthestFirst => farthest_first(vectors, k),
        KMeansInit::Centroids(c) => {
            if c.len() != k {
                return Err(LearnError::Config(format!(
                    "{} initial centroids for k = {k}",
                    c.len()
                )));
            }
            c
        }
    };
    let dim = vectors[0].len();
    let mut assignments: Vec<usize> = vectors.iter().map(|v| nearest(v, &centroids)).collect();
    let mut wcss_history = vec![wcss(vectors, &assignments, &centroids)];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut sums = vec![vec![F::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (v, &a) in vectors.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, &x) in sums[a].iter_mut().zip(v) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                let n = F::of_usize(counts[c]);
                centroids[c] = sums[c].iter().map(|&s| s / n).collect();
            }
        }
        let next: Vec<usize> = vectors.iter().map(|v| nearest(v, &centroids)).collect();
        wcss_history.push(wcss(vectors, &next, &centroids));
        if next == assignments || iterations >= 10_000 {
            assignments = next;
            break;
        }
        assignments = next;
    }
    Ok(KMeansResult {
        assignments,
        centroids,
        iterations,
        wcss_history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_groups() {
        let v: Vec<Vec<f64>> = [0.0, 0.1, 1.0, 1.1].iter().map(|&x| vec![x]).collect();
        let r = kmeans(&v, 2, KMeansInit::FarthestFirst).unwrap();
        assert_eq!(r.assignments, vec![0, 0, 1, 1]);
    }

    #[test]
    fn identical_vectors_collapse() {
        let v = vec![vec![2.0f64, 2.0]; 5];
        let r = kmeans(&v, 2, KMeansInit::FarthestFirst).unwrap();
        assert!(r.assignments.iter().all(|&a| a == 0));
    }

    #[test]
    fn k_one_and_too_few() {
        let v = vec![vec![0.0f64], vec![3.0]];
        assert_eq!(kmeans(&v, 1, KMeansInit::FarthestFirst).unwrap().assignments, vec![0, 0]);
        assert!(kmeans(&v, 3, KMeansInit::FarthestFirst).is_err());
    }
}

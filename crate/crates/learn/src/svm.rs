//! Soft-margin binary support vector machine trained by sequential minimal
//! optimization on the dual problem
//!
//! ```text
//! min_a  1/2 a'Qa - e'a    s.t.  0 <= a_i <= C_i,  y'a = 0,   Q_ij = y_i y_j K(x_i, x_j)
//! ```
//!
//! The working set is the maximal violating pair; the solver stops once the
//! KKT gap `m(a) - M(a)` drops below the tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LearnError, Result};
use crate::kernel::Kernel;
use crate::real::Real;

const TAU: f64 = 1e-12;

/// A trained two-class machine. `decision(x) > 0` means the positive class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct BinaryMachine<F> {
    pub kernel: Kernel<F>,
    pub support_vectors: Vec<Vec<F>>,
    /// `alpha_i * y_i` for each support vector.
    pub coefficients: Vec<F>,
    /// Added to the kernel expansion; equals `-rho`.
    pub bias: F,
}

impl<F: Real> BinaryMachine<F> {
    pub fn decision(&self, x: &[F]) -> F {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, &c)| c * self.kernel.eval(sv, x))
            .sum::<F>()
            + self.bias
    }

    pub fn predict(&self, x: &[F]) -> i8 {
        if self.decision(x) > F::zero() {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams<F> {
    pub c: F,
    /// Penalty multiplier for the positive and the negative class.
    pub weight_positive: F,
    pub weight_negative: F,
    /// Stopping tolerance on the maximal KKT violation.
    pub tolerance: F,
    pub max_iterations: usize,
    /// Upper bound for the kernel row cache, in bytes.
    pub cache_bytes: usize,
}

impl<F: Real> SmoParams<F> {
    pub fn new(c: F) -> Self {
        Self {
            c,
            weight_positive: F::one(),
            weight_negative: F::one(),
            tolerance: F::of(1e-3),
            max_iterations: 10_000_000,
            cache_bytes: 256 << 20,
        }
    }

    pub fn with_weights(mut self, positive: F, negative: F) -> Self {
        self.weight_positive = positive;
        self.weight_negative = negative;
        self
    }
}

/// Result of a training run: the compact machine plus the full dual solution.
#[derive(Debug, Clone)]
pub struct BinaryTraining<F> {
    pub machine: BinaryMachine<F>,
    pub alpha: Vec<F>,
    pub upper_bounds: Vec<F>,
    pub iterations: usize,
    pub converged: bool,
}

impl<F: Real> BinaryTraining<F> {
    /// Largest KKT violation over the training set, measured on `y_i f(x_i)`
    /// recomputed from scratch:
    /// `a = 0 => y f >= 1`, `0 < a < C => y f = 1`, `a = C => y f <= 1`.
    pub fn kkt_residual(&self, samples: &[Vec<F>], labels: &[i8]) -> F {
        let mut worst = F::zero();
        for ((x, &y), (&a, &ub)) in samples
            .iter()
            .zip(labels)
            .zip(self.alpha.iter().zip(&self.upper_bounds))
        {
            let margin = F::of(y as f64) * self.machine.decision(x);
            let r = if a <= F::zero() {
                (F::one() - margin).max(F::zero())
            } else if a >= ub {
                (margin - F::one()).max(F::zero())
            } else {
                (margin - F::one()).abs()
            };
            worst = worst.max(r);
        }
        worst
    }
}

struct RowCache<'a, F> {
    samples: &'a [Vec<F>],
    labels: &'a [F],
    kernel: Kernel<F>,
    rows: Vec<Option<Vec<F>>>,
    order: std::collections::VecDeque<usize>,
    capacity: usize,
}

impl<'a, F: Real> RowCache<'a, F> {
    fn new(samples: &'a [Vec<F>], labels: &'a [F], kernel: Kernel<F>, bytes: usize) -> Self {
        let n = samples.len();
        let row_bytes = n.max(1) * std::mem::size_of::<F>();
        Self {
            samples,
            labels,
            kernel,
            rows: vec![None; n],
            order: Default::default(),
            capacity: (bytes / row_bytes).max(2),
        }
    }

    fn compute(&self, i: usize) -> Vec<F> {
        let xi = &self.samples[i];
        let yi = self.labels[i];
        let f = |j: usize| yi * self.labels[j] * self.kernel.eval(xi, &self.samples[j]);
        if self.samples.len() > 512 {
            (0..self.samples.len()).into_par_iter().map(f).collect()
        } else {
            (0..self.samples.len()).map(f).collect()
        }
    }

    fn ensure(&mut self, i: usize) {
        if self.rows[i].is_some() {
            return;
        }
        if self.order.len() >= self.capacity {
            if let Some(old) = self.order.pop_front() {
                self.rows[old] = None;
            }
        }
        self.rows[i] = Some(self.compute(i));
        self.order.push_back(i);
    }

    fn row(&self, i: usize) -> &[F] {
        self.rows[i].as_deref().expect("row ensured")
    }
}

/// Trains a binary machine. `labels` must be `+1`/`-1` and contain both classes.
pub fn train_binary<F: Real>(
    samples: &[Vec<F>],
    labels: &[i8],
    kernel: Kernel<F>,
    params: &SmoParams<F>,
) -> Result<BinaryTraining<F>> {
    let n = samples.len();
    if labels.len() != n {
        return Err(LearnError::Dimension {
            expected: n,
            actual: labels.len(),
        });
    }
    if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
        return Err(LearnError::Config(format!("label {bad} is not +1/-1")));
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    if positives == 0 || positives == n {
        return Err(LearnError::DegenerateTraining(
            "binary training requires both classes".into(),
        ));
    }
    if let Some(dim) = samples.first().map(Vec::len) {
        if let Some(bad) = samples.iter().find(|s| s.len() != dim) {
            return Err(LearnError::Dimension {
                expected: dim,
                actual: bad.len(),
            });
        }
    }

    let y: Vec<F> = labels.iter().map(|&l| F::of(l as f64)).collect();
    let upper: Vec<F> = labels
        .iter()
        .map(|&l| {
            params.c
                * if l == 1 {
                    params.weight_positive
                } else {
                    params.weight_negative
                }
        })
        .collect();
    let diag: Vec<F> = samples.iter().map(|x| kernel.eval(x, x)).collect();
    let mut cache = RowCache::new(samples, &y, kernel, params.cache_bytes);

    let mut alpha = vec![F::zero(); n];
    let mut grad = vec![-F::one(); n];
    let eps = params.tolerance;
    let tau = F::of(TAU);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        let Some((i, j)) = select_working_set(&y, &alpha, &upper, &grad, eps) else {
            converged = true;
            break;
        };
        iterations += 1;
        cache.ensure(i);
        cache.ensure(j);

        let (ci, cj) = (upper[i], upper[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = cache.row(i)[j];
        let (mut ai, mut aj) = (old_i, old_j);

        if y[i] != y[j] {
            let mut quad = diag[i] + diag[j] + qij + qij;
            if quad <= F::zero() {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > F::zero() {
                if aj < F::zero() {
                    aj = F::zero();
                    ai = diff;
                }
            } else if ai < F::zero() {
                ai = F::zero();
                aj = -diff;
            }
            if diff > ci - cj {
                if ai > ci {
                    ai = ci;
                    aj = ci - diff;
                }
            } else if aj > cj {
                aj = cj;
                ai = cj + diff;
            }
        } else {
            let mut quad = diag[i] + diag[j] - qij - qij;
            if quad <= F::zero() {
                quad = tau;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > ci {
                if ai > ci {
                    ai = ci;
                    aj = sum - ci;
                }
            } else if aj < F::zero() {
                aj = F::zero();
                ai = sum;
            }
            if sum > cj {
                if aj > cj {
                    aj = cj;
                    ai = sum - cj;
                }
            } else if ai < F::zero() {
                ai = F::zero();
                aj = sum;
            }
        }

        alpha[i] = ai;
        alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        let (row_i, row_j) = (cache.row(i), cache.row(j));
        for k in 0..n {
            grad[k] += row_i[k] * di + row_j[k] * dj;
        }
    }

    let rho = compute_rho(&y, &alpha, &upper, &grad);
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for k in 0..n {
        if alpha[k] > F::zero() {
            support_vectors.push(samples[k].clone());
            coefficients.push(alpha[k] * y[k]);
        }
    }
    Ok(BinaryTraining {
        machine: BinaryMachine {
            kernel,
            support_vectors,
            coefficients,
            bias: -rho,
        },
        alpha,
        upper_bounds: upper,
        iterations,
        converged,
    })
}

/// Maximal violating pair; `None` once the violation is below `eps`.
fn select_working_set<F: Real>(
    y: &[F],
    alpha: &[F],
    upper: &[F],
    grad: &[F],
    eps: F,
) -> Option<(usize, usize)> {
    let mut gmax = F::neg_infinity();
    let mut gmin = F::infinity();
    let (mut best_i, mut best_j) = (None, None);
    for t in 0..y.len() {
        let positive = y[t] > F::zero();
        let v = -y[t] * grad[t];
        let in_up = if positive {
            alpha[t] < upper[t]
        } else {
            alpha[t] > F::zero()
        };
        let in_low = if positive {
            alpha[t] > F::zero()
        } else {
            alpha[t] < upper[t]
        };
        if in_up && v > gmax {
            gmax = v;
            best_i = Some(t);
        }
        if in_low && v < gmin {
            gmin = v;
            best_j = Some(t);
        }
    }
    match (best_i, best_j) {
        (Some(i), Some(j)) if gmax - gmin >= eps => Some((i, j)),
        _ => None,
    }
}

fn compute_rho<F: Real>(y: &[F], alpha: &[F], upper: &[F], grad: &[F]) -> F {
    let mut ub = F::infinity();
    let mut lb = F::neg_infinity();
    let mut free_sum = F::zero();
    let mut free = 0usize;
    for t in 0..y.len() {
        let yg = y[t] * grad[t];
        let positive = y[t] > F::zero();
        if alpha[t] >= upper[t] {
            if positive {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        } else if alpha[t] <= F::zero() {
            if positive {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_sum += yg;
            free += 1;
        }
    }
    if free > 0 {
        free_sum / F::of_usize(free)
    } else {
        (ub + lb) / F::of(2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Vec<Vec<f64>>, Vec<i8>) {
        (
            vec![
                vec![0.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
            ],
            vec![1, 1, -1, -1],
        )
    }

    #[test]
    fn two_points_on_a_line() {
        let x = vec![vec![-1.0], vec![1.0]];
        let y = vec![-1, 1];
        let t = train_binary(&x, &y, Kernel::Linear, &SmoParams::new(1.0)).unwrap();
        assert_eq!(t.machine.predict(&[-1.0]), -1);
        assert_eq!(t.machine.predict(&[1.0]), 1);
        assert!(t.kkt_residual(&x, &y) <= 1e-3);
    }

    #[test]
    fn xor_with_rbf_is_separated() {
        let (x, y) = xor();
        let t = train_binary(&x, &y, Kernel::Rbf { gamma: 1.0 }, &SmoParams::new(16.0)).unwrap();
        // Oracle: evaluate the kernel expansion directly over the full dual.
        for (xi, &yi) in x.iter().zip(&y) {
            let direct: f64 = x
                .iter()
                .zip(&y)
                .zip(&t.alpha)
                .map(|((xj, &yj), &a)| a * yj as f64 * (-(xi[0] - xj[0]).powi(2) - (xi[1] - xj[1]).powi(2)).exp())
                .sum::<f64>()
                + t.machine.bias;
            assert!((direct - t.machine.decision(xi)).abs() < 1e-12);
            assert_eq!(direct.signum() as i8, yi);
        }
    }

    #[test]
    fn single_class_is_degenerate() {
        let x = vec![vec![0.0], vec![1.0]];
        let err = train_binary(&x, &[1, 1], Kernel::Linear, &SmoParams::new(1.0)).unwrap_err();
        assert!(matches!(err, LearnError::DegenerateTraining(_)));
    }

    #[test]
    fn rejects_non_binary_labels() {
        let x = vec![vec![0.0], vec![1.0]];
        assert!(train_binary(&x, &[1, 0], Kernel::Linear, &SmoParams::new(1.0)).is_err());
    }

    #[test]
    fn flipping_labels_flips_the_decision() {
        let (x, y) = xor();
        let flipped: Vec<i8> = y.iter().map(|v| -v).collect();
        let k = Kernel::Rbf { gamma: 0.7 };
        let a = train_binary(&x, &y, k, &SmoParams::new(4.0)).unwrap();
        let b = train_binary(&x, &flipped, k, &SmoParams::new(4.0)).unwrap();
        for p in [[0.3, 0.9], [0.5, 0.5], [-1.0, 2.0]] {
            assert_eq!(a.machine.decision(&p), -b.machine.decision(&p));
        }
    }

    #[test]
    fn upper_bounds_follow_class_weights() {
        let x = vec![vec![0.0], vec![0.1], vec![1.0]];
        let y = vec![-1, -1, 1];
        let p = SmoParams::new(2.0).with_weights(3.0, 0.5);
        let t = train_binary(&x, &y, Kernel::Linear, &p).unwrap();
        assert_eq!(t.upper_bounds, vec![1.0, 1.0, 6.0]);
        for (a, ub) in t.alpha.iter().zip(&t.upper_bounds) {
            assert!(*a >= 0.0 && a <= ub);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let x: Vec<Vec<f32>> = vec![vec![0.0, 0.0], vec![0.2, 0.1], vec![2.0, 2.0], vec![2.1, 1.8]];
        let y = vec![-1, -1, 1, 1];
        let t = train_binary(&x, &y, Kernel::Linear, &SmoParams::new(10.0)).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(t.machine.predict(xi), yi);
        }
    }
}

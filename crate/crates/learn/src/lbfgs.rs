//! Limited-memory BFGS minimizer with Armijo backtracking.

use crate::real::{dot, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsParams<F> {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop once the gradient's infinity norm falls below this.
    pub gradient_tolerance: F,
    /// Sufficient-decrease constant of the Armijo condition.
    pub armijo: F,
}

impl<F: Real> Default for LbfgsParams<F> {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iterations: 500,
            gradient_tolerance: F::of(1e-4),
            armijo: F::of(1e-4),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsResult<F> {
    pub x: Vec<F>,
    pub value: F,
    pub gradient_norm: F,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every accepted step, starting with the initial value.
    pub history: Vec<F>,
}

pub fn inf_norm<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, x| m.max(x.abs()))
}

/// Minimizes `objective`, which returns the value and gradient at a point.
pub fn minimize<F: Real>(
    mut objective: impl FnMut(&[F]) -> (F, Vec<F>),
    x0: Vec<F>,
    params: &LbfgsParams<F>,
) -> LbfgsResult<F> {
    let mut x = x0;
    let (mut f, mut g) = objective(&x);
    let mut history = vec![f];
    let mut s_hist: Vec<Vec<F>> = Vec::new();
    let mut y_hist: Vec<Vec<F>> = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        if inf_norm(&g) < params.gradient_tolerance {
            converged = true;
            break;
        }
        let mut d = two_loop(&g, &s_hist, &y_hist);
        let mut slope = dot(&g, &d);
        if slope >= F::zero() {
            s_hist.clear();
            y_hist.clear();
            d = g.iter().map(|&v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut step = if s_hist.is_empty() {
            F::one() / dot(&g, &g).sqrt().max(F::one())
        } else {
            F::one()
        };
        let accepted = loop {
            let trial: Vec<F> = x.iter().zip(&d).map(|(&xi, &di)| xi + step * di).collect();
            let (ft, gt) = objective(&trial);
            if ft.is_finite() && ft <= f + params.armijo * step * slope {
                break Some((trial, ft, gt));
            }
            step = step * F::of(0.5);
            if step < F::of(1e-20) {
                break None;
            }
        };
        iterations += 1;
        let Some((x_new, f_new, g_new)) = accepted else {
            if s_hist.is_empty() {
                break;
            }
            // Curvature memory led nowhere; retry from steepest descent.
            s_hist.clear();
            y_hist.clear();
            continue;
        };
        let s: Vec<F> = x_new.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let y: Vec<F> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        if dot(&s, &y) > F::of(1e-12) * dot(&y, &y).max(F::epsilon()) {
            if s_hist.len() == params.memory {
                s_hist.remove(0);
                y_hist.remove(0);
            }
            s_hist.push(s);
            y_hist.push(y);
        }
        let stalled = (f - f_new) <= F::epsilon() * f.abs().max(F::one());
        x = x_new;
        f = f_new;
        g = g_new;
        history.push(f);
        if stalled && s_hist.is_empty() {
            break;
        }
    }
    if !converged && inf_norm(&g) < params.gradient_tolerance {
        converged = true;
    }
    LbfgsResult {
        gradient_norm: inf_norm(&g),
        x,
        value: f,
        iterations,
        converged,
        history,
    }
}

fn two_loop<F: Real>(g: &[F], s_hist: &[Vec<F>], y_hist: &[Vec<F>]) -> Vec<F> {
    let mut q: Vec<F> = g.to_vec();
    let m = s_hist.len();
    let mut alphas = vec![F::zero(); m];
    for i in (0..m).rev() {
        let rho = F::one() / dot(&y_hist[i], &s_hist[i]);
        let a = rho * dot(&s_hist[i], &q);
        alphas[i] = a;
        for (qj, &yj) in q.iter_mut().zip(&y_hist[i]) {
            *qj -= a * yj;
        }
    }
    if m > 0 {
        let gamma = dot(&s_hist[m - 1], &y_hist[m - 1]) / dot(&y_hist[m - 1], &y_hist[m - 1]);
        for qj in q.iter_mut() {
            *qj *= gamma;
        }
    }
    for i in 0..m {
        let rho = F::one() / dot(&y_hist[i], &s_hist[i]);
        let b = rho * dot(&y_hist[i], &q);
        for (qj, &sj) in q.iter_mut().zip(&s_hist[i]) {
            *qj += (alphas[i] - b) * sj;
        }
    }
    q.iter().map(|&v| -v).collect()
}

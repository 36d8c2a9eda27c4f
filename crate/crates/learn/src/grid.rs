//! Grid search over SVM kernels and penalties with stratified k-fold
//! cross-validation, selecting the highest mean per-class F-score.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LearnError, Result};
use crate::kernel::Kernel;
use crate::metrics::ConfusionMatrix;
use crate::multiclass::{train_multiclass, MulticlassOptions};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    Linear,
    Polynomial,
    Rbf,
    Sigmoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchSpec {
    pub families: Vec<KernelFamily>,
    /// `C = 2^i`
    pub c_exponents: Vec<i32>,
    /// `gamma = 2^i`
    pub gamma_exponents: Vec<i32>,
    pub coef0: Vec<f64>,
    pub degrees: Vec<u32>,
    pub folds: usize,
    pub seed: u64,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        Self {
            families: vec![
                KernelFamily::Linear,
                KernelFamily::Polynomial,
                KernelFamily::Rbf,
                KernelFamily::Sigmoid,
            ],
            c_exponents: (-5..=15).collect(),
            gamma_exponents: (-15..=3).collect(),
            coef0: vec![-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0],
            degrees: vec![2, 3, 4],
            folds: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct GridPoint<F> {
    pub kernel: Kernel<F>,
    pub c: F,
}

impl GridSearchSpec {
    pub fn validate(&self) -> Result<()> {
        let empty_params = self.families.iter().any(|f| match f {
            KernelFamily::Linear => false,
            KernelFamily::Rbf => self.gamma_exponents.is_empty(),
            KernelFamily::Sigmoid => self.gamma_exponents.is_empty() || self.coef0.is_empty(),
            KernelFamily::Polynomial => {
                self.gamma_exponents.is_empty() || self.coef0.is_empty() || self.degrees.is_empty()
            }
        });
        if self.families.is_empty() || self.c_exponents.is_empty() || empty_params {
            return Err(LearnError::Config("grid has an empty parameter set".into()));
        }
        if self.folds < 2 {
            return Err(LearnError::Config("need at least two folds".into()));
        }
        Ok(())
    }

    /// Every grid point, in a fixed order (family, C, gamma, coef0, degree).
    pub fn points<F: Real>(&self) -> Vec<GridPoint<F>> {
        let pow2 = |i: i32| F::of(2f64.powi(i));
        let mut out = Vec::new();
        for family in &self.families {
            for &ci in &self.c_exponents {
                let c = pow2(ci);
                match family {
                    KernelFamily::Linear => out.push(GridPoint {
                        kernel: Kernel::Linear,
                        c,
                    }),
                    KernelFamily::Rbf => {
                        for &g in &self.gamma_exponents {
                            out.push(GridPoint {
                                kernel: Kernel::Rbf { gamma: pow2(g) },
                                c,
                            });
                        }
                    }
                    KernelFamily::Sigmoid => {
                        for &g in &self.gamma_exponents {
                            for &r in &self.coef0 {
                                out.push(GridPoint {
                                    kernel: Kernel::Sigmoid {
                                        gamma: pow2(g),
                                        coef0: F::of(r),
                                    },
                                    c,
                                });
                            }
                        }
                    }
                    KernelFamily::Polynomial => {
                        for &g in &self.gamma_exponents {
                            for &r in &self.coef0 {
                                for &degree in &self.degrees {
                                    out.push(GridPoint {
                                        kernel: Kernel::Polynomial {
                                            degree,
                                            gamma: pow2(g),
                                            coef0: F::of(r),
                                        },
                                        c,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Assigns each sample a fold so that every class is spread round-robin over
/// the folds after a seeded shuffle.
pub fn stratified_folds(labels: &[usize], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 || labels.len() < folds {
        return Err(LearnError::Config(format!(
            "{} samples cannot be split into {folds} folds",
            labels.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in 0..n_classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

/// Pooled out-of-fold confusion matrix for one parameter setting.
pub fn cross_validate<F: Real>(
    samples: &[Vec<F>],
    labels: &[usize],
    label_names: &[String],
    point: &GridPoint<F>,
    folds: &[usize],
    options: &MulticlassOptions<F>,
) -> Result<ConfusionMatrix> {
    let k = folds.iter().max().map_or(0, |m| m + 1);
    let mut confusion = ConfusionMatrix::new(label_names.to_vec());
    for fold in 0..k {
        let (mut tx, mut ty) = (Vec::new(), Vec::new());
        for i in 0..samples.len() {
            if folds[i] != fold {
                tx.push(samples[i].clone());
                ty.push(labels[i]);
            }
        }
        let model = train_multiclass(&tx, &ty, label_names, point.kernel, point.c, options)?;
        for i in 0..samples.len() {
            if folds[i] == fold {
                confusion.add(labels[i], model.predict(&samples[i]));
            }
        }
    }
    Ok(confusion)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct GridResult<F> {
    pub point: GridPoint<F>,
    pub mean_f: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct GridReport<F> {
    pub results: Vec<GridResult<F>>,
    pub best: usize,
}

impl<F: Real> GridReport<F> {
    pub fn best_point(&self) -> &GridPoint<F> {
        &self.results[self.best].point
    }
}

/// Evaluates every grid point; the first point with the highest mean F wins.
pub fn grid_search<F: Real>(
    samples: &[Vec<F>],
    labels: &[usize],
    label_names: &[String],
    spec: &GridSearchSpec,
    options: &MulticlassOptions<F>,
) -> Result<GridReport<F>> {
    spec.validate()?;
    let folds = stratified_folds(labels, spec.folds, spec.seed)?;
    let results: Vec<GridResult<F>> = spec
        .points::<F>()
        .into_par_iter()
        .map(|point| {
            let cm = cross_validate(samples, labels, label_names, &point, &folds, options)?;
            Ok(GridResult {
                point,
                mean_f: cm.macro_f1(),
                accuracy: cm.accuracy(),
            })
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.mean_f > results[best].mean_f {
            best = i;
        }
    }
    Ok(GridReport { results, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_sizes() {
        let spec = GridSearchSpec::default();
        let pts = spec.points::<f64>();
        let (c, g, r, d) = (21, 19, 7, 3);
        assert_eq!(pts.len(), c + c * g * r * d + c * g + c * g * r);
    }

    #[test]
    fn folds_are_stratified_and_seeded() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let a = stratified_folds(&labels, 5, 7).unwrap();
        assert_eq!(a, stratified_folds(&labels, 5, 7).unwrap());
        for fold in 0..5 {
            for class in 0..3 {
                let n = (0..30).filter(|&i| a[i] == fold && labels[i] == class).count();
                assert_eq!(n, 2);
            }
        }
        assert!(stratified_folds(&labels[..3], 5, 0).is_err());
    }

    #[test]
    fn single_point_grid_returns_it() {
        let spec = GridSearchSpec {
            families: vec![KernelFamily::Rbf],
            c_exponents: vec![3],
            gamma_exponents: vec![-1],
            coef0: vec![],
            degrees: vec![],
            folds: 2,
            seed: 1,
        };
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let ys: Vec<usize> = (0..10).map(|i| usize::from(i >= 5)).collect();
        let names = vec!["lo".to_string(), "hi".to_string()];
        let rep = grid_search(&xs, &ys, &names, &spec, &Default::default()).unwrap();
        assert_eq!(rep.results.len(), 1);
        assert_eq!(rep.best_point().c, 8.0);
        assert_eq!(rep.best_point().kernel, Kernel::Rbf { gamma: 0.5 });
    }
}

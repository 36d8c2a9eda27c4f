//! One-vs-one multiclass SVM: `k(k-1)/2` pairwise machines and majority vote.

use serde::{Deserialize, Serialize};

use crate::error::{LearnError, Result};
use crate::kernel::Kernel;
use crate::real::Real;
use crate::scale::MinMaxScaler;
use crate::svm::{train_binary, BinaryMachine, SmoParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct PairMachine<F> {
    /// Class voted for when the decision is positive.
    pub positive: usize,
    pub negative: usize,
    pub machine: BinaryMachine<F>,
}

/// Trained multiclass model. Inputs are scaled with `scaler` before the
/// pairwise machines see them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct SvmModel<F> {
    pub labels: Vec<String>,
    pub kernel: Kernel<F>,
    pub c: F,
    pub class_weights: Vec<F>,
    pub n_features: usize,
    /// `None` when the model was trained on unscaled inputs.
    pub scaler: Option<MinMaxScaler<F>>,
    pub machines: Vec<PairMachine<F>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulticlassOptions<F> {
    /// Fit min-max bounds on the training data (otherwise inputs pass through).
    pub scale: bool,
    /// Inverse-frequency class weights `n / (k * n_c)`; otherwise all 1.
    pub balanced: bool,
    pub tolerance: F,
}

impl<F: Real> Default for MulticlassOptions<F> {
    fn default() -> Self {
        Self {
            scale: true,
            balanced: true,
            tolerance: F::of(1e-3),
        }
    }
}

/// Inverse-frequency weights over the classes that occur; absent classes get 0.
pub fn balanced_weights<F: Real>(labels: &[usize], n_classes: usize) -> Vec<F> {
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    counts
        .iter()
        .map(|&c| {
            if c == 0 {
                F::zero()
            } else {
                F::of_usize(labels.len()) / (F::of_usize(present) * F::of_usize(c))
            }
        })
        .collect()
}

/// Trains pairwise machines for every pair of classes present in `labels`
/// (indices into `label_names`).
pub fn train_multiclass<F: Real>(
    samples: &[Vec<F>],
    labels: &[usize],
    label_names: &[String],
    kernel: Kernel<F>,
    c: F,
    options: &MulticlassOptions<F>,
) -> Result<SvmModel<F>> {
    if samples.len() != labels.len() {
        return Err(LearnError::Dimension {
            expected: samples.len(),
            actual: labels.len(),
        });
    }
    let k = label_names.len();
    if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
        return Err(LearnError::Config(format!("label index {bad} out of range")));
    }
    let class_weights = if options.balanced {
        balanced_weights(labels, k)
    } else {
        let mut w = vec![F::zero(); k];
        for &l in labels {
            w[l] = F::one();
        }
        w
    };
    let present: Vec<usize> = (0..k).filter(|&c| class_weights[c] > F::zero()).collect();
    if present.len() < 2 {
        return Err(LearnError::DegenerateTraining(format!(
            "need at least two classes, found {}",
            present.len()
        )));
    }
    let scaler = options.scale.then(|| MinMaxScaler::fit(samples));
    let scaled: Vec<Vec<F>> = match &scaler {
        Some(s) => s.transform_all(samples),
        None => samples.to_vec(),
    };

    let mut pairs = Vec::new();
    for (ai, &a) in present.iter().enumerate() {
        for &b in &present[ai + 1..] {
            pairs.push((a, b));
        }
    }
    let mut machines = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (x, &l) in scaled.iter().zip(labels) {
            if l == a || l == b {
                xs.push(x.clone());
                ys.push(if l == a { 1i8 } else { -1 });
            }
        }
        let mut params =
            SmoParams::new(c).with_weights(class_weights[a], class_weights[b]);
        params.tolerance = options.tolerance;
        let trained = train_binary(&xs, &ys, kernel, &params).map_err(|e| match e {
            LearnError::DegenerateTraining(m) => LearnError::DegenerateTraining(format!(
                "pair ({}, {}): {m}",
                label_names[a], label_names[b]
            )),
            other => other,
        })?;
        machines.push(PairMachine {
            positive: a,
            negative: b,
            machine: trained.machine,
        });
    }
    Ok(SvmModel {
        labels: label_names.to_vec(),
        kernel,
        c,
        class_weights,
        n_features: samples.first().map_or(0, Vec::len),
        scaler,
        machines,
    })
}

impl<F: Real> SvmModel<F> {
    fn prepare(&self, x: &[F]) -> Vec<F> {
        match &self.scaler {
            Some(s) => s.transform(x),
            None => x.to_vec(),
        }
    }

    /// Vote count per label.
    pub fn votes(&self, x: &[F]) -> Vec<usize> {
        let x = self.prepare(x);
        let mut votes = vec![0usize; self.labels.len()];
        for m in &self.machines {
            if m.machine.decision(&x) > F::zero() {
                votes[m.positive] += 1;
            } else {
                votes[m.negative] += 1;
            }
        }
        votes
    }

    /// Majority vote; ties go to the lowest label index.
    pub fn predict(&self, x: &[F]) -> usize {
        let votes = self.votes(x);
        let mut best = 0;
        for (i, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = i;
            }
        }
        best
    }

    pub fn predict_label(&self, x: &[F]) -> &str {
        &self.labels[self.predict(x)]
    }

    /// Decision value of the machine for pair `(positive, negative)`, if trained.
    pub fn pair_decision(&self, positive: usize, negative: usize, x: &[F]) -> Option<F> {
        let x = self.prepare(x);
        self.machines.iter().find_map(|m| {
            if m.positive == positive && m.negative == negative {
                Some(m.machine.decision(&x))
            } else if m.positive == negative && m.negative == positive {
                Some(-m.machine.decision(&x))
            } else {
                None
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn four_classes_give_six_machines() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for c in 0..4 {
            for i in 0..5 {
                xs.push(vec![c as f64 * 10.0 + i as f64 * 0.1, (c % 2) as f64 * 5.0]);
                ys.push(c);
            }
        }
        let m = train_multiclass(&xs, &ys, &names(4), Kernel::Rbf { gamma: 1.0 }, 10.0, &Default::default())
            .unwrap();
        assert_eq!(m.machines.len(), 6);
        for (x, &y) in xs.iter().zip(&ys) {
            assert_eq!(m.predict(x), y);
        }
    }

    #[test]
    fn balanced_weights_formula() {
        let w: Vec<f64> = balanced_weights(&[0, 0, 0, 1], 3);
        assert_eq!(w, vec![4.0 / 6.0, 2.0, 0.0]);
    }

    #[test]
    fn degenerate_single_class() {
        let err = train_multiclass(
            &[vec![0.0f64], vec![1.0]],
            &[1, 1],
            &names(2),
            Kernel::Linear,
            1.0,
            &Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, LearnError::DegenerateTraining(_)));
    }

    #[test]
    fn vote_ties_go_to_lowest_label() {
        let model = SvmModel::<f64> {
            labels: names(3),
            kernel: Kernel::Linear,
            c: 1.0,
            class_weights: vec![1.0; 3],
            n_features: 1,
            scaler: None,
            machines: vec![
                // 0 beats 1, 1 beats 2, 2 beats 0: a three-way tie.
                pair(0, 1, 1.0),
                pair(1, 2, 1.0),
                pair(0, 2, -1.0),
            ],
        };
        assert_eq!(model.votes(&[0.5]), vec![1, 1, 1]);
        assert_eq!(model.predict(&[0.5]), 0);
    }

    fn pair(p: usize, n: usize, bias: f64) -> PairMachine<f64> {
        PairMachine {
            positive: p,
            negative: n,
            machine: BinaryMachine {
                kernel: Kernel::Linear,
                support_vectors: vec![],
                coefficients: vec![],
                bias,
            },
        }
    }
}

//! Linear-chain conditional random field with emission (feature × label) and
//! transition (label × label) weights.
//!
//! ```text
//! p(y|x) = exp( sum_t [ sum_{f in x_t} w(f, y_t) + T(y_{t-1}, y_t) ] ) / Z(x)
//! ```
//!
//! All inference runs in log space. Training maximizes the L2-penalized
//! conditional log-likelihood with L-BFGS.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LearnError, Result};
use crate::lbfgs::{minimize, LbfgsParams, LbfgsResult};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
struct CrfParts<F> {
    labels: Vec<String>,
    features: Vec<String>,
    sigma2: F,
    emission: Vec<F>,
    transition: Vec<F>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real", from = "CrfParts<F>", into = "CrfParts<F>")]
pub struct CrfModel<F> {
    labels: Vec<String>,
    features: Vec<String>,
    sigma2: F,
    /// Emission weights (`features × labels`, row-major) followed by the
    /// transition table (`labels × labels`, indexed `[prev][cur]`).
    weights: Vec<F>,
    index: HashMap<String, usize>,
}

impl<F: Real> From<CrfParts<F>> for CrfModel<F> {
    fn from(p: CrfParts<F>) -> Self {
        let mut weights = p.emission;
        weights.extend(p.transition);
        Self::from_weights(p.labels, p.features, p.sigma2, weights)
    }
}

impl<F: Real> From<CrfModel<F>> for CrfParts<F> {
    fn from(m: CrfModel<F>) -> Self {
        let split = m.emission_len();
        let mut emission = m.weights;
        let transition = emission.split_off(split);
        CrfParts {
            labels: m.labels,
            features: m.features,
            sigma2: m.sigma2,
            emission,
            transition,
        }
    }
}

/// A sequence whose observation features are mapped to alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub features: Vec<Vec<usize>>,
}

impl Encoded {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Posterior<F> {
    pub log_z: F,
    /// `log Z` recomputed from the backward recursion.
    pub log_z_backward: F,
    /// `node[t][y] = p(y_t = y | x)`
    pub node: Vec<Vec<F>>,
    /// `edge[t-1][a][b] = p(y_{t-1} = a, y_t = b | x)` for `t >= 1`.
    pub edge: Vec<Vec<Vec<F>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSequence {
    pub features: Vec<Vec<String>>,
    pub labels: Vec<String>,
}

fn lse<F: Real>(v: &[F]) -> F {
    let max = v.iter().fold(F::neg_infinity(), |m, &x| m.max(x));
    if max == F::neg_infinity() {
        return max;
    }
    max + v.iter().map(|&x| (x - max).exp()).sum::<F>().ln()
}

impl<F: Real> CrfModel<F> {
    /// Model with all weights zero.
    pub fn new(labels: Vec<String>, features: Vec<String>, sigma2: F) -> Self {
        let n = features.len() * labels.len() + labels.len() * labels.len();
        Self::from_weights(labels, features, sigma2, vec![F::zero(); n])
    }

    pub fn from_weights(labels: Vec<String>, features: Vec<String>, sigma2: F, weights: Vec<F>) -> Self {
        assert_eq!(
            weights.len(),
            features.len() * labels.len() + labels.len() * labels.len(),
            "weight vector does not match the alphabets"
        );
        let index = features
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Self {
            labels,
            features,
            sigma2,
            weights,
            index,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn sigma2(&self) -> F {
        self.sigma2
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn set_weights(&mut self, weights: Vec<F>) {
        assert_eq!(weights.len(), self.weights.len());
        self.weights = weights;
    }

    fn n_labels(&self) -> usize {
        self.labels.len()
    }

    fn emission_len(&self) -> usize {
        self.features.len() * self.labels.len()
    }

    pub fn emission(&self, feature: usize, label: usize) -> F {
        self.weights[feature * self.n_labels() + label]
    }

    pub fn transition(&self, prev: usize, cur: usize) -> F {
        self.weights[self.emission_len() + prev * self.n_labels() + cur]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn feature_index(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    /// Maps feature names to indices; names outside the alphabet are dropped.
    pub fn encode<S: AsRef<str>>(&self, features: &[Vec<S>]) -> Encoded {
        Encoded {
            features: features
                .iter()
                .map(|fs| fs.iter().filter_map(|f| self.feature_index(f.as_ref())).collect())
                .collect(),
        }
    }

    fn emissions(&self, seq: &Encoded) -> Vec<Vec<F>> {
        let l = self.n_labels();
        seq.features
            .iter()
            .map(|fs| {
                let mut row = vec![F::zero(); l];
                for &f in fs {
                    let w = &self.weights[f * l..(f + 1) * l];
                    for (r, &wi) in row.iter_mut().zip(w) {
                        *r += wi;
                    }
                }
                row
            })
            .collect()
    }

    /// Unnormalized log score of a labelling.
    pub fn score(&self, seq: &Encoded, labels: &[usize]) -> F {
        let emit = self.emissions(seq);
        let mut s = F::zero();
        for (t, &y) in labels.iter().enumerate() {
            s += emit[t][y];
            if t > 0 {
                s += self.transition(labels[t - 1], y);
            }
        }
        s
    }

    pub fn forward_backward(&self, seq: &Encoded) -> Posterior<F> {
        let l = self.n_labels();
        let n = seq.len();
        if n == 0 || l == 0 {
            return Posterior {
                log_z: F::zero(),
                log_z_backward: F::zero(),
                node: vec![],
                edge: vec![],
            };
        }
        let emit = self.emissions(seq);
        let trans = |a: usize, b: usize| self.transition(a, b);
        let mut alpha = vec![vec![F::zero(); l]; n];
        alpha[0].clone_from(&emit[0]);
        let mut buf = vec![F::zero(); l];
        for t in 1..n {
            for y in 0..l {
                for a in 0..l {
                    buf[a] = alpha[t - 1][a] + trans(a, y);
                }
                alpha[t][y] = emit[t][y] + lse(&buf);
            }
        }
        let mut beta = vec![vec![F::zero(); l]; n];
        for t in (0..n - 1).rev() {
            for a in 0..l {
                for y in 0..l {
                    buf[y] = trans(a, y) + emit[t + 1][y] + beta[t + 1][y];
                }
                beta[t][a] = lse(&buf);
            }
        }
        let log_z = lse(&alpha[n - 1]);
        for y in 0..l {
            buf[y] = emit[0][y] + beta[0][y];
        }
        let log_z_backward = lse(&buf);
        let node = (0..n)
            .map(|t| (0..l).map(|y| (alpha[t][y] + beta[t][y] - log_z).exp()).collect())
            .collect();
        let edge = (1..n)
            .map(|t| {
                (0..l)
                    .map(|a| {
                        (0..l)
                            .map(|b| {
                                (alpha[t - 1][a] + trans(a, b) + emit[t][b] + beta[t][b] - log_z).exp()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Posterior {
            log_z,
            log_z_backward,
            node,
            edge,
        }
    }

    pub fn log_z(&self, seq: &Encoded) -> F {
        self.forward_backward(seq).log_z
    }

    /// Most probable labelling; ties prefer the lowest label index.
    pub fn viterbi(&self, seq: &Encoded) -> Vec<usize> {
        let l = self.n_labels();
        let n = seq.len();
        if n == 0 || l == 0 {
            return vec![];
        }
        let emit = self.emissions(seq);
        let mut delta = emit[0].clone();
        let mut back = vec![vec![0usize; l]; n];
        for t in 1..n {
            let mut next = vec![F::zero(); l];
            for y in 0..l {
                let mut best = 0;
                let mut best_v = delta[0] + self.transition(0, y);
                for a in 1..l {
                    let v = delta[a] + self.transition(a, y);
                    if v > best_v {
                        best_v = v;
                        best = a;
                    }
                }
                back[t][y] = best;
                next[y] = best_v + emit[t][y];
            }
            delta = next;
        }
        let mut last = 0;
        for y in 1..l {
            if delta[y] > delta[last] {
                last = y;
            }
        }
        let mut path = vec![0; n];
        path[n - 1] = last;
        for t in (1..n).rev() {
            path[t - 1] = back[t][path[t]];
        }
        path
    }

    /// Labels a sequence of feature-name sets.
    pub fn tag<S: AsRef<str>>(&self, features: &[Vec<S>]) -> Vec<String> {
        self.viterbi(&self.encode(features))
            .into_iter()
            .map(|y| self.labels[y].clone())
            .collect()
    }

    /// Penalized conditional log-likelihood
    /// `sum log p(y|x) - |w|^2 / (2 sigma^2)` and its gradient.
    pub fn objective(&self, data: &[(Encoded, Vec<usize>)]) -> (F, Vec<F>) {
        const CHUNK: usize = 32;
        let parts: Vec<(F, Vec<F>)> = data
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut value = F::zero();
                let mut grad = vec![F::zero(); self.weights.len()];
                for (seq, labels) in chunk {
                    value += self.accumulate(seq, labels, &mut grad);
                }
                (value, grad)
            })
            .collect();
        let mut value = F::zero();
        let mut grad = vec![F::zero(); self.weights.len()];
        for (v, g) in parts {
            value += v;
            for (a, b) in grad.iter_mut().zip(g) {
                *a += b;
            }
        }
        let inv = F::one() / self.sigma2;
        for (g, &w) in grad.iter_mut().zip(&self.weights) {
            value -= w * w * inv / F::of(2.0);
            *g -= w * inv;
        }
        (value, grad)
    }

    /// Adds `empirical - expected` counts for one sequence to `grad` and
    /// returns its log-likelihood.
    fn accumulate(&self, seq: &Encoded, labels: &[usize], grad: &mut [F]) -> F {
        let l = self.n_labels();
        let e = self.emission_len();
        let post = self.forward_backward(seq);
        for (t, fs) in seq.features.iter().enumerate() {
            for &f in fs {
                grad[f * l + labels[t]] += F::one();
                for y in 0..l {
                    grad[f * l + y] -= post.node[t][y];
                }
            }
            if t > 0 {
                grad[e + labels[t - 1] * l + labels[t]] += F::one();
                for a in 0..l {
                    for b in 0..l {
                        grad[e + a * l + b] -= post.edge[t - 1][a][b];
                    }
                }
            }
        }
        self.score(seq, labels) - post.log_z
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrfTrainOptions<F> {
    pub sigma2: F,
    pub optimizer: LbfgsParams<F>,
}

impl<F: Real> Default for CrfTrainOptions<F> {
    fn default() -> Self {
        Self {
            sigma2: F::of(10.0),
            optimizer: LbfgsParams::default(),
        }
    }
}

/// Collects sorted label and feature alphabets from the training data.
pub fn alphabets(data: &[TrainingSequence]) -> (Vec<String>, Vec<String>) {
    let mut labels = BTreeSet::new();
    let mut features = BTreeSet::new();
    for s in data {
        labels.extend(s.labels.iter().cloned());
        for fs in &s.features {
            features.extend(fs.iter().cloned());
        }
    }
    (labels.into_iter().collect(), features.into_iter().collect())
}

pub fn encode_dataset<F: Real>(
    model: &CrfModel<F>,
    data: &[TrainingSequence],
) -> Result<Vec<(Encoded, Vec<usize>)>> {
    data.iter()
        .map(|s| {
            if s.features.len() != s.labels.len() {
                return Err(LearnError::Dimension {
                    expected: s.features.len(),
                    actual: s.labels.len(),
                });
            }
            let labels = s
                .labels
                .iter()
                .map(|l| {
                    model
                        .label_index(l)
                        .ok_or_else(|| LearnError::Config(format!("unknown label {l}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((model.encode(&s.features), labels))
        })
        .collect()
}

/// Fits a model by maximizing the penalized log-likelihood.
pub fn train_crf<F: Real>(
    data: &[TrainingSequence],
    options: &CrfTrainOptions<F>,
) -> Result<(CrfModel<F>, LbfgsResult<F>)> {
    if data.iter().all(|s| s.labels.is_empty()) {
        return Err(LearnError::Config("empty CRF training set".into()));
    }
    let (labels, features) = alphabets(data);
    let mut model = CrfModel::new(labels, features, options.sigma2);
    let encoded = encode_dataset(&model, data)?;
    let x0 = model.weights.clone();
    let mut probe = model.clone();
    let result = minimize(
        |w: &[F]| {
            probe.weights.copy_from_slice(w);
            let (v, g) = probe.objective(&encoded);
            (-v, g.into_iter().map(|x| -x).collect())
        },
        x0,
        &options.optimizer,
    );
    model.weights.clone_from(&result.x);
    Ok((model, result))
}

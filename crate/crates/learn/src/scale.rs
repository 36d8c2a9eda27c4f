use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Per-feature linear map onto `[0, 1]` learned from training bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct MinMaxScaler<F> {
    pub min: Vec<F>,
    pub max: Vec<F>,
}

impl<F: Real> MinMaxScaler<F> {
    pub fn fit(samples: &[Vec<F>]) -> Self {
        let dim = samples.first().map_or(0, Vec::len);
        let mut min = vec![F::infinity(); dim];
        let mut max = vec![F::neg_infinity(); dim];
        for s in samples {
            for (j, &v) in s.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Self { min, max }
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Constant training features map to 0; values outside the bounds clamp.
    pub fn transform(&self, x: &[F]) -> Vec<F> {
        x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                if hi > lo {
                    ((v - lo) / (hi - lo)).max(F::zero()).min(F::one())
                } else {
                    F::zero()
                }
            })
            .collect()
    }

    pub fn transform_all(&self, samples: &[Vec<F>]) -> Vec<Vec<F>> {
        samples.iter().map(|s| self.transform(s)).collect()
    }
}

use serde::{Deserialize, Serialize};

/// Square confusion matrix; rows are true labels, columns predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let k = labels.len();
        Self {
            labels,
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn from_pairs(labels: Vec<String>, truth: &[usize], predicted: &[usize]) -> Self {
        let mut m = Self::new(labels);
        for (&t, &p) in truth.iter().zip(predicted) {
            m.add(t, p);
        }
        m
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum::<usize>() as f64 / total as f64
    }

    pub fn scores(&self, class: usize) -> ClassScores {
        let tp = self.counts[class][class] as f64;
        let support: usize = self.counts[class].iter().sum();
        let predicted: usize = self.counts.iter().map(|r| r[class]).sum();
        let precision = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
        let recall = if support > 0 { tp / support as f64 } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        ClassScores {
            precision,
            recall,
            f1,
            support,
        }
    }

    /// Mean F1 over the classes that occur in the truth.
    pub fn macro_f1(&self) -> f64 {
        let present: Vec<ClassScores> = (0..self.labels.len())
            .map(|c| self.scores(c))
            .filter(|s| s.support > 0)
            .collect();
        if present.is_empty() {
            return 0.0;
        }
        present.iter().map(|s| s.f1).sum::<f64>() / present.len() as f64
    }
}

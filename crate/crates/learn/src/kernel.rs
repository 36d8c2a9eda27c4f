use serde::{Deserialize, Serialize};

use crate::real::{dot, squared_distance, Real};

/// Kernel functions supported by the SVM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel<F> {
    Linear,
    /// `(gamma * <x, y> + coef0)^degree`
    Polynomial { degree: u32, gamma: F, coef0: F },
    /// `exp(-gamma * |x - y|^2)`
    Rbf { gamma: F },
    /// `tanh(gamma * <x, y> + coef0)`
    Sigmoid { gamma: F, coef0: F },
}

impl<F: Real> Kernel<F> {
    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        match *self {
            Kernel::Linear => dot(x, y),
            Kernel::Polynomial {
                degree,
                gamma,
                coef0,
            } => (gamma * dot(x, y) + coef0).powi(degree as i32),
            Kernel::Rbf { gamma } => (-gamma * squared_distance(x, y)).exp(),
            Kernel::Sigmoid { gamma, coef0 } => (gamma * dot(x, y) + coef0).tanh(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Polynomial { .. } => "polynomial",
            Kernel::Rbf { .. } => "rbf",
            Kernel::Sigmoid { .. } => "sigmoid",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        let x = [1.0f64, 2.0];
        let y = [3.0, -1.0];
        assert_eq!(Kernel::Linear.eval(&x, &y), 1.0);
        let p = Kernel::Polynomial {
            degree: 2,
            gamma: 0.5,
            coef0: 1.0,
        };
        assert!((p.eval(&x, &y) - 2.25).abs() < 1e-12);
        let r = Kernel::Rbf { gamma: 0.1 };
        assert!((r.eval(&x, &y) - (-1.3f64).exp()).abs() < 1e-12);
        assert_eq!(r.eval(&x, &x), 1.0);
    }

    #[test]
    fn kernel_serializes_with_tag() {
        let k = Kernel::Rbf { gamma: 0.25f64 };
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"type":"rbf","gamma":0.25}"#);
        let back: Kernel<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}

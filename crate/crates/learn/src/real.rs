use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used by every learner in this crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` constant into this scalar.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable in every Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Numerically stable `log(sum(exp(values)))`.
pub fn log_sum_exp<F: Real>(values: impl IntoIterator<Item = F> + Clone) -> F {
    let max = values
        .clone()
        .into_iter()
        .fold(F::neg_infinity(), |m, v| if v > m { v } else { m });
    if max == F::neg_infinity() {
        return max;
    }
    let sum: F = values.into_iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

pub(crate) fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn squared_distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_naive() {
        let v = [0.5f64, -1.0, 2.0];
        let naive = v.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(v.iter().copied()) - naive).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_of_nothing_is_neg_infinity() {
        assert_eq!(log_sum_exp(std::iter::empty::<f32>()), f32::NEG_INFINITY);
    }
}

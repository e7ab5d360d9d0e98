//! Scalar abstraction shared by every probability-valued computation.
//!
//! Estimators, CTW and the regret harness are written against [`Scalar`] so
//! they run in `f32` or `f64`. Exact quantities (program weights in the prior
//! oracle) use integers instead and convert at the boundary.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable for log-domain probability arithmetic.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + std::fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`. Every supported scalar accepts any finite `f64`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("scalar conversion from f64")
    }

    /// Lossy conversion from a count.
    fn of_count(v: u64) -> Self {
        Self::from_u64(v).expect("scalar conversion from u64")
    }

    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `log(exp(a) + exp(b))` without overflow or underflow.
pub fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log(sum(exp(v)))`; `-inf` for an empty slice.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> T {
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return max;
    }
    if max == T::infinity() {
        return max;
    }
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + (v - max).exp());
    max + sum.ln()
}

/// `log(w * exp(a) + (1 - w) * exp(b))` for a mixing weight `w` in (0, 1).
pub fn log_mix<T: Scalar>(w: T, a: T, b: T) -> T {
    log_add_exp(w.ln() + a, (T::one() - w).ln() + b)
}

/// Converts nats to bits.
pub fn nats_to_bits<T: Scalar>(nats: T) -> T {
    nats / T::LN_2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_direct_sum() {
        let a = 0.3f64.ln();
        let b = 0.2f64.ln();
        assert!((log_add_exp(a, b) - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, b), b);
    }

    #[test]
    fn log_add_exp_survives_tiny_values() {
        let a = -2000.0f64;
        let b = -2000.0f64;
        assert!((log_add_exp(a, b) - (-2000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_handles_empty_and_f32() {
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
        let v = [0.25f32.ln(), 0.25f32.ln(), 0.5f32.ln()];
        assert!(log_sum_exp(&v).abs() < 1e-6);
    }

    #[test]
    fn half_mixture() {
        let m = log_mix(0.5f64, 0.125f64.ln(), 0.25f64.ln());
        assert!((m.exp() - 0.1875).abs() < 1e-15);
    }
}

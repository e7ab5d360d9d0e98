use statrs::function::gamma::ln_gamma;

use crate::scalar::Scalar;

/// KT predictive probability of `bit` after `a` zeros and `b` ones.
pub fn kt_ratio<T: Scalar>(a: u64, b: u64, bit: u8) -> T {
    let count = if bit == 0 { a } else { b };
    (T::of_count(count) + T::half()) / (T::of_count(a + b) + T::one())
}

/// `ln P_KT(a, b)` in closed form, `Γ(a+½)Γ(b+½) / (π Γ(a+b+1))`.
pub fn log_kt(a: u64, b: u64) -> f64 {
    let (a, b) = (a as f64, b as f64);
    ln_gamma(a + 0.5) + ln_gamma(b + 0.5) - std::f64::consts::PI.ln() - ln_gamma(a + b + 1.0)
}

/// Running KT estimate in log space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KtEstimator<T> {
    pub a: u64,
    pub b: u64,
    pub log_prob: T,
}

impl<T: Scalar> KtEstimator<T> {
    pub fn new() -> Self {
        KtEstimator {
            a: 0,
            b: 0,
            log_prob: T::zero(),
        }
    }

    pub fn predict(&self, bit: u8) -> T {
        kt_ratio(self.a, self.b, bit)
    }

    /// Returns the probability assigned to `bit` before counting it.
    pub fn update(&mut self, bit: u8) -> T {
        let p = self.predict(bit);
        self.log_prob = self.log_prob + p.ln();
        if bit == 0 {
            self.a += 1;
        } else {
            self.b += 1;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!((log_kt(1, 0).exp() - 0.5).abs() < 1e-15);
        assert!((log_kt(2, 0).exp() - 0.375).abs() < 1e-15);
        assert!((log_kt(1, 1).exp() - 0.125).abs() < 1e-15);
        assert!(log_kt(0, 0).abs() < 1e-15);
    }

    #[test]
    fn ratio_identity() {
        for a in 0..=100 {
            for b in 0..=100 {
                let lhs = log_kt(a + 1, b) - log_kt(a, b);
                let rhs = kt_ratio::<f64>(a, b, 0).ln();
                assert!((lhs - rhs).abs() < 1e-11, "{a} {b}");
            }
        }
    }

    #[test]
    fn estimator_matches_closed_form() {
        let mut kt = KtEstimator::<f64>::new();
        for &bit in &[0u8, 1, 1, 0, 0, 0, 1] {
            kt.update(bit);
        }
        assert_eq!((kt.a, kt.b), (4, 3));
        assert!((kt.log_prob - log_kt(4, 3)).abs() < 1e-12);
    }
}

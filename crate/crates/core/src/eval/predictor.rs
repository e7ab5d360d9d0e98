use crate::ctw::{CtwState, FixedDepthKt};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sequential predictor over a finite alphabet.
///
/// `predict` reflects only the symbols observed so far.
pub trait Predictor<T: Scalar>: Send {
    fn name(&self) -> String;
    fn alphabet(&self) -> usize;
    fn predict(&self) -> Vec<T>;
    fn observe(&mut self, symbol: u8);
    fn reset(&mut self);
}

impl<T: Scalar, P: Predictor<T> + ?Sized> Predictor<T> for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn alphabet(&self) -> usize {
        (**self).alphabet()
    }

    fn predict(&self) -> Vec<T> {
        (**self).predict()
    }

    fn observe(&mut self, symbol: u8) {
        (**self).observe(symbol)
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

#[derive(Clone, Debug)]
pub struct Uniform {
    alphabet: usize,
}

impl Uniform {
    pub fn new(alphabet: usize) -> Self {
        assert!(alphabet > 0);
        Uniform { alphabet }
    }
}

impl<T: Scalar> Predictor<T> for Uniform {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn alphabet(&self) -> usize {
        self.alphabet
    }

    fn predict(&self) -> Vec<T> {
        vec![T::one() / T::of_count(self.alphabet as u64); self.alphabet]
    }

    fn observe(&mut self, _symbol: u8) {}

    fn reset(&mut self) {}
}

impl<T: Scalar> Predictor<T> for CtwState<T> {
    fn name(&self) -> String {
        format!("ctw({})", self.depth())
    }

    fn alphabet(&self) -> usize {
        2
    }

    fn predict(&self) -> Vec<T> {
        CtwState::predict(self).to_vec()
    }

    fn observe(&mut self, symbol: u8) {
        self.update(symbol);
    }

    fn reset(&mut self) {
        CtwState::reset(self);
    }
}

impl<T: Scalar> Predictor<T> for FixedDepthKt {
    fn name(&self) -> String {
        format!("kt({})", self.depth())
    }

    fn alphabet(&self) -> usize {
        2
    }

    fn predict(&self) -> Vec<T> {
        FixedDepthKt::predict::<T>(self).to_vec()
    }

    fn observe(&mut self, symbol: u8) {
        self.update::<T>(symbol);
    }

    fn reset(&mut self) {
        FixedDepthKt::reset(self);
    }
}

/// Reference predictors and the Solomonoff code-length bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Baseline {
    Uniform,
    Ctw(usize),
    FixedKt(usize),
    /// Not a predictor: a per-batch bound from shortened programs.
    SolomonoffUb,
}

impl Baseline {
    /// Builds a fresh predictor, or `None` for the bound.
    pub fn predictor<T: Scalar>(self, alphabet: usize) -> Option<Box<dyn Predictor<T>>> {
        match self {
            Baseline::Uniform => Some(Box::new(Uniform::new(alphabet))),
            Baseline::Ctw(d) => Some(Box::new(CtwState::<T>::new(d))),
            Baseline::FixedKt(d) => Some(Box::new(FixedDepthKt::new(d))),
            Baseline::SolomonoffUb => None,
        }
    }
}

fn depth_arg(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?
        .strip_prefix('(')?
        .strip_suffix(')')?
        .parse()
        .ok()
}

/// Parses `uniform`, `ctw(D)`, `kt(D)` or `solomonoff_ub`.
pub fn baseline(name: &str) -> Result<Baseline> {
    match name {
        "uniform" => Ok(Baseline::Uniform),
        "solomonoff_ub" => Ok(Baseline::SolomonoffUb),
        _ => depth_arg(name, "ctw")
            .map(Baseline::Ctw)
            .or_else(|| depth_arg(name, "kt").filter(|&d| d < 32).map(Baseline::FixedKt))
            .ok_or_else(|| Error::UnknownBaseline(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        assert_eq!(baseline("uniform").unwrap(), Baseline::Uniform);
        assert_eq!(baseline("ctw(24)").unwrap(), Baseline::Ctw(24));
        assert_eq!(baseline("kt(3)").unwrap(), Baseline::FixedKt(3));
        assert_eq!(baseline("solomonoff_ub").unwrap(), Baseline::SolomonoffUb);
        for bad in ["ctw", "ctw()", "ctw(x)", "lstm", "kt(40)"] {
            assert!(matches!(baseline(bad), Err(Error::UnknownBaseline(_))), "{bad}");
        }
    }

    #[test]
    fn uniform_components() {
        let p = Baseline::Uniform.predictor::<f64>(17).unwrap().predict();
        assert_eq!(p.len(), 17);
        assert!(p.iter().all(|&x| x == 1.0 / 17.0));
    }

    #[test]
    fn ctw_zero_second_step() {
        let mut p = Baseline::Ctw(0).predictor::<f64>(2).unwrap();
        p.observe(0);
        assert_eq!(p.predict()[0], 0.75);
        assert!(Baseline::SolomonoffUb.predictor::<f64>(17).is_none());
    }
}

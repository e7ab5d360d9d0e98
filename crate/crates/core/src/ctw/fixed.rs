use crate::scalar::Scalar;

use super::kt::kt_ratio;

/// KT estimator conditioned on exactly the last `depth` bits.
#[derive(Clone, Debug)]
pub struct FixedDepthKt {
    depth: usize,
    counts: Vec<[u64; 2]>,
    context: usize,
}

impl FixedDepthKt {
    pub fn new(depth: usize) -> Self {
        assert!(depth < 32, "fixed-depth KT supports depth below 32");
        FixedDepthKt {
            depth,
            counts: vec![[0; 2]; 1 << depth],
            context: 0,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn reset(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = [0; 2]);
        self.context = 0;
    }

    pub fn predict<T: Scalar>(&self) -> [T; 2] {
        let [a, b] = self.counts[self.context];
        [kt_ratio(a, b, 0), kt_ratio(a, b, 1)]
    }

    pub fn update<T: Scalar>(&mut self, bit: u8) -> T {
        let p = self.predict::<T>()[bit as usize];
        self.counts[self.context][bit as usize] += 1;
        if self.depth > 0 {
            self.context = ((self.context << 1) | bit as usize) & ((1 << self.depth) - 1);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_matches_kt() {
        let mut k = FixedDepthKt::new(0);
        let p: f64 = k.update(0);
        assert_eq!(p, 0.5);
        assert_eq!(k.predict::<f64>(), [0.75, 0.25]);
    }

    #[test]
    fn learns_alternation() {
        let mut k = FixedDepthKt::new(1);
        let mut last = 0.0;
        for t in 0..200 {
            last = k.update::<f64>((t % 2) as u8);
        }
        assert!(last > 0.98);
    }
}

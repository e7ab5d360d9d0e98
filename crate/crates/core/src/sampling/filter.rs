/// Thresholds separating "boring" outputs from interesting ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterestFilter {
    pub min_len: usize,
    pub max_period: usize,
}

impl Default for InterestFilter {
    fn default() -> Self {
        InterestFilter {
            min_len: 10,
            max_period: 16,
        }
    }
}

impl InterestFilter {
    pub fn accepts(&self, output: &[u8]) -> bool {
        is_interesting(output, self.min_len, self.max_period)
    }
}

/// Shortest preperiod after which `seq` repeats with period `p`.
fn preperiod(seq: &[u8], p: usize) -> usize {
    (0..seq.len().saturating_sub(p))
        .rev()
        .find(|&i| seq[i] != seq[i + p])
        .map_or(0, |i| i + 1)
}

/// False for outputs shorter than `min_len` and for outputs that are
/// periodic with period at most `max_period` after a preperiod of at most
/// `min_len` symbols.
pub fn is_interesting(output: &[u8], min_len: usize, max_period: usize) -> bool {
    if output.len() < min_len {
        return false;
    }
    (1..=max_period).all(|p| preperiod(output, p) > min_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_boring() {
        assert!(!is_interesting(&[], 10, 16));
    }

    #[test]
    fn period_two_is_boring() {
        let x: Vec<u8> = (0..256).map(|i| (i % 2) as u8).collect();
        assert!(!is_interesting(&x, 10, 16));
    }

    #[test]
    fn counter_with_period_seventeen() {
        let x: Vec<u8> = (0..256).map(|i| (i % 17) as u8).collect();
        assert!(is_interesting(&x, 10, 16));
        assert!(!is_interesting(&x, 10, 17));
    }

    #[test]
    fn preperiod_allowance() {
        // Ten arbitrary symbols followed by a constant run is still boring.
        let mut x = vec![3, 1, 4, 1, 5, 9, 2, 6, 5, 3];
        x.extend(std::iter::repeat(7).take(100));
        assert!(!is_interesting(&x, 10, 16));
        // Growing runs 0,1,0,1,1,0,1,1,1,... never become periodic.
        let mut y = Vec::new();
        for k in 1..20 {
            y.push(0);
            y.extend(std::iter::repeat(1).take(k));
        }
        assert!(is_interesting(&y, 10, 16));
    }

    #[test]
    fn scan_matches_brute_force() {
        // Oracle: try every (preperiod, period) pair directly.
        fn brute(x: &[u8], min_len: usize, max_period: usize) -> bool {
            if x.len() < min_len {
                return false;
            }
            for p in 1..=max_period {
                for pre in 0..=min_len {
                    if (pre..x.len()).all(|i| i + p >= x.len() || x[i] == x[i + p]) {
                        return false;
                    }
                }
            }
            true
        }
        let mut state = 12345u64;
        for _ in 0..3000 {
            state = crate::seed::splitmix64(state);
            let len = (state % 60) as usize;
            let alpha = 1 + (state >> 8) % 3;
            let x: Vec<u8> = (0..len)
                .map(|i| (crate::seed::splitmix64(state ^ i as u64) % alpha) as u8)
                .collect();
            assert_eq!(is_interesting(&x, 10, 16), brute(&x, 10, 16), "{x:?}");
        }
    }
}

use crate::scalar::Scalar;

/// Upper bound (nats) on the Solomonoff log-loss of a batch, from the lengths
/// of shortened programs that reproduce each sequence: `ln 7 * sum(lengths)`.
pub fn solomonoff_upper_bound<T: Scalar>(shortened_lengths: &[usize]) -> T {
    let total: u64 = shortened_lengths.iter().map(|&l| l as u64).sum();
    T::of(7.0).ln() * T::of_count(total)
}

use crate::scalar::Scalar;

/// Token id of the absorbing padding symbol (outside the 17-symbol alphabet).
pub const ABSORBER: u8 = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PadMode {
    /// Pad with the absorber and train on the first absorber too.
    Unnormalized,
    /// Pad with an arbitrary symbol (0) and train on real symbols only.
    Normalized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedRecord {
    pub tokens: Vec<u8>,
    pub mask: Vec<bool>,
}

impl PaddedRecord {
    pub fn masked_len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Pads one record to length `n`. Records already of length `n` or longer
/// are returned unchanged with an all-true mask.
pub fn pad_record(record: &[u8], n: usize, mode: PadMode) -> PaddedRecord {
    let mut tokens = record.to_vec();
    let mut mask = vec![true; record.len()];
    if record.len() < n {
        let pad = match mode {
            PadMode::Unnormalized => ABSORBER,
            PadMode::Normalized => 0,
        };
        tokens.resize(n, pad);
        mask.resize(n, false);
        if mode == PadMode::Unnormalized {
            mask[record.len()] = true;
        }
    }
    PaddedRecord { tokens, mask }
}

pub fn pad_with_absorber<R: AsRef<[u8]>>(records: &[R], n: usize, mode: PadMode) -> Vec<PaddedRecord> {
    records.iter().map(|r| pad_record(r.as_ref(), n, mode)).collect()
}

/// Mean over records of `-sum_t ln pi(x_t | x_<t)`, summing only the real
/// symbols of each record. `predictor(context, symbol)` returns pi.
pub fn cut_log_loss<T, R, F>(records: &[R], mut predictor: F) -> T
where
    T: Scalar,
    R: AsRef<[u8]>,
    F: FnMut(&[u8], u8) -> T,
{
    if records.is_empty() {
        return T::zero();
    }
    let total = records.iter().fold(T::zero(), |acc, r| {
        let r = r.as_ref();
        (0..r.len()).fold(acc, |acc, t| acc - predictor(&r[..t], r[t]).ln())
    });
    total / T::of_count(records.len() as u64)
}

/// Same loss over padded records, counting only masked positions.
pub fn masked_log_loss<T, F>(records: &[PaddedRecord], mut predictor: F) -> T
where
    T: Scalar,
    F: FnMut(&[u8], u8) -> T,
{
    if records.is_empty() {
        return T::zero();
    }
    let total = records.iter().fold(T::zero(), |acc, r| {
        (0..r.tokens.len())
            .filter(|&t| r.mask[t])
            .fold(acc, |acc, t| acc - predictor(&r.tokens[..t], r.tokens[t]).ln())
    });
    total / T::of_count(records.len() as u64)
}

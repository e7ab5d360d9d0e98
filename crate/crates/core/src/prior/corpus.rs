use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::machine::{sample_and_run, RunLimits};
use crate::sampling::ProgramDistribution;
use crate::scalar::Scalar;
use crate::seed;

/// Sampled output sequences together with the limits that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCorpus {
    records: Vec<Vec<u8>>,
    limits: RunLimits,
}

impl SampleCorpus {
    pub fn new(records: Vec<Vec<u8>>, limits: RunLimits) -> Result<Self> {
        if let Some(r) = records.iter().find(|r| r.len() > limits.max_output) {
            return Err(Error::Config(format!(
                "record of length {} exceeds max_output {}",
                r.len(),
                limits.max_output
            )));
        }
        Ok(SampleCorpus { records, limits })
    }

    /// Draws `count` outputs by sampling programs from `dist`. Record `j`
    /// uses the seed `seed::record_seed(base_seed, j)`.
    pub fn sample(dist: &ProgramDistribution, limits: RunLimits, count: usize, base_seed: u64) -> Self {
        let records = (0..count as u64)
            .into_par_iter()
            .map(|j| {
                let mut rng = seed::rng(seed::record_seed(base_seed, j));
                sample_and_run(dist, &limits, &mut rng).output
            })
            .collect();
        SampleCorpus { records, limits }
    }

    pub fn records(&self) -> &[Vec<u8>] {
        &self.records
    }

    pub fn limits(&self) -> &RunLimits {
        &self.limits
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Number of records that extend (or equal) each prefix.
#[derive(Clone, Debug, Default)]
pub struct PrefixCounts {
    counts: HashMap<Vec<u8>, u64>,
    total: u64,
}

impl PrefixCounts {
    pub fn build<R: AsRef<[u8]>>(records: &[R]) -> Self {
        let mut whole: HashMap<&[u8], u64> = HashMap::new();
        for r in records {
            *whole.entry(r.as_ref()).or_default() += 1;
        }
        let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
        for (r, n) in whole {
            for k in 0..=r.len() {
                *counts.entry(r[..k].to_vec()).or_default() += n;
            }
        }
        PrefixCounts {
            counts,
            total: records.len() as u64,
        }
    }

    pub fn count(&self, prefix: &[u8]) -> u64 {
        self.counts.get(prefix).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn prefixes(&self) -> impl Iterator<Item = (&[u8], u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Fraction of records starting with `x`.
    pub fn empirical_prior<T: Scalar>(&self, x: &[u8]) -> T {
        if self.total == 0 {
            return T::zero();
        }
        T::of_count(self.count(x)) / T::of_count(self.total)
    }

    /// Ratio estimate of the normalized next-symbol distribution after `prefix`.
    ///
    /// The denominator counts records that extend `prefix` by at least one
    /// symbol, so the result is a proper distribution whenever it is defined.
    pub fn norm_predictive<T: Scalar>(&self, prefix: &[u8], alphabet: usize) -> Result<Vec<T>> {
        let mut next = prefix.to_vec();
        next.push(0);
        let counts: Vec<u64> = (0..alphabet)
            .map(|a| {
                *next.last_mut().unwrap() = a as u8;
                self.count(&next)
            })
            .collect();
        let denom: u64 = counts.iter().sum();
        if denom == 0 {
            return Err(Error::UndefinedPrefix(prefix.to_vec()));
        }
        let d = T::of_count(denom);
        Ok(counts.into_iter().map(|c| T::of_count(c) / d).collect())
    }
}

pub fn empirical_prior<T: Scalar>(corpus: &SampleCorpus, x: &[u8]) -> T {
    let n = corpus.records.iter().filter(|r| r.starts_with(x)).count();
    if corpus.is_empty() {
        return T::zero();
    }
    T::of_count(n as u64) / T::of_count(corpus.len() as u64)
}

pub fn empirical_norm_predictive<T: Scalar>(corpus: &SampleCorpus, prefix: &[u8], alphabet: usize) -> Result<Vec<T>> {
    let matching: Vec<&[u8]> = corpus
        .records
        .iter()
        .filter(|r| r.len() > prefix.len() && r.starts_with(prefix))
        .map(|r| r.as_slice())
        .collect();
    PrefixCounts::build(&matching).norm_predictive(prefix, alphabet)
}

/// Estimator over the sub-corpus of records that reached length `n`.
#[derive(Clone, Debug)]
pub struct LimitNormalized {
    counts: PrefixCounts,
    corpus_len: usize,
}

impl LimitNormalized {
    pub fn estimate<T: Scalar>(&self, x: &[u8]) -> T {
        self.counts.empirical_prior(x)
    }

    pub fn retained(&self) -> usize {
        self.counts.total() as usize
    }

    /// Fraction of the corpus that reached length `n`.
    pub fn retained_fraction<T: Scalar>(&self) -> T {
        T::of_count(self.counts.total()) / T::of_count(self.corpus_len as u64)
    }
}

pub fn limit_normalized(corpus: &SampleCorpus, n: usize) -> Result<LimitNormalized> {
    let retained: Vec<&[u8]> = corpus
        .records
        .iter()
        .filter(|r| r.len() >= n)
        .map(|r| r.as_slice())
        .collect();
    if retained.is_empty() {
        return Err(Error::EmptyRetainedSet(n));
    }
    Ok(LimitNormalized {
        counts: PrefixCounts::build(&retained),
        corpus_len: corpus.len(),
    })
}

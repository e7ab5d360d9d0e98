use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::machine::{MachineState, Program, RunLimits, StepOutcome, SAMPLED, SAMPLED_COUNT};
use crate::scalar::Scalar;

/// Default bound on the enumerated program length.
pub const DEFAULT_LENGTH_GUARD: usize = 12;
/// Largest length whose weights fit the `u64` numerators (7^22 < 2^64).
const HARD_LENGTH_LIMIT: usize = 22;
/// Depth of the program trie below which subtrees are explored in parallel.
const PARALLEL_DEPTH: usize = 2;

const SYMBOL_DIGITS: &[u8; 17] = b"0123456789abcdefg";

/// Budgets of the enumerated prior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OracleConfig {
    pub max_steps: u64,
    pub max_program_len: usize,
    pub max_output: usize,
}

impl OracleConfig {
    pub fn new(max_steps: u64, max_program_len: usize, max_output: usize) -> Self {
        OracleConfig {
            max_steps,
            max_program_len,
            max_output,
        }
    }

    /// Run limits under which sampling reproduces this prior.
    pub fn limits(&self) -> RunLimits {
        RunLimits::new(self.max_steps, self.max_output, Some(self.max_program_len))
    }
}

/// Exact prior table: every output prefix with its program mass.
///
/// Masses are integers over the common denominator `7^L`, so comparisons and
/// the semimeasure inequality are checked without rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorTable {
    config: OracleConfig,
    weights: BTreeMap<Vec<u8>, u64>,
}

impl PriorTable {
    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn denominator(&self) -> u64 {
        7u64.pow(self.config.max_program_len as u32)
    }

    /// Numerator of the prior mass of `x`.
    pub fn weight(&self, x: &[u8]) -> u64 {
        self.weights.get(x).copied().unwrap_or(0)
    }

    pub fn prob<T: Scalar>(&self, x: &[u8]) -> T {
        T::of(self.weight(x) as f64 / self.denominator() as f64)
    }

    /// Prefixes with nonzero mass in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u64)> {
        self.weights.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total mass of prefixes of exactly length `n`, as a numerator.
    pub fn mass_at_length(&self, n: usize) -> u64 {
        self.iter().filter(|(x, _)| x.len() == n).map(|(_, w)| w).sum()
    }

    /// First prefix `x` with `sum_a M(xa) > M(x)`, if any.
    pub fn semimeasure_violation(&self) -> Option<Vec<u8>> {
        let mut children: HashMap<&[u8], u64> = HashMap::new();
        for (x, w) in self.iter() {
            if let Some((_, parent)) = x.split_last() {
                *children.entry(parent).or_default() += w;
            }
        }
        children
            .into_iter()
            .find(|(parent, sum)| *sum > self.weight(parent))
            .map(|(p, _)| p.to_vec())
    }

    /// True when `self(x) >= other(x)` for every prefix.
    pub fn dominates(&self, other: &PriorTable) -> bool {
        let (a, b) = (self.denominator() as u128, other.denominator() as u128);
        other.iter().all(|(x, w)| self.weight(x) as u128 * b >= w as u128 * a)
    }

    /// `prefix<TAB>probability` lines; symbols are written as base-17 digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, _) in self.iter() {
            out.push_str(&prefix_text(x));
            let _ = writeln!(out, "\t{}", self.prob::<f64>(x));
        }
        out
    }
}

pub fn prefix_text(x: &[u8]) -> String {
    x.iter().map(|&s| SYMBOL_DIGITS[s as usize] as char).collect()
}

pub fn parse_prefix(text: &str) -> Option<Vec<u8>> {
    text.bytes()
        .map(|c| SYMBOL_DIGITS.iter().position(|&d| d == c).map(|p| p as u8))
        .collect()
}

type Terminals = HashMap<Vec<u8>, u64>;

fn merge(mut a: Terminals, b: Terminals) -> Terminals {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

struct Enumerator {
    limits: RunLimits,
    max_len: usize,
}

impl Enumerator {
    /// Runs the node until it blocks, then either records it or returns the
    /// children that extend it by one draw.
    fn expand(&self, mut state: MachineState, program: Program, out: &mut Terminals) -> Vec<(MachineState, Program)> {
        match state.run_until_blocked(&program, &self.limits) {
            StepOutcome::NeedsInstruction if program.len() < self.max_len => SAMPLED
                .iter()
                .map(|&draw| {
                    let mut s = state.clone();
                    let mut p = program.clone();
                    s.accept(&mut p, draw);
                    (s, p)
                })
                .collect(),
            _ => {
                let w = 7u64.pow((self.max_len - program.len()) as u32);
                *out.entry(state.output).or_default() += w;
                Vec::new()
            }
        }
    }

    fn explore(&self, state: MachineState, program: Program, depth: usize) -> Terminals {
        let mut out = Terminals::new();
        let children = self.expand(state, program, &mut out);
        if depth < PARALLEL_DEPTH {
            let sub = children
                .into_par_iter()
                .map(|(s, p)| self.explore(s, p, depth + 1))
                .reduce(Terminals::new, merge);
            merge(out, sub)
        } else {
            let mut stack = children;
            while let Some((s, p)) = stack.pop() {
                let more = self.expand(s, p, &mut out);
                stack.extend(more);
            }
            out
        }
    }
}

/// Enumerates the budgeted prior exactly, refusing lengths above the default guard.
pub fn enumerate_prior(config: &OracleConfig) -> Result<PriorTable> {
    enumerate_prior_with_guard(config, DEFAULT_LENGTH_GUARD)
}

pub fn enumerate_prior_with_guard(config: &OracleConfig, guard: usize) -> Result<PriorTable> {
    let limit = guard.min(HARD_LENGTH_LIMIT);
    if config.max_program_len > limit {
        return Err(Error::Guard {
            what: "max_program_len",
            value: config.max_program_len as u64,
            limit: limit as u64,
        });
    }
    if config.max_program_len == 0 || config.max_steps == 0 || config.max_output == 0 {
        return Err(Error::Config("oracle budgets must be positive".into()));
    }
    let e = Enumerator {
        limits: config.limits(),
        max_len: config.max_program_len,
    };
    let terminals = e.explore(MachineState::new(), Program::new(), 0);
    let mut weights: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for (output, w) in terminals {
        for k in 0..=output.len() {
            *weights.entry(output[..k].to_vec()).or_default() += w;
        }
    }
    debug_assert_eq!(SAMPLED_COUNT, 7);
    Ok(PriorTable {
        config: *config,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_prefix_has_unit_mass() {
        for cfg in [OracleConfig::new(10, 1, 1), OracleConfig::new(50, 4, 3)] {
            let t = enumerate_prior(&cfg).unwrap();
            assert_eq!(t.weight(&[]), t.denominator());
            assert_eq!(t.prob::<f64>(&[]), 1.0);
        }
    }

    #[test]
    fn single_draw_prior() {
        // Only '.' prints among the seven one-cell programs, and it prints 0.
        let t = enumerate_prior(&OracleConfig::new(10, 1, 1)).unwrap();
        assert_eq!(t.weight(&[0]), 1);
        assert_eq!(t.denominator(), 7);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn two_draw_prior_by_hand() {
        // Length-2 programs printing at least one symbol:
        //   '.' first (1/7, prints 0 and needs more => splits into 7 children):
        //       '..' prints 0,0; the rest print 0 only.
        //   '+.' prints 1; '-.' prints 16; '<.', '>.', '{.' and '].' print 0.
        let t = enumerate_prior(&OracleConfig::new(100, 2, 2)).unwrap();
        assert_eq!(t.denominator(), 49);
        assert_eq!(t.weight(&[0]), 7 + 4);
        assert_eq!(t.weight(&[0, 0]), 1);
        assert_eq!(t.weight(&[1]), 1);
        assert_eq!(t.weight(&[16]), 1);
        assert!(t.semimeasure_violation().is_none());
    }

    #[test]
    fn semimeasure_and_monotone() {
        let small = enumerate_prior(&OracleConfig::new(20, 4, 4)).unwrap();
        let more_steps = enumerate_prior(&OracleConfig::new(40, 4, 4)).unwrap();
        let longer = enumerate_prior(&OracleConfig::new(20, 5, 4)).unwrap();
        assert!(small.semimeasure_violation().is_none());
        assert!(more_steps.dominates(&small));
        assert!(longer.dominates(&small));
        assert!(!small.dominates(&longer));
    }

    #[test]
    fn guard_refuses_long_programs() {
        assert!(matches!(
            enumerate_prior(&OracleConfig::new(10, 13, 4)),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn text_export_sorted() {
        let t = enumerate_prior(&OracleConfig::new(100, 2, 2)).unwrap();
        let text = t.to_text();
        let keys: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(keys[0], "");
        assert!(text.contains("\ng\t"));
        assert_eq!(parse_prefix("0g"), Some(vec![0, 16]));
    }
}

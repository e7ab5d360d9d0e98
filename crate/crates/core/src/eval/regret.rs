use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::predictor::Predictor;
use crate::error::{Error, Result};
use crate::sampling::solomonoff_upper_bound;
use crate::scalar::Scalar;
use crate::tasks::Task;

/// Probabilities below this are raised to it before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

/// `ln μ - ln max(π, floor)`, and whether the floor was applied.
pub fn instantaneous_regret<T: Scalar>(mu: T, pi: T) -> (T, bool) {
    let floor = T::of(PROB_FLOOR);
    let clamped = !(pi >= floor);
    let pi = if clamped { floor } else { pi };
    (mu.ln() - pi.ln(), clamped)
}

/// Keys a sequence can be grouped by.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupKeys {
    pub program_len: Option<usize>,
    pub tree_depth: Option<usize>,
    pub task: Option<Task>,
}

/// One sequence with its loss mask and the probability the true source gave
/// each realized token.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalSequence {
    pub tokens: Vec<u8>,
    pub mask: Vec<bool>,
    pub truth: Vec<f64>,
    pub keys: GroupKeys,
    /// Shortened program length, for the code-length bound.
    pub shortened_len: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceReport<T> {
    pub index: usize,
    pub scored_steps: usize,
    pub cumulative_regret: T,
    pub log_loss: T,
    pub accuracy: Option<T>,
    pub clamp_events: usize,
    pub keys: GroupKeys,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupStats<T> {
    pub count: usize,
    pub mean: T,
    pub std_error: T,
}

fn stats<T: Scalar>(values: &[T]) -> GroupStats<T> {
    let n = values.len();
    if n == 0 {
        return GroupStats {
            count: 0,
            mean: T::zero(),
            std_error: T::zero(),
        };
    }
    let nt = T::of_count(n as u64);
    let mean = values.iter().fold(T::zero(), |a, &v| a + v) / nt;
    let std_error = if n > 1 {
        let var = values.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean)) / (nt - T::one());
        (var / nt).sqrt()
    } else {
        T::zero()
    };
    GroupStats {
        count: n,
        mean,
        std_error,
    }
}

/// Per-sequence rows plus aggregates of the cumulative regret.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretReport<T> {
    pub predictor: String,
    pub alphabet: usize,
    pub sequences: Vec<SequenceReport<T>>,
    /// Mean instantaneous regret and count at each position.
    pub per_step: Vec<(T, usize)>,
    pub total_log_loss: T,
    pub clamp_events: usize,
    /// Code-length bound of the batch, when shortened lengths are known.
    pub solomonoff_ub: Option<T>,
}

impl<T: Scalar> RegretReport<T> {
    pub fn empty(predictor: String, alphabet: usize) -> Self {
        RegretReport {
            predictor,
            alphabet,
            sequences: Vec::new(),
            per_step: Vec::new(),
            total_log_loss: T::zero(),
            clamp_events: 0,
            solomonoff_ub: None,
        }
    }

    pub fn overall(&self) -> GroupStats<T> {
        let v: Vec<T> = self.sequences.iter().map(|s| s.cumulative_regret).collect();
        stats(&v)
    }

    pub fn mean_accuracy(&self) -> Option<T> {
        let v: Vec<T> = self.sequences.iter().filter_map(|s| s.accuracy).collect();
        (!v.is_empty()).then(|| stats(&v).mean)
    }

    fn group_by<K: Ord + Clone>(&self, key: impl Fn(&GroupKeys) -> Option<K>) -> BTreeMap<K, GroupStats<T>> {
        let mut groups: BTreeMap<K, Vec<T>> = BTreeMap::new();
        for s in &self.sequences {
            if let Some(k) = key(&s.keys) {
                groups.entry(k).or_default().push(s.cumulative_regret);
            }
        }
        groups.into_iter().map(|(k, v)| (k, stats(&v))).collect()
    }

    pub fn by_program_len(&self) -> BTreeMap<usize, GroupStats<T>> {
        self.group_by(|k| k.program_len)
    }

    pub fn by_tree_depth(&self) -> BTreeMap<usize, GroupStats<T>> {
        self.group_by(|k| k.tree_depth)
    }

    pub fn by_task(&self) -> BTreeMap<Task, GroupStats<T>> {
        self.group_by(|k| k.task)
    }

    /// Tab-separated rows, one per sequence, then `#`-prefixed aggregates.
    pub fn to_text(&self, bits: bool) -> String {
        let unit = if bits { T::LN_2() } else { T::one() };
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        let mut s = String::new();
        writeln!(
            s,
            "# predictor\t{}\talphabet\t{}\tunit\t{}",
            self.predictor,
            self.alphabet,
            if bits { "bits" } else { "nats" }
        )
        .unwrap();
        writeln!(
            s,
            "index\tsteps\tcumulative_regret\tlog_loss\taccuracy\tclamps\tprogram_len\ttree_depth\ttask"
        )
        .unwrap();
        for r in &self.sequences {
            writeln!(
                s,
                "{}\t{}\t{:.12e}\t{:.12e}\t{}\t{}\t{}\t{}\t{}",
                r.index,
                r.scored_steps,
                r.cumulative_regret / unit,
                r.log_loss / unit,
                r.accuracy.map_or("-".to_string(), |a| format!("{a:.6}")),
                r.clamp_events,
                opt(r.keys.program_len),
                opt(r.keys.tree_depth),
                r.keys.task.map_or("-", |t| t.name()),
            )
            .unwrap();
        }
        let o = self.overall();
        writeln!(s, "# sequences\t{}", o.count).unwrap();
        writeln!(
            s,
            "# mean_cumulative_regret\t{:.12e}\t{:.12e}",
            o.mean / unit,
            o.std_error / unit
        )
        .unwrap();
        writeln!(s, "# total_log_loss\t{:.12e}", self.total_log_loss / unit).unwrap();
        if let Some(a) = self.mean_accuracy() {
            writeln!(s, "# mean_accuracy\t{a:.6}").unwrap();
        }
        if let Some(ub) = self.solomonoff_ub {
            writeln!(s, "# solomonoff_ub\t{:.12e}", ub / unit).unwrap();
        }
        writeln!(s, "# clamp_events\t{}", self.clamp_events).unwrap();
        let mut groups = |name: &str, rows: Vec<(String, GroupStats<T>)>| {
            for (k, g) in rows {
                writeln!(
                    s,
                    "# by_{name}\t{k}\t{}\t{:.12e}\t{:.12e}",
                    g.count,
                    g.mean / unit,
                    g.std_error / unit
                )
                .unwrap();
            }
        };
        groups(
            "program_len",
            self.by_program_len()
                .into_iter()
                .map(|(k, g)| (k.to_string(), g))
                .collect(),
        );
        groups(
            "tree_depth",
            self.by_tree_depth()
                .into_iter()
                .map(|(k, g)| (k.to_string(), g))
                .collect(),
        );
        groups(
            "task",
            self.by_task().into_iter().map(|(k, g)| (k.to_string(), g)).collect(),
        );
        for (t, (m, c)) in self.per_step.iter().enumerate() {
            if *c > 0 {
                writeln!(s, "# step\t{}\t{}\t{:.12e}", t + 1, c, *m / unit).unwrap();
            }
        }
        s
    }
}

fn score<T: Scalar>(
    p: &mut dyn Predictor<T>,
    index: usize,
    seq: &EvalSequence,
    per_step: &mut [(T, usize)],
) -> SequenceReport<T> {
    p.reset();
    let mut regret = T::zero();
    let mut loss = T::zero();
    let mut clamps = 0;
    let mut hits = 0usize;
    let mut steps = 0usize;
    for (t, &x) in seq.tokens.iter().enumerate() {
        if seq.mask[t] {
            let probs = p.predict();
            let pi = probs[x as usize];
            let (r, clamped) = instantaneous_regret(T::of(seq.truth[t]), pi);
            let (l, _) = instantaneous_regret(T::one(), pi);
            regret = regret + r;
            loss = loss + l;
            clamps += usize::from(clamped);
            per_step[t].0 = per_step[t].0 + r;
            per_step[t].1 += 1;
            // Ties go to the lowest symbol.
            let arg = probs
                .iter()
                .enumerate()
                .fold(
                    (0, T::neg_infinity()),
                    |best, (i, &q)| if q > best.1 { (i, q) } else { best },
                )
                .0;
            hits += usize::from(arg == x as usize);
            steps += 1;
        }
        p.observe(x);
    }
    let accuracy = (seq.keys.task.is_some() && steps > 0).then(|| T::of_count(hits as u64) / T::of_count(steps as u64));
    SequenceReport {
        index,
        scored_steps: steps,
        cumulative_regret: regret,
        log_loss: loss,
        accuracy,
        clamp_events: clamps,
        keys: seq.keys.clone(),
    }
}

/// Scores a fresh predictor from `make` on every sequence.
pub fn evaluate_sequences<T, P, F>(make: F, alphabet: usize, sequences: &[EvalSequence]) -> Result<RegretReport<T>>
where
    T: Scalar,
    P: Predictor<T>,
    F: Fn() -> P + Sync,
{
    let probe = make();
    if probe.alphabet() != alphabet {
        return Err(Error::AlphabetMismatch {
            predictor: probe.alphabet(),
            shard: alphabet,
        });
    }
    let mut report = RegretReport::empty(probe.name(), alphabet);
    if sequences.is_empty() {
        return Ok(report);
    }
    if let Some(s) = sequences
        .iter()
        .find(|s| s.tokens.iter().any(|&t| t as usize >= alphabet))
    {
        return Err(Error::Format(format!(
            "token outside alphabet {alphabet} in {:?}",
            &s.tokens
        )));
    }
    let max_len = sequences.iter().map(|s| s.tokens.len()).max().unwrap_or(0);
    let parts: Vec<(SequenceReport<T>, Vec<(T, usize)>)> = sequences
        .par_iter()
        .enumerate()
        .map(|(i, seq)| {
            let mut p = make();
            let mut per_step = vec![(T::zero(), 0usize); max_len];
            let r = score(&mut p, i, seq, &mut per_step);
            (r, per_step)
        })
        .collect();
    report.per_step = vec![(T::zero(), 0); max_len];
    for (r, per_step) in parts {
        for (acc, (v, c)) in report.per_step.iter_mut().zip(per_step) {
            acc.0 = acc.0 + v;
            acc.1 += c;
        }
        report.total_log_loss = report.total_log_loss + r.log_loss;
        report.clamp_events += r.clamp_events;
        report.sequences.push(r);
    }
    for acc in &mut report.per_step {
        if acc.1 > 0 {
            acc.0 = acc.0 / T::of_count(acc.1 as u64);
        }
    }
    let shortened: Option<Vec<usize>> = sequences.iter().map(|s| s.shortened_len).collect();
    report.solomonoff_ub = shortened.map(|l| solomonoff_upper_bound(&l));
    Ok(report)
}

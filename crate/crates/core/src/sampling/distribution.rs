use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::{Instruction, SAMPLED, SAMPLED_COUNT};

/// Symbol used for "before the start of the program" in contexts.
pub const PAD_CHAR: char = '_';
const PAD: usize = SAMPLED_COUNT;
const CONTEXT_RADIX: usize = SAMPLED_COUNT + 1;

/// A k-th order Markov distribution over the seven sampled instructions.
///
/// Rows are indexed by the previous `order` draws, start-padded with `_`.
/// `{` counts as `[` everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramDistribution {
    order: usize,
    rows: Vec<[f64; SAMPLED_COUNT]>,
}

fn context_index(order: usize, history: &[Instruction]) -> usize {
    let take = history.len().min(order);
    let mut idx = 0;
    for _ in 0..order - take {
        idx = idx * CONTEXT_RADIX + PAD;
    }
    for ins in &history[history.len() - take..] {
        idx = idx * CONTEXT_RADIX + ins.sampled_index();
    }
    idx
}

/// Decodes a row index into its context symbols (`None` is padding).
fn context_symbols(order: usize, mut idx: usize) -> Vec<Option<Instruction>> {
    let mut out = vec![None; order];
    for slot in out.iter_mut().rev() {
        let d = idx % CONTEXT_RADIX;
        idx /= CONTEXT_RADIX;
        *slot = (d != PAD).then(|| SAMPLED[d]);
    }
    out
}

/// Padding may only precede real instructions.
fn is_reachable(context: &[Option<Instruction>]) -> bool {
    context.windows(2).all(|w| !(w[0].is_some() && w[1].is_none()))
}

fn context_string(context: &[Option<Instruction>]) -> String {
    context.iter().map(|c| c.map_or(PAD_CHAR, |i| i.to_char())).collect()
}

impl ProgramDistribution {
    pub fn uniform(order: usize) -> Self {
        let rows = vec![[1.0 / SAMPLED_COUNT as f64; SAMPLED_COUNT]; CONTEXT_RADIX.pow(order as u32)];
        ProgramDistribution { order, rows }
    }

    /// Builds a distribution from explicit rows (one per context, in index order).
    pub fn from_rows(order: usize, rows: Vec<[f64; SAMPLED_COUNT]>) -> Result<Self> {
        if rows.len() != CONTEXT_RADIX.pow(order as u32) {
            return Err(Error::QTable(format!(
                "expected {} rows for order {order}, got {}",
                CONTEXT_RADIX.pow(order as u32),
                rows.len()
            )));
        }
        Ok(ProgramDistribution { order, rows })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[[f64; SAMPLED_COUNT]] {
        &self.rows
    }

    /// Row used after the given draw history.
    pub fn row(&self, history: &[Instruction]) -> &[f64; SAMPLED_COUNT] {
        &self.rows[context_index(self.order, history)]
    }

    /// Row indices whose context can actually occur.
    pub fn reachable_rows(&self) -> impl Iterator<Item = (usize, String)> + '_ {
        (0..self.rows.len()).filter_map(move |idx| {
            let ctx = context_symbols(self.order, idx);
            is_reachable(&ctx).then(|| (idx, context_string(&ctx)))
        })
    }

    /// Inverse-CDF draw with a uniform variate `u` in [0, 1).
    pub fn sample_after(&self, history: &[Instruction], u: f64) -> Instruction {
        let row = self.row(history);
        let mut acc = 0.0;
        for (k, p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return SAMPLED[k];
            }
        }
        // Rounding left a sliver above the last cumulative sum.
        let last = row.iter().rposition(|&p| p > 0.0).unwrap_or(SAMPLED_COUNT - 1);
        SAMPLED[last]
    }

    /// Draws one instruction following `history`.
    pub fn sample_instruction<R: rand::Rng>(&self, history: &[Instruction], rng: &mut R) -> Instruction {
        self.sample_after(history, rng.random::<f64>())
    }

    /// Probability of a whole draw sequence.
    pub fn log_prob(&self, draws: &[Instruction]) -> f64 {
        (0..draws.len())
            .map(|t| self.row(&draws[..t])[draws[t].sampled_index()].ln())
            .sum()
    }

    /// Maximum-likelihood k-th order fit with additive smoothing `epsilon`.
    pub fn fit<P: AsRef<[Instruction]>>(corpus: &[P], order: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::NonPositiveSmoothing(epsilon));
        }
        let mut counts = vec![[0u64; SAMPLED_COUNT]; CONTEXT_RADIX.pow(order as u32)];
        for program in corpus {
            let draws = program.as_ref();
            for t in 0..draws.len() {
                counts[context_index(order, &draws[..t])][draws[t].sampled_index()] += 1;
            }
        }
        Ok(Self::from_counts(order, &counts, epsilon))
    }

    /// Normalizes per-context counts with additive smoothing.
    pub fn from_counts(order: usize, counts: &[[u64; SAMPLED_COUNT]], epsilon: f64) -> Self {
        let rows = counts
            .iter()
            .map(|c| {
                let total = c.iter().sum::<u64>() as f64 + epsilon * SAMPLED_COUNT as f64;
                let mut row = [0.0; SAMPLED_COUNT];
                for (r, &n) in row.iter_mut().zip(c) {
                    *r = (n as f64 + epsilon) / total;
                }
                row
            })
            .collect();
        ProgramDistribution { order, rows }
    }

    /// Plain-text matrix: one row per reachable context, columns `<>+-[].`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# program distribution; '{{' is merged into '['");
        let _ = writeln!(out, "order\t{}", self.order);
        let cols: String = SAMPLED.iter().map(|i| i.to_char()).collect();
        let _ = writeln!(out, "columns\t{cols}");
        for (idx, ctx) in self.reachable_rows() {
            out.push_str(&ctx);
            for p in &self.rows[idx] {
                let _ = write!(out, "\t{p:e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let order = lines
            .next()
            .and_then(|l| l.strip_prefix("order\t"))
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::QTable("missing 'order' line".into()))?;
        let cols = lines
            .next()
            .and_then(|l| l.strip_prefix("columns\t"))
            .ok_or_else(|| Error::QTable("missing 'columns' line".into()))?;
        let expected: String = SAMPLED.iter().map(|i| i.to_char()).collect();
        if cols.trim() != expected {
            return Err(Error::QTable(format!("unexpected column order {cols:?}")));
        }
        let mut dist = Self::uniform(order);
        for line in lines {
            let mut fields = line.split('\t');
            let ctx = fields.next().unwrap_or_default();
            let symbols = ctx
                .chars()
                .map(|c| match c {
                    PAD_CHAR => Ok(None),
                    c => Instruction::from_char(c)
                        .filter(|i| *i != Instruction::OpenSkipped)
                        .map(Some)
                        .ok_or_else(|| Error::QTable(format!("bad context symbol {c:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if symbols.len() != order {
                return Err(Error::QTable(format!("context {ctx:?} has wrong length")));
            }
            let idx = symbols
                .iter()
                .fold(0, |acc, s| acc * CONTEXT_RADIX + s.map_or(PAD, |i| i.sampled_index()));
            let mut row = [0.0; SAMPLED_COUNT];
            let mut n = 0;
            for (slot, field) in row.iter_mut().zip(fields.by_ref()) {
                *slot = field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::QTable(format!("context {ctx:?}: {e}")))?;
                n += 1;
            }
            if n != SAMPLED_COUNT || fields.next().is_some() {
                return Err(Error::QTable(format!("context {ctx:?} needs 7 columns")));
            }
            dist.rows[idx] = row;
        }
        Ok(dist)
    }
}

/// Outcome of checking the preconditions that keep a program distribution universal.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalityReport {
    pub positive: bool,
    pub normalized: bool,
    /// Every row's largest entry is below one, so long programs get vanishing mass.
    pub vanishing: bool,
    /// First offending row and its context, if any check failed.
    pub offending: Option<(String, [f64; SAMPLED_COUNT])>,
}

impl UniversalityReport {
    pub fn passed(&self) -> bool {
        self.positive && self.normalized && self.vanishing
    }
}

pub fn check_universality_conditions(dist: &ProgramDistribution) -> UniversalityReport {
    let mut report = UniversalityReport {
        positive: true,
        normalized: true,
        vanishing: true,
        offending: None,
    };
    for (idx, ctx) in dist.reachable_rows() {
        let row = dist.rows[idx];
        let positive = row.iter().all(|&p| p > 0.0 && p.is_finite());
        let normalized = (row.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        let vanishing = row.iter().all(|&p| p < 1.0);
        if !(positive && normalized && vanishing) && report.offending.is_none() {
            report.offending = Some((ctx, row));
        }
        report.positive &= positive;
        report.normalized &= normalized;
        report.vanishing &= vanishing;
    }
    report
}

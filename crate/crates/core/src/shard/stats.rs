use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::format::{Payload, Shard};
use crate::ctw::SuffixTree;
use crate::machine::{sample_and_run, RunLimits};
use crate::sampling::{shorten, InterestFilter, ProgramDistribution};
use crate::seed;

pub type Histogram = BTreeMap<usize, usize>;

/// Counts over a batch of records.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub records: usize,
    pub program_len: Histogram,
    pub shortened_len: Histogram,
    pub output_len: Histogram,
    pub tree_depth: Histogram,
    pub leaf_count: Histogram,
    pub task: BTreeMap<String, usize>,
    pub interesting: usize,
}

impl Stats {
    pub fn interesting_fraction(&self) -> f64 {
        if self.records == 0 {
            0.0
        } else {
            self.interesting as f64 / self.records as f64
        }
    }

    fn merge(mut self, other: Stats) -> Stats {
        self.records += other.records;
        self.interesting += other.interesting;
        for (mine, theirs) in [
            (&mut self.program_len, other.program_len),
            (&mut self.shortened_len, other.shortened_len),
            (&mut self.output_len, other.output_len),
            (&mut self.tree_depth, other.tree_depth),
            (&mut self.leaf_count, other.leaf_count),
        ] {
            for (k, v) in theirs {
                *mine.entry(k).or_default() += v;
            }
        }
        for (k, v) in other.task {
            *self.task.entry(k).or_default() += v;
        }
        self
    }

    /// Samples `count` programs directly, without writing shards.
    pub fn sample_utm(
        dist: &ProgramDistribution,
        limits: RunLimits,
        count: usize,
        base_seed: u64,
        filter: InterestFilter,
    ) -> Stats {
        (0..count as u64)
            .into_par_iter()
            .map(|j| {
                let mut rng = seed::rng(seed::record_seed(base_seed, j));
                let run = sample_and_run(dist, &limits, &mut rng);
                let short = shorten(&run.program, &run.trace, &limits);
                let mut s = Stats {
                    records: 1,
                    interesting: usize::from(filter.accepts(&run.output)),
                    ..Stats::default()
                };
                s.program_len.insert(run.trace.consumed_len, 1);
                s.shortened_len.insert(short.shortened_len, 1);
                s.output_len.insert(run.output.len(), 1);
                s
            })
            .reduce(Stats::default, Stats::merge)
    }

    pub fn from_shards(shards: &[Shard], filter: InterestFilter) -> Stats {
        let mut s = Stats::default();
        for shard in shards {
            for r in &shard.records {
                s.records += 1;
                match &r.payload {
                    Payload::Utm(p) => {
                        *s.program_len.entry(p.consumed_len as usize).or_default() += 1;
                        *s.shortened_len.entry(p.shortened_len as usize).or_default() += 1;
                        *s.output_len.entry(p.output_len as usize).or_default() += 1;
                        s.interesting += usize::from(filter.accepts(&r.tokens[..p.output_len as usize]));
                    }
                    Payload::Voms(p) => {
                        if let Ok(t) = SuffixTree::from_preorder(&p.shape, &p.thetas, p.max_depth as usize) {
                            *s.tree_depth.entry(t.depth()).or_default() += 1;
                            *s.leaf_count.entry(t.leaf_count()).or_default() += 1;
                        }
                    }
                    Payload::Chomsky(p) => {
                        *s.task.entry(p.task.name().to_string()).or_default() += 1;
                    }
                }
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "records\t{}", self.records).unwrap();
        if !self.program_len.is_empty() {
            writeln!(
                out,
                "interesting\t{}\t{:.6e}",
                self.interesting,
                self.interesting_fraction()
            )
            .unwrap();
        }
        for (name, h) in [
            ("program_len", &self.program_len),
            ("shortened_len", &self.shortened_len),
            ("output_len", &self.output_len),
            ("tree_depth", &self.tree_depth),
            ("leaf_count", &self.leaf_count),
        ] {
            for (k, v) in h {
                writeln!(out, "{name}\t{k}\t{v}").unwrap();
            }
        }
        for (k, v) in &self.task {
            writeln!(out, "task\t{k}\t{v}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_counts_add_up() {
        let s = Stats::sample_utm(
            &ProgramDistribution::uniform(0),
            RunLimits::default(),
            500,
            1,
            InterestFilter::default(),
        );
        assert_eq!(s.records, 500);
        assert_eq!(s.program_len.values().sum::<usize>(), 500);
        assert!(s.interesting_fraction() < 0.5);
        assert!(s.to_text().starts_with("records\t500\n"));
    }
}

use rayon::prelude::*;

use super::{shorten, InterestFilter, ProgramDistribution};
use crate::error::Result;
use crate::machine::{sample_and_run, Instruction, RunLimits};
use crate::seed;

/// Q fitted on the shortened programs of interesting outputs.
#[derive(Clone, Debug)]
pub struct TrainedQ {
    pub dist: ProgramDistribution,
    pub sampled: usize,
    pub interesting: usize,
}

impl TrainedQ {
    pub fn source_fraction(&self) -> f64 {
        self.interesting as f64 / self.sampled as f64
    }
}

/// Shortened draws of every sampled program whose output passes `filter`.
pub fn interesting_programs(
    dist: &ProgramDistribution,
    limits: &RunLimits,
    count: usize,
    base_seed: u64,
    filter: InterestFilter,
) -> Vec<Vec<Instruction>> {
    (0..count as u64)
        .into_par_iter()
        .filter_map(|j| {
            let mut rng = seed::rng(seed::record_seed(base_seed, j));
            let run = sample_and_run(dist, limits, &mut rng);
            filter.accepts(&run.output).then(|| {
                let short = shorten(&run.program, &run.trace, limits);
                short.cells().iter().map(|c| c.as_drawn()).collect()
            })
        })
        .collect()
}

/// Samples `count` programs from `source`, keeps the interesting ones and
/// fits an order-`order` Q to their shortened programs.
pub fn train_q(
    source: &ProgramDistribution,
    limits: &RunLimits,
    count: usize,
    base_seed: u64,
    filter: InterestFilter,
    order: usize,
    epsilon: f64,
) -> Result<TrainedQ> {
    let corpus = interesting_programs(source, limits, count, base_seed, filter);
    Ok(TrainedQ {
        dist: ProgramDistribution::fit(&corpus, order, epsilon)?,
        sampled: count,
        interesting: corpus.len(),
    })
}

/// Fraction of `count` fresh programs from `dist` with interesting output.
pub fn interesting_fraction(
    dist: &ProgramDistribution,
    limits: &RunLimits,
    count: usize,
    base_seed: u64,
    filter: InterestFilter,
) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let hits = (0..count as u64)
        .into_par_iter()
        .filter(|&j| {
            let mut rng = seed::rng(seed::record_seed(base_seed, j));
            filter.accepts(&sample_and_run(dist, limits, &mut rng).output)
        })
        .count();
    hits as f64 / count as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trained_q_is_universal_and_helps() {
        let limits = RunLimits::default();
        let f = InterestFilter::default();
        let u = ProgramDistribution::uniform(2);
        let t = train_q(&u, &limits, 20_000, 1, f, 2, 0.01).unwrap();
        assert!(t.interesting > 0);
        assert!(super::super::check_universality_conditions(&t.dist).passed());
        let before = interesting_fraction(&u, &limits, 5_000, 2, f);
        let after = interesting_fraction(&t.dist, &limits, 5_000, 2, f);
        assert!(after > before, "{before} -> {after}");
    }
}

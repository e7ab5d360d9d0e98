//! Predictors, regret and accuracy reports.

mod predictor;
mod regret;

pub use predictor::{baseline, Baseline, Predictor, Uniform};
pub use regret::{
    evaluate_sequences, instantaneous_regret, EvalSequence, GroupKeys, GroupStats, RegretReport, SequenceReport,
    PROB_FLOOR,
};

//! The budgeted Solomonoff prior: exact enumeration, corpus estimators,
//! padding and the cut log-loss.

mod corpus;
mod loss;
mod oracle;

pub use corpus::{
    empirical_norm_predictive, empirical_prior, limit_normalized, LimitNormalized, PrefixCounts, SampleCorpus,
};
pub use loss::{cut_log_loss, masked_log_loss, pad_record, pad_with_absorber, PadMode, PaddedRecord, ABSORBER};
pub use oracle::{
    enumerate_prior, enumerate_prior_with_guard, parse_prefix, prefix_text, OracleConfig, PriorTable,
    DEFAULT_LENGTH_GUARD,
};

//! Data sources and baselines for meta-learning universal sequence predictors.
//!
//! * [`machine`]: the BrainPhoque monotone machine, run on fixed programs or
//!   generated while it evaluates.
//! * [`sampling`]: program distributions, shortening and the Solomonoff
//!   log-loss upper bound.
//! * [`prior`]: exact enumeration of the budgeted Solomonoff prior and the
//!   corpus estimators that approximate it.
//! * [`ctw`]: variable-order Markov sources and the context tree weighting
//!   predictor.
//! * [`tasks`]: algorithmic tasks over a shared token vocabulary.
//! * [`eval`]: predictors, regret and accuracy reports.
//! * [`shard`]: the binary shard format and deterministic parallel generation.

pub mod ctw;
pub mod error;
pub mod eval;
pub mod machine;
pub mod prior;
pub mod sampling;
pub mod scalar;
pub mod seed;
pub mod shard;
pub mod tasks;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// CTW state in double precision.
pub type Ctw = ctw::CtwState<f64>;
/// CTW state in single precision.
pub type Ctw32 = ctw::CtwState<f32>;
/// Double-precision regret report.
pub type RegretReport = eval::RegretReport<f64>;

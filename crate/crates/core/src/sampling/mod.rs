//! Program distributions, shortening, the interestingness filter and the
//! Solomonoff log-loss upper bound.

mod bound;
mod distribution;
mod filter;
mod shorten;
mod train;

pub use bound::solomonoff_upper_bound;
pub use distribution::{check_universality_conditions, ProgramDistribution, UniversalityReport, PAD_CHAR};
pub use filter::{is_interesting, InterestFilter};
pub use shorten::{shorten, ShortenedProgram};
pub use train::{interesting_fraction, interesting_programs, train_q, TrainedQ};

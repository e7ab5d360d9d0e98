//! Variable-order Markov sources and context tree weighting.

mod fixed;
mod kt;
mod mixture;
mod state;
mod tree;

pub use fixed::FixedDepthKt;
pub use kt::{kt_ratio, log_kt, KtEstimator};
pub use mixture::{brute_force_mixture, MIXTURE_MAX_DEPTH, MIXTURE_MAX_LEN};
pub use state::CtwState;
pub use tree::{sample_sequence, sample_tree, tree_depth_pmf, SplitProbs, SuffixTree, VomsSample};

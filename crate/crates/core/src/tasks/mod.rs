//! Algorithmic tasks from the regular, deterministic context-free and
//! context-sensitive levels, sharing one token vocabulary.

mod episode;
mod expr;
mod generate;
mod oracle;
mod task;
pub mod vocab;

pub use episode::{assemble_sequence, masked_accuracy, EpisodeRecord};
pub use expr::{evaluate, ExprCounts, MODULUS};
pub use generate::{generate_episode, valid_length, Episode, MAX_INPUT_LEN, MIN_INPUT_LEN};
pub use oracle::{solution_count, task_oracle};
pub use task::{Level, Task};

//! The BrainPhoque monotone machine.
//!
//! Programs are either fixed (lexical text, BF-style bracket matching) or
//! generated while they run: whenever the instruction pointer reaches a cell
//! that does not exist yet, an [`InstructionSource`] supplies it.

mod instruction;
mod program;
mod run;
mod state;

pub use instruction::{parse_program, parse_sampled, program_text, Instruction, SAMPLED, SAMPLED_COUNT};
pub use program::{match_brackets, Attach, BracketMatch, Program};
pub use run::{
    generate, regenerate, replay, run_program, sample_and_run, InstructionSource, Run, Sampler, Script, StopReason,
};
pub use state::{EvalTrace, MachineState, RunLimits, StepOutcome, ALPHABET_SIZE, TAPE_LEN};

use super::instruction::Instruction;
use super::program::Program;
use super::state::{EvalTrace, MachineState, RunLimits, StepOutcome};
use crate::sampling::ProgramDistribution;

/// Supplies instructions whenever evaluation reaches the generation frontier.
pub trait InstructionSource {
    /// Next instruction given the cells drawn so far, or `None` to stop.
    fn draw(&mut self, history: &[Instruction]) -> Option<Instruction>;
}

/// Replays a fixed sequence of draws.
#[derive(Clone, Debug)]
pub struct Script<'a> {
    draws: &'a [Instruction],
    pos: usize,
}

impl<'a> Script<'a> {
    pub fn new(draws: &'a [Instruction]) -> Self {
        Script { draws, pos: 0 }
    }
}

impl InstructionSource for Script<'_> {
    fn draw(&mut self, _history: &[Instruction]) -> Option<Instruction> {
        let next = self.draws.get(self.pos).map(|c| c.as_drawn());
        self.pos += 1;
        next
    }
}

/// Draws from a program distribution with the given generator.
pub struct Sampler<'a, R> {
    pub dist: &'a ProgramDistribution,
    pub rng: &'a mut R,
}

impl<R: rand::Rng> InstructionSource for Sampler<'_, R> {
    fn draw(&mut self, history: &[Instruction]) -> Option<Instruction> {
        Some(self.dist.sample_after(history, self.rng.random::<f64>()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    StepLimit,
    OutputLimit,
    /// The program-length budget was reached while another cell was needed.
    ProgramLimit,
    /// Evaluation reached the end of a fixed program or script.
    ProgramEnd,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub program: Program,
    pub output: Vec<u8>,
    pub trace: EvalTrace,
    pub steps: u64,
    pub stop: StopReason,
}

fn budget_reason(state: &MachineState, limits: &RunLimits) -> StopReason {
    if state.output.len() >= limits.max_output {
        StopReason::OutputLimit
    } else {
        StopReason::StepLimit
    }
}

fn finish(state: MachineState, program: Program, stop: StopReason) -> Run {
    Run {
        program,
        output: state.output,
        trace: state.trace,
        steps: state.steps,
        stop,
    }
}

/// Runs a fixed program; reaching the end of the array stops evaluation.
pub fn replay(program: &Program, limits: &RunLimits) -> Run {
    let mut state = MachineState::new();
    let stop = match state.run_until_blocked(program, limits) {
        StepOutcome::NeedsInstruction => StopReason::ProgramEnd,
        _ => budget_reason(&state, limits),
    };
    state.trace.consumed_len = state.trace.first_eval_step.iter().filter(|s| s.is_some()).count();
    finish(state, program.clone(), stop)
}

/// Runs lexical program text (brackets matched statically).
pub fn run_program(text: &[Instruction], limits: &RunLimits) -> Run {
    replay(&Program::from_lexical(text), limits)
}

/// Generates a program while evaluating it, drawing each new cell from `source`.
pub fn generate<S: InstructionSource>(source: &mut S, limits: &RunLimits) -> Run {
    let mut state = MachineState::new();
    let mut program = Program::new();
    let stop = loop {
        match state.step(&program, limits) {
            StepOutcome::Continued | StepOutcome::Output(_) => {}
            StepOutcome::BudgetExhausted => break budget_reason(&state, limits),
            StepOutcome::NeedsInstruction => {
                if limits.max_program_len.is_some_and(|l| program.len() >= l) {
                    break StopReason::ProgramLimit;
                }
                match source.draw(program.cells()) {
                    Some(draw) => state.accept(&mut program, draw),
                    None => break StopReason::ProgramEnd,
                }
            }
        }
    };
    finish(state, program, stop)
}

/// Rebuilds a generated program (and its run) from its recorded draws.
pub fn regenerate(draws: &[Instruction], limits: &RunLimits) -> Run {
    generate(&mut Script::new(draws), limits)
}

/// Samples a program from `dist` as it is evaluated.
pub fn sample_and_run<R: rand::Rng>(dist: &ProgramDistribution, limits: &RunLimits, rng: &mut R) -> Run {
    generate(&mut Sampler { dist, rng }, limits)
}

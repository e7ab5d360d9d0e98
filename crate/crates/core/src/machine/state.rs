use super::instruction::Instruction;
use super::program::{Attach, Program};

/// Output and tape alphabet size.
pub const ALPHABET_SIZE: u8 = 17;
/// Working tape length.
pub const TAPE_LEN: usize = 200;

/// Evaluation budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RunLimits {
    /// Maximum number of evaluated instructions.
    pub max_steps: u64,
    /// Maximum number of output symbols.
    pub max_output: usize,
    /// Maximum number of program cells that may be drawn; `None` is unbounded.
    pub max_program_len: Option<usize>,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_steps: 1000,
            max_output: 256,
            max_program_len: None,
        }
    }
}

impl RunLimits {
    pub fn new(max_steps: u64, max_output: usize, max_program_len: Option<usize>) -> Self {
        assert!(max_steps > 0 && max_output > 0, "budgets must be positive");
        assert!(max_program_len != Some(0), "program length budget must be positive");
        RunLimits {
            max_steps,
            max_output,
            max_program_len,
        }
    }
}

/// First-evaluation bookkeeping for one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalTrace {
    /// Step index at which each cell was first evaluated.
    pub first_eval_step: Vec<Option<u64>>,
    /// Step index of the last evaluated print.
    pub last_print_step: Option<u64>,
    /// Number of program cells drawn or read.
    pub consumed_len: usize,
}

impl EvalTrace {
    /// Number of leading cells whose first evaluation happened no later than
    /// the last print. Generated programs are laid out in first-evaluation
    /// order, so these cells form a prefix.
    pub fn cells_up_to_last_print(&self) -> usize {
        let Some(last) = self.last_print_step else {
            return 0;
        };
        self.first_eval_step
            .iter()
            .take_while(|s| matches!(s, Some(step) if *step <= last))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Continued,
    Output(u8),
    BudgetExhausted,
    /// The instruction pointer sits on the generation frontier.
    NeedsInstruction,
}

#[derive(Clone, Debug)]
pub struct MachineState {
    pub tape: [u8; TAPE_LEN],
    pub wtp: usize,
    pub ip: usize,
    pub steps: u64,
    pub output: Vec<u8>,
    /// How a cell drawn at the frontier links into the program.
    pub attach: Attach,
    pub trace: EvalTrace,
}

impl Default for MachineState {
    fn default() -> Self {
        MachineState {
            tape: [0; TAPE_LEN],
            wtp: 0,
            ip: 0,
            steps: 0,
            output: Vec::new(),
            attach: Attach::FallThrough,
            trace: EvalTrace::default(),
        }
    }
}

impl MachineState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn datum(&self) -> u8 {
        self.tape[self.wtp]
    }

    pub fn budget_exhausted(&self, limits: &RunLimits) -> bool {
        self.steps >= limits.max_steps || self.output.len() >= limits.max_output
    }

    /// Evaluates exactly one instruction.
    pub fn step(&mut self, program: &Program, limits: &RunLimits) -> StepOutcome {
        if self.budget_exhausted(limits) {
            return StepOutcome::BudgetExhausted;
        }
        let i = self.ip;
        if i >= program.len() {
            return StepOutcome::NeedsInstruction;
        }
        if self.trace.first_eval_step.len() <= i {
            self.trace.first_eval_step.resize(i + 1, None);
        }
        if self.trace.first_eval_step[i].is_none() {
            self.trace.first_eval_step[i] = Some(self.steps);
        }

        let datum = self.datum();
        let mut outcome = StepOutcome::Continued;
        match program.cell(i) {
            Instruction::Left => {
                self.wtp = (self.wtp + TAPE_LEN - 1) % TAPE_LEN;
                self.advance(i);
            }
            Instruction::Right => {
                self.wtp = (self.wtp + 1) % TAPE_LEN;
                self.advance(i);
            }
            Instruction::Inc => {
                self.tape[self.wtp] = (datum + 1) % ALPHABET_SIZE;
                self.advance(i);
            }
            Instruction::Dec => {
                self.tape[self.wtp] = (datum + ALPHABET_SIZE - 1) % ALPHABET_SIZE;
                self.advance(i);
            }
            Instruction::Print => {
                self.output.push(datum);
                self.trace.last_print_step = Some(self.steps);
                outcome = StepOutcome::Output(datum);
                self.advance(i);
            }
            Instruction::Open => {
                if datum != 0 {
                    self.advance(i);
                } else {
                    self.take_branch(program, i, Attach::Continuation(i));
                }
            }
            Instruction::OpenSkipped => {
                if datum == 0 {
                    self.advance(i);
                } else {
                    self.take_branch(program, i, Attach::Body(i));
                }
            }
            Instruction::Close => match program.partner(i) {
                Some(open) => {
                    self.ip = open;
                    self.attach = Attach::FallThrough;
                }
                None => self.advance(i),
            },
        }
        self.steps += 1;
        outcome
    }

    fn advance(&mut self, i: usize) {
        self.ip = i + 1;
        self.attach = Attach::FallThrough;
    }

    fn take_branch(&mut self, program: &Program, i: usize, missing: Attach) {
        match program.branch(i) {
            Some(target) => {
                self.ip = target;
                self.attach = Attach::FallThrough;
            }
            None => {
                // The branch does not exist yet: it will start at the frontier.
                self.ip = program.len();
                self.attach = missing;
            }
        }
    }

    /// Steps until the budget binds or the frontier is reached.
    pub fn run_until_blocked(&mut self, program: &Program, limits: &RunLimits) -> StepOutcome {
        loop {
            match self.step(program, limits) {
                StepOutcome::Continued | StepOutcome::Output(_) => {}
                blocked => return blocked,
            }
        }
    }

    /// Appends a drawn instruction at the frontier; the pointer is left on it.
    pub fn accept(&mut self, program: &mut Program, draw: Instruction) {
        debug_assert_eq!(self.ip, program.len());
        let attach = std::mem::take(&mut self.attach);
        let idx = program.append(draw, self.datum(), attach);
        self.ip = idx;
        self.trace.consumed_len = program.len();
    }
}

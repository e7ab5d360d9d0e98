use crate::machine::{regenerate, EvalTrace, Instruction, Program, RunLimits};

/// A program with provably inert instructions removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortenedProgram {
    /// The shortened program, rebuilt by regenerating it from its draws.
    pub program: Program,
    pub original_len: usize,
    pub shortened_len: usize,
}

impl ShortenedProgram {
    pub fn cells(&self) -> &[Instruction] {
        self.program.cells()
    }
}

fn is_cancelling(a: Instruction, b: Instruction) -> bool {
    use Instruction::*;
    matches!((a, b), (Inc, Dec) | (Dec, Inc) | (Left, Right) | (Right, Left))
}

/// Removes adjacent `+-`, `-+`, `<>`, `><` pairs, including pairs that only
/// become adjacent after an inner pair is removed.
fn cancel_pairs(draws: &[Instruction]) -> Vec<Instruction> {
    let mut out: Vec<Instruction> = Vec::with_capacity(draws.len());
    for &d in draws {
        match out.last() {
            Some(&top) if is_cancelling(top, d) => {
                out.pop();
            }
            _ => out.push(d),
        }
    }
    out
}

/// Cells that never influence evaluation: `{` whose body was never needed,
/// `[` whose body was never closed, and `]` with no partner.
fn inert_cells(program: &Program) -> Vec<bool> {
    (0..program.len())
        .map(|i| match program.cell(i) {
            Instruction::OpenSkipped => program.branch(i).is_none(),
            Instruction::Open => program.partner(i).is_none(),
            Instruction::Close => program.partner(i).is_none(),
            _ => false,
        })
        .collect()
}

/// Shortens a generated program given the trace of the run that produced it.
///
/// Cells first evaluated after the last print are dropped, then inert
/// brackets and self-cancelling pairs are removed, repeating until nothing
/// changes. Re-running the result under `limits` emits an output that starts
/// with the original output.
pub fn shorten(program: &Program, trace: &EvalTrace, limits: &RunLimits) -> ShortenedProgram {
    let original_len = program.len();
    let mut draws = program.draws();
    draws.truncate(trace.cells_up_to_last_print());

    let final_run = loop {
        let run = regenerate(&draws, limits);
        let keep = run.trace.cells_up_to_last_print();
        if keep < draws.len() {
            draws.truncate(keep);
            continue;
        }
        let inert = inert_cells(&run.program);
        if inert.iter().any(|&x| x) {
            draws = draws
                .iter()
                .zip(&inert)
                .filter(|(_, &dead)| !dead)
                .map(|(&d, _)| d)
                .collect();
            continue;
        }
        let cancelled = cancel_pairs(&draws);
        if cancelled.len() < draws.len() {
            draws = cancelled;
            continue;
        }
        break run;
    };

    ShortenedProgram {
        shortened_len: final_run.program.len(),
        program: final_run.program,
        original_len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{parse_program, sample_and_run};
    use crate::sampling::ProgramDistribution;
    use crate::seed;

    fn shorten_text(text: &str) -> String {
        let limits = RunLimits::default();
        let run = regenerate(&parse_program(text).unwrap(), &limits);
        shorten(&run.program, &run.trace, &limits).program.text()
    }

    #[test]
    fn cancelling_pair() {
        assert_eq!(shorten_text("+-."), ".");
    }

    #[test]
    fn tail_after_last_print() {
        assert_eq!(shorten_text("+.-"), "+.");
    }

    #[test]
    fn silent_program_becomes_empty() {
        assert_eq!(shorten_text("+++"), "");
    }

    #[test]
    fn nested_cancellation() {
        assert_eq!(shorten_text("<+->."), ".");
        assert_eq!(shorten_text("+]-."), ".");
    }

    #[test]
    fn unused_skipped_open_removed() {
        // '[' on datum 0 becomes '{' and its body is never needed.
        assert_eq!(shorten_text("[+."), "+.");
    }

    #[test]
    fn live_loop_kept() {
        let limits = RunLimits::new(1000, 5, None);
        let run = regenerate(&parse_program("+[.]").unwrap(), &limits);
        let s = shorten(&run.program, &run.trace, &limits);
        assert_eq!(s.program.text(), "+[.]");
        assert_eq!(s.shortened_len, 4);
    }

    #[test]
    fn random_programs_keep_output_and_are_idempotent() {
        let dist = ProgramDistribution::uniform(0);
        let limits = RunLimits::default();
        for s in 0..2000 {
            let run = sample_and_run(&dist, &limits, &mut seed::rng(s));
            let short = shorten(&run.program, &run.trace, &limits);
            assert!(short.shortened_len <= short.original_len);
            let rerun = regenerate(short.cells(), &limits);
            assert!(
                rerun.output.starts_with(&run.output),
                "seed {s}: {} -> {}",
                run.program.text(),
                short.program.text()
            );
            let again = shorten(&rerun.program, &rerun.trace, &limits);
            assert_eq!(again.program, short.program, "seed {s}");
        }
    }
}

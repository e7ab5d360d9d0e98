use rand::Rng;

use super::expr::ExprCounts;
use super::oracle::{solution_count, task_oracle};
use super::task::Task;
use super::vocab::{POP, PUSH};
use crate::error::{Error, Result};

pub const MIN_INPUT_LEN: usize = 1;
pub const MAX_INPUT_LEN: usize = 20;

const PLUS: u8 = 7;
const TIMES: u8 = 9;
const MAX_REJECTIONS: usize = 10_000;

/// An input and its ground-truth output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Episode {
    pub input: Vec<u8>,
    pub output: Vec<u8>,
}

/// Whether well-formed inputs of length `n` exist.
pub fn valid_length(task: Task, n: usize) -> bool {
    use Task::*;
    match task {
        ModularArithmeticSimple => n % 2 == 1,
        MissingDuplicate => n >= 2 && n % 2 == 0,
        BinaryAddition | BinaryMultiplication => n >= 3,
        ModularArithmetic | SolveEquation => n >= 1 && n <= 64,
        _ => n >= 1,
    }
}

fn uniform_string<R: Rng + ?Sized>(alphabet: &[u8], n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// Uniform stack-manipulation string: letters, then POP / PUSH-letter actions.
fn stack_input<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    // actions[m]: action strings of length m.
    let mut actions = vec![0u128; n + 1];
    actions[0] = 1;
    for m in 1..=n {
        actions[m] = actions[m - 1] + if m >= 2 { 2 * actions[m - 2] } else { 0 };
    }
    let total: u128 = (0..=n).map(|k| (1u128 << k) * actions[n - k]).sum();
    let mut i = rng.random_range(0..total);
    let mut k = 0;
    loop {
        let c = (1u128 << k) * actions[n - k];
        if i < c {
            break;
        }
        i -= c;
        k += 1;
    }
    let mut out = uniform_string(&[5, 6], k, rng);
    let mut m = n - k;
    let mut i = i % actions[m];
    while m > 0 {
        if i < actions[m - 1] {
            out.push(POP);
            m -= 1;
        } else {
            i -= actions[m - 1];
            out.push(PUSH);
            out.push(if i < actions[m - 2] { 5 } else { 6 });
            i %= actions[m - 2];
            m -= 2;
        }
    }
    out
}

fn binary_input<R: Rng + ?Sized>(op: u8, n: usize, rng: &mut R) -> Vec<u8> {
    // Every split point has the same number of strings.
    let at = rng.random_range(1..n - 1);
    let mut s = uniform_string(&[0, 1], n - 1, rng);
    s.insert(at, op);
    s
}

/// Samples a well-formed input of length `n` uniformly and solves it.
pub fn generate_episode<R: Rng + ?Sized>(task: Task, n: usize, rng: &mut R) -> Result<Episode> {
    if !valid_length(task, n) {
        return Err(Error::Config(format!("no well-formed {task} input of length {n}")));
    }
    use Task::*;
    let input = match task {
        EvenPairs | ParityCheck | ReverseString | DuplicateString | OddsFirst => uniform_string(&[5, 6], n, rng),
        CycleNavigation => uniform_string(&[0, 1, 2], n, rng),
        BucketSort => uniform_string(&[0, 1, 2, 3, 4], n, rng),
        ComputeSqrt => uniform_string(&[0, 1], n, rng),
        ModularArithmeticSimple => (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    rng.random_range(0..5)
                } else {
                    [7, 8, 9][rng.random_range(0..3)]
                }
            })
            .collect(),
        StackManipulation => stack_input(n, rng),
        MissingDuplicate => {
            let w = uniform_string(&[0, 1], n / 2, rng);
            let mut s = [w.as_slice(), w.as_slice()].concat();
            s[rng.random_range(0..n)] = 2;
            s
        }
        BinaryAddition => binary_input(PLUS, n, rng),
        BinaryMultiplication => binary_input(TIMES, n, rng),
        ModularArithmetic => {
            let c = ExprCounts::new(n, false);
            c.unrank(rng.random_range(0..c.count()))
        }
        SolveEquation => {
            // Rejection keeps the draw uniform over uniquely solvable inputs.
            let c = ExprCounts::new(n, true);
            let mut found = None;
            for _ in 0..MAX_REJECTIONS {
                let s = c.unrank(rng.random_range(0..c.count()));
                if solution_count(&s) == 1 {
                    found = Some(s);
                    break;
                }
            }
            found.ok_or_else(|| Error::Config(format!("no uniquely solvable equation of length {n} found")))?
        }
    };
    let output = task_oracle(task, &input)?;
    Ok(Episode { input, output })
}

use super::expr::{evaluate, MODULUS, X};
use super::task::Task;
use super::vocab::{boolean, POP, PUSH};
use crate::error::{Error, Result};

const A: u8 = 5;
const B: u8 = 6;
const PLUS: u8 = 7;
const TIMES: u8 = 9;

fn malformed(task: Task, reason: impl Into<String>) -> Error {
    Error::MalformedTaskInput {
        task: task.name(),
        reason: reason.into(),
    }
}

fn check_alphabet(task: Task, input: &[u8]) -> Result<()> {
    match input.iter().find(|t| !task.input_alphabet().contains(t)) {
        Some(t) => Err(malformed(task, format!("token {t} outside the input alphabet"))),
        None => Ok(()),
    }
}

/// Binary digits (MSB first) to a number.
fn from_binary(bits: &[u8]) -> u128 {
    bits.iter().fold(0, |v, &b| (v << 1) | b as u128)
}

/// MSB-first binary without leading zeros.
fn to_binary(mut v: u128) -> Vec<u8> {
    if v == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    while v > 0 {
        out.push((v & 1) as u8);
        v >>= 1;
    }
    out.reverse();
    out
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn binary_operands(task: Task, input: &[u8], op: u8) -> Result<(u128, u128)> {
    let pos = input
        .iter()
        .position(|&t| t == op)
        .ok_or_else(|| malformed(task, "missing operator"))?;
    let (a, b) = (&input[..pos], &input[pos + 1..]);
    if a.is_empty() || b.is_empty() {
        return Err(malformed(task, "empty operand"));
    }
    if b.contains(&op) {
        return Err(malformed(task, "more than one operator"));
    }
    if a.len() > 64 || b.len() > 64 {
        return Err(malformed(task, "operand longer than 64 bits"));
    }
    Ok((from_binary(a), from_binary(b)))
}

/// The unique `x` in `1, 2, 3, 4, 0` order making the expression vanish
/// modulo 5; the first one found when several do.
fn solve(task: Task, input: &[u8]) -> Result<u8> {
    if input.iter().filter(|&&t| t == X).count() != 1 {
        return Err(malformed(task, "expected exactly one x"));
    }
    for x in [1, 2, 3, 4, 0] {
        if evaluate(input, Some(x)).map_err(|e| malformed(task, e))? == 0 {
            return Ok(x as u8);
        }
    }
    Err(malformed(task, "no solution modulo 5"))
}

/// Number of `x` values in `0..5` that solve the equation.
pub fn solution_count(input: &[u8]) -> usize {
    (0..MODULUS).filter(|&x| evaluate(input, Some(x)) == Ok(0)).count()
}

/// Ground-truth output of `task` on a token-encoded input.
pub fn task_oracle(task: Task, input: &[u8]) -> Result<Vec<u8>> {
    check_alphabet(task, input)?;
    let nonempty = || {
        if input.is_empty() {
            Err(malformed(task, "empty input"))
        } else {
            Ok(())
        }
    };
    use Task::*;
    Ok(match task {
        EvenPairs => {
            nonempty()?;
            let pairs = input.windows(2).filter(|w| w[0] != w[1]).count();
            vec![boolean(pairs % 2 == 0)]
        }
        ParityCheck => vec![boolean(input.iter().filter(|&&t| t == B).count() % 2 == 0)],
        CycleNavigation => {
            nonempty()?;
            let pos = input.iter().fold(0i64, |p, &t| match t {
                1 => p + 1,
                2 => p - 1,
                _ => p,
            });
            vec![pos.rem_euclid(5) as u8]
        }
        ModularArithmeticSimple => {
            let shape_ok = input.len() % 2 == 1 && input.iter().enumerate().all(|(i, &t)| (i % 2 == 0) == (t < 5));
            if !shape_ok {
                return Err(malformed(task, "expected digits separated by operators"));
            }
            vec![evaluate(input, None).map_err(|e| malformed(task, e))? as u8]
        }
        ModularArithmetic => vec![evaluate(input, None).map_err(|e| malformed(task, e))? as u8],
        SolveEquation => vec![solve(task, input)?],
        StackManipulation => {
            let start = input.iter().position(|&t| t == POP || t == PUSH).unwrap_or(input.len());
            let mut stack = input[..start].to_vec();
            let mut i = start;
            while i < input.len() {
                match input[i] {
                    POP => {
                        stack.pop();
                        i += 1;
                    }
                    PUSH => match input.get(i + 1) {
                        Some(&s @ (A | B)) => {
                            stack.push(s);
                            i += 2;
                        }
                        _ => return Err(malformed(task, "PUSH must be followed by a or b")),
                    },
                    _ => return Err(malformed(task, "letter after the first action")),
                }
            }
            stack
        }
        ReverseString => input.iter().rev().copied().collect(),
        DuplicateString => [input, input].concat(),
        OddsFirst => input
            .iter()
            .step_by(2)
            .chain(input.iter().skip(1).step_by(2))
            .copied()
            .collect(),
        MissingDuplicate => {
            let n = input.len();
            if n == 0 || n % 2 == 1 {
                return Err(malformed(task, "expected an even, nonzero length"));
            }
            let holes: Vec<usize> = (0..n).filter(|&i| input[i] == 2).collect();
            if holes.len() != 1 {
                return Err(malformed(task, "expected exactly one missing symbol"));
            }
            let h = holes[0];
            let twin = (h + n / 2) % n;
            let (first, second) = input.split_at(n / 2);
            if (0..n / 2).any(|i| i != h % (n / 2) && first[i] != second[i]) {
                return Err(malformed(task, "halves differ"));
            }
            vec![input[twin]]
        }
        BinaryAddition => {
            let (a, b) = binary_operands(task, input, PLUS)?;
            to_binary(a + b)
        }
        BinaryMultiplication => {
            let (a, b) = binary_operands(task, input, TIMES)?;
            to_binary(a * b)
        }
        ComputeSqrt => {
            nonempty()?;
            if input.len() > 128 {
                return Err(malformed(task, "input longer than 128 bits"));
            }
            to_binary(isqrt(from_binary(input)))
        }
        BucketSort => {
            let mut v = input.to_vec();
            v.sort_unstable();
            v
        }
    })
}

#![allow(dead_code)]

use solgen::tasks::vocab::{decode, encode};
use solgen::tasks::{task_oracle, Task};

/// A published example: task, input, printed output, and the value the
/// task definition yields when the printed one is an arithmetic slip.
pub struct TableRow {
    pub task: Task,
    pub input: &'static str,
    pub printed: &'static str,
    pub defined: Option<&'static str>,
}

const fn row(task: Task, input: &'static str, printed: &'static str) -> TableRow {
    TableRow {
        task,
        input,
        printed,
        defined: None,
    }
}

/// Surface forms use `T`/`F` for True/False, `P`/`U` for POP/PUSH and `*`
/// for multiplication.
pub const TABLE: [TableRow; 15] = [
    row(Task::EvenPairs, "aabba", "T"),
    row(Task::ModularArithmeticSimple, "1+2-4", "4"),
    row(Task::ParityCheck, "aaabba", "T"),
    row(Task::CycleNavigation, "011210", "2"),
    row(Task::StackManipulation, "abbaaPUaP", "abba"),
    row(Task::ReverseString, "aabba", "abbaa"),
    row(Task::ModularArithmetic, "-(1-2)*(4-3*(-2))", "0"),
    row(Task::SolveEquation, "-(x-2)*(4-3*(-2))", "1"),
    row(Task::DuplicateString, "abaab", "abaababaab"),
    row(Task::MissingDuplicate, "10011021", "0"),
    row(Task::OddsFirst, "aaabaa", "aaaaba"),
    row(Task::BinaryAddition, "10010+101", "10111"),
    // 18 * 5 = 90
    TableRow {
        task: Task::BinaryMultiplication,
        input: "10010*101",
        printed: "1001000",
        defined: Some("1011010"),
    },
    // floor(sqrt(34)) = 5
    TableRow {
        task: Task::ComputeSqrt,
        input: "100010",
        printed: "110",
        defined: Some("101"),
    },
    row(Task::BucketSort, "421302214", "011222344"),
];

pub fn oracle_surface(task: Task, input: &str) -> String {
    decode(&task_oracle(task, &encode(input).unwrap()).unwrap()).unwrap()
}

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Regular,
    DeterministicContextFree,
    ContextSensitive,
}

impl Level {
    pub fn abbreviation(self) -> &'static str {
        match self {
            Level::Regular => "R",
            Level::DeterministicContextFree => "DCF",
            Level::ContextSensitive => "CS",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    EvenPairs,
    ModularArithmeticSimple,
    ParityCheck,
    CycleNavigation,
    StackManipulation,
    ReverseString,
    ModularArithmetic,
    SolveEquation,
    DuplicateString,
    MissingDuplicate,
    OddsFirst,
    BinaryAddition,
    BinaryMultiplication,
    ComputeSqrt,
    BucketSort,
}

impl Task {
    pub const ALL: [Task; 15] = [
        Task::EvenPairs,
        Task::ModularArithmeticSimple,
        Task::ParityCheck,
        Task::CycleNavigation,
        Task::StackManipulation,
        Task::ReverseString,
        Task::ModularArithmetic,
        Task::SolveEquation,
        Task::DuplicateString,
        Task::MissingDuplicate,
        Task::OddsFirst,
        Task::BinaryAddition,
        Task::BinaryMultiplication,
        Task::ComputeSqrt,
        Task::BucketSort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::EvenPairs => "even_pairs",
            Task::ModularArithmeticSimple => "modular_arithmetic_simple",
            Task::ParityCheck => "parity_check",
            Task::CycleNavigation => "cycle_navigation",
            Task::StackManipulation => "stack_manipulation",
            Task::ReverseString => "reverse_string",
            Task::ModularArithmetic => "modular_arithmetic",
            Task::SolveEquation => "solve_equation",
            Task::DuplicateString => "duplicate_string",
            Task::MissingDuplicate => "missing_duplicate",
            Task::OddsFirst => "odds_first",
            Task::BinaryAddition => "binary_addition",
            Task::BinaryMultiplication => "binary_multiplication",
            Task::ComputeSqrt => "compute_sqrt",
            Task::BucketSort => "bucket_sort",
        }
    }

    pub fn from_name(name: &str) -> Result<Task> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::UnknownTask(name.to_string()))
    }

    pub fn id(self) -> u8 {
        Task::ALL.iter().position(|&t| t == self).unwrap() as u8
    }

    pub fn from_id(id: u8) -> Result<Task> {
        Task::ALL
            .get(id as usize)
            .copied()
            .ok_or_else(|| Error::UnknownTask(format!("#{id}")))
    }

    pub fn level(self) -> Level {
        use Task::*;
        match self {
            EvenPairs | ModularArithmeticSimple | ParityCheck | CycleNavigation => Level::Regular,
            StackManipulation | ReverseString | ModularArithmetic | SolveEquation => Level::DeterministicContextFree,
            _ => Level::ContextSensitive,
        }
    }

    /// Token ids that may appear in inputs.
    pub fn input_alphabet(self) -> &'static [u8] {
        use Task::*;
        match self {
            EvenPairs | ParityCheck | ReverseString | DuplicateString | OddsFirst => &[5, 6],
            ModularArithmeticSimple => &[0, 1, 2, 3, 4, 7, 8, 9],
            CycleNavigation => &[0, 1, 2],
            StackManipulation => &[5, 6, 15, 16],
            ModularArithmetic => &[0, 1, 2, 3, 4, 7, 8, 9, 10, 11],
            SolveEquation => &[0, 1, 2, 3, 4, 7, 8, 9, 10, 11, 12],
            MissingDuplicate => &[0, 1, 2],
            BinaryAddition => &[0, 1, 7],
            BinaryMultiplication => &[0, 1, 9],
            ComputeSqrt => &[0, 1],
            BucketSort => &[0, 1, 2, 3, 4],
        }
    }

    /// Token ids that may appear in outputs.
    pub fn output_alphabet(self) -> &'static [u8] {
        use Task::*;
        match self {
            EvenPairs | ParityCheck => &[13, 14],
            ModularArithmeticSimple | ModularArithmetic | SolveEquation | CycleNavigation | BucketSort => {
                &[0, 1, 2, 3, 4]
            }
            StackManipulation | ReverseString | DuplicateString | OddsFirst => &[5, 6],
            MissingDuplicate | BinaryAddition | BinaryMultiplication | ComputeSqrt => &[0, 1],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in Task::ALL {
            assert_eq!(Task::from_name(t.name()).unwrap(), t);
            assert_eq!(Task::from_id(t.id()).unwrap(), t);
        }
        assert!(Task::from_name("sort").is_err());
    }

    #[test]
    fn level_sizes() {
        let count = |l| Task::ALL.iter().filter(|t| t.level() == l).count();
        assert_eq!(count(Level::Regular), 4);
        assert_eq!(count(Level::DeterministicContextFree), 4);
        assert_eq!(count(Level::ContextSensitive), 7);
    }
}

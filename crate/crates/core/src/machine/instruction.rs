use std::fmt;

use crate::error::{Error, Result};

/// One BrainPhoque instruction.
///
/// `OpenSkipped` is never drawn directly: it is an `Open` that was generated
/// while the datum was zero, so its continuation (not its body) follows it in
/// the program array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instruction {
    Left,
    Right,
    Inc,
    Dec,
    Open,
    Close,
    OpenSkipped,
    Print,
}

/// Number of instructions a program distribution draws from.
pub const SAMPLED_COUNT: usize = 7;

/// Draw order used by distributions and the Q table columns: `<>+-[].`.
pub const SAMPLED: [Instruction; SAMPLED_COUNT] = [
    Instruction::Left,
    Instruction::Right,
    Instruction::Inc,
    Instruction::Dec,
    Instruction::Open,
    Instruction::Close,
    Instruction::Print,
];

impl Instruction {
    pub fn to_char(self) -> char {
        match self {
            Instruction::Left => '<',
            Instruction::Right => '>',
            Instruction::Inc => '+',
            Instruction::Dec => '-',
            Instruction::Open => '[',
            Instruction::Close => ']',
            Instruction::OpenSkipped => '{',
            Instruction::Print => '.',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            '<' => Instruction::Left,
            '>' => Instruction::Right,
            '+' => Instruction::Inc,
            '-' => Instruction::Dec,
            '[' => Instruction::Open,
            ']' => Instruction::Close,
            '{' => Instruction::OpenSkipped,
            '.' => Instruction::Print,
            _ => return None,
        })
    }

    /// Column of this instruction in [`SAMPLED`]; `{` shares the `[` column.
    pub fn sampled_index(self) -> usize {
        match self {
            Instruction::Left => 0,
            Instruction::Right => 1,
            Instruction::Inc => 2,
            Instruction::Dec => 3,
            Instruction::Open | Instruction::OpenSkipped => 4,
            Instruction::Close => 5,
            Instruction::Print => 6,
        }
    }

    /// The instruction as it was drawn (`{` becomes `[`).
    pub fn as_drawn(self) -> Self {
        match self {
            Instruction::OpenSkipped => Instruction::Open,
            other => other,
        }
    }

    pub fn is_open(self) -> bool {
        matches!(self, Instruction::Open | Instruction::OpenSkipped)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses program text over `<>+-[]{.`.
pub fn parse_program(text: &str) -> Result<Vec<Instruction>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| Instruction::from_char(c).ok_or_else(|| Error::ProgramText(format!("unexpected character {c:?}"))))
        .collect()
}

/// Parses text over the seven sampled instructions only.
pub fn parse_sampled(text: &str) -> Result<Vec<Instruction>> {
    let cells = parse_program(text)?;
    if cells.contains(&Instruction::OpenSkipped) {
        return Err(Error::ProgramText("'{' is not a sampled instruction".to_string()));
    }
    Ok(cells)
}

pub fn program_text(cells: &[Instruction]) -> String {
    cells.iter().map(|i| i.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_sampled_symbols() {
        assert_eq!(SAMPLED.len(), 7);
        assert!(!SAMPLED.contains(&Instruction::OpenSkipped));
        for (k, ins) in SAMPLED.iter().enumerate() {
            assert_eq!(ins.sampled_index(), k);
        }
        assert_eq!(Instruction::OpenSkipped.sampled_index(), 4);
    }

    #[test]
    fn text_round_trip() {
        let text = "<>+-[]{.";
        assert_eq!(program_text(&parse_program(text).unwrap()), text);
        assert!(parse_program("+x").is_err());
        assert!(parse_sampled("{").is_err());
    }
}

use super::instruction::{program_text, Instruction};

/// Where a cell appended at the generation frontier is linked in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Attach {
    /// The new cell is the lexical successor of the previous last cell.
    #[default]
    FallThrough,
    /// The new cell starts the continuation of the `[` at this index.
    Continuation(usize),
    /// The new cell starts the body of the `{` at this index.
    Body(usize),
}

/// Result of static bracket matching on a lexical program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BracketMatch {
    /// `(open, close)` pairs, in order of the closing bracket.
    pub pairs: Vec<(usize, usize)>,
    /// Closing brackets with no opening partner; they evaluate as no-ops.
    pub skipped: Vec<usize>,
    /// Opening brackets with no closing partner.
    pub unmatched_open: Vec<usize>,
}

/// Matches brackets most-nested first: each `]` closes the latest unmatched `[`.
pub fn match_brackets(cells: &[Instruction]) -> BracketMatch {
    let mut stack = Vec::new();
    let mut out = BracketMatch::default();
    for (i, &cell) in cells.iter().enumerate() {
        match cell {
            Instruction::Open | Instruction::OpenSkipped => stack.push(i),
            Instruction::Close => match stack.pop() {
                Some(open) => out.pairs.push((open, i)),
                None => out.skipped.push(i),
            },
            _ => {}
        }
    }
    out.unmatched_open = stack;
    out
}

/// A BrainPhoque program: cells plus the jump structure needed to run them.
///
/// Generated programs store cells in the order they were first evaluated. An
/// `[` is followed by its body and records where its continuation was placed;
/// a `{` is followed by its continuation and records where its body was
/// placed. `partner` holds the symmetric open/close matching.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    cells: Vec<Instruction>,
    partner: Vec<Option<usize>>,
    branch: Vec<Option<usize>>,
    open_stack: Vec<usize>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a fixed program from lexical text (BF layout: the continuation
    /// of `[` starts after its matching `]`).
    pub fn from_lexical(cells: &[Instruction]) -> Self {
        let matching = match_brackets(cells);
        let n = cells.len();
        let mut program = Program {
            cells: cells.iter().map(|c| c.as_drawn()).collect(),
            partner: vec![None; n],
            branch: vec![None; n],
            open_stack: matching.unmatched_open.clone(),
        };
        for &(open, close) in &matching.pairs {
            program.partner[open] = Some(close);
            program.partner[close] = Some(open);
            program.branch[open] = Some(close + 1);
        }
        program
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Instruction] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> Instruction {
        self.cells[i]
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner[i]
    }

    /// Non-adjacent branch of an opening bracket, if it has been generated.
    pub fn branch(&self, i: usize) -> Option<usize> {
        self.branch[i]
    }

    pub fn open_stack(&self) -> &[usize] {
        &self.open_stack
    }

    pub fn is_skipped_close(&self, i: usize) -> bool {
        self.cells[i] == Instruction::Close && self.partner[i].is_none()
    }

    /// Cells as they were drawn; `{` is reported as `[`.
    pub fn draws(&self) -> Vec<Instruction> {
        self.cells.iter().map(|c| c.as_drawn()).collect()
    }

    pub fn text(&self) -> String {
        program_text(&self.cells)
    }

    /// Appends a freshly drawn instruction at the frontier and returns its index.
    ///
    /// `datum` is the value under the tape pointer when the cell is first
    /// evaluated, which decides between `[` and `{`.
    pub fn append(&mut self, draw: Instruction, datum: u8, attach: Attach) -> usize {
        let idx = self.cells.len();
        match attach {
            Attach::FallThrough => {}
            Attach::Continuation(open) => self.branch[open] = Some(idx),
            Attach::Body(open) => {
                self.branch[open] = Some(idx);
                self.open_stack.push(open);
            }
        }
        let mut partner = None;
        let cell = match draw.as_drawn() {
            Instruction::Open if datum == 0 => Instruction::OpenSkipped,
            Instruction::Open => {
                self.open_stack.push(idx);
                Instruction::Open
            }
            Instruction::Close => {
                if let Some(open) = self.open_stack.pop() {
                    self.partner[open] = Some(idx);
                    partner = Some(open);
                }
                Instruction::Close
            }
            other => other,
        };
        self.cells.push(cell);
        self.partner.push(partner);
        self.branch.push(None);
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::instruction::parse_sampled;

    fn m(text: &str) -> BracketMatch {
        match_brackets(&parse_sampled(text).unwrap())
    }

    #[test]
    fn simple_pair() {
        let r = m("[]");
        assert_eq!(r.pairs, vec![(0, 1)]);
        assert!(r.skipped.is_empty());
    }

    #[test]
    fn most_nested_first() {
        let r = m("[[]");
        assert_eq!(r.pairs, vec![(1, 2)]);
        assert_eq!(r.unmatched_open, vec![0]);
    }

    #[test]
    fn extra_close_is_skipped() {
        let r = m("]");
        assert!(r.pairs.is_empty());
        assert_eq!(r.skipped, vec![0]);
    }

    #[test]
    fn lexical_program_jump_table_is_symmetric() {
        let p = Program::from_lexical(&parse_sampled("+[>[-]<]]").unwrap());
        for i in 0..p.len() {
            if let Some(j) = p.partner(i) {
                assert_eq!(p.partner(j), Some(i));
            }
        }
        assert!(p.is_skipped_close(8));
        assert_eq!(p.branch(1), Some(8));
        assert_eq!(p.branch(3), Some(6));
    }

    #[test]
    fn append_rewrites_open_on_zero_datum() {
        let mut p = Program::new();
        p.append(Instruction::Open, 0, Attach::FallThrough);
        assert_eq!(p.cell(0), Instruction::OpenSkipped);
        assert!(p.open_stack().is_empty());
        p.append(Instruction::Open, 3, Attach::FallThrough);
        assert_eq!(p.cell(1), Instruction::Open);
        assert_eq!(p.open_stack(), &[1]);
        p.append(Instruction::Close, 3, Attach::FallThrough);
        assert_eq!(p.partner(2), Some(1));
        assert_eq!(p.partner(1), Some(2));
        assert!(p.open_stack().is_empty());
        p.append(Instruction::Close, 3, Attach::FallThrough);
        assert!(p.is_skipped_close(3));
    }
}

//! Expressions modulo 5 with `+ - *`, parentheses and unary minus.
//!
//! ```text
//! E -> T | E + T | E - T
//! T -> F | T * F
//! F -> digit | x | ( E ) | - F
//! ```

use super::vocab::{PUSH, TOKENS};

pub const MODULUS: i64 = 5;

const PLUS: u8 = 7;
const MINUS: u8 = 8;
const TIMES: u8 = 9;
const OPEN: u8 = 10;
const CLOSE: u8 = 11;
pub const X: u8 = 12;

fn describe(t: Option<&u8>) -> String {
    match t {
        Some(&t) if t <= PUSH => format!("unexpected {:?}", TOKENS[t as usize].1),
        Some(t) => format!("unexpected token {t}"),
        None => "unexpected end of input".into(),
    }
}

struct Parser<'a> {
    tokens: &'a [u8],
    pos: usize,
    x: Option<i64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.tokens.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<i64, String> {
        let mut v = self.term()?;
        while let Some(op @ (PLUS | MINUS)) = self.peek() {
            self.pos += 1;
            let r = self.term()?;
            v = if op == PLUS { v + r } else { v - r }.rem_euclid(MODULUS);
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<i64, String> {
        let mut v = self.factor()?;
        while self.peek() == Some(TIMES) {
            self.pos += 1;
            v = (v * self.factor()?).rem_euclid(MODULUS);
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<i64, String> {
        let t = self.peek();
        self.pos += 1;
        match t {
            Some(d @ 0..=4) => Ok(d as i64),
            Some(X) => self.x.ok_or_else(|| "unknown x".to_string()),
            Some(MINUS) => Ok((-self.factor()?).rem_euclid(MODULUS)),
            Some(OPEN) => {
                let v = self.expr()?;
                if self.peek() != Some(CLOSE) {
                    return Err(describe(self.tokens.get(self.pos)));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(describe(self.tokens.get(self.pos - 1))),
        }
    }
}

/// Value of the expression modulo 5, with `x` bound to `x` if given.
pub fn evaluate(tokens: &[u8], x: Option<i64>) -> Result<i64, String> {
    let mut p = Parser { tokens, pos: 0, x };
    let v = p.expr()?;
    if p.pos != tokens.len() {
        return Err(describe(tokens.get(p.pos)));
    }
    Ok(v)
}

/// Counts and samples strings of a fixed length from the grammar above.
///
/// The grammar is unambiguous, so uniform derivations are uniform strings.
/// `with_x` restricts to strings with exactly one `x`; otherwise `x` is not
/// a terminal.
pub struct ExprCounts {
    n: usize,
    with_x: bool,
    // [nonterminal][length][x count] for nonterminals E, T, F.
    table: [Vec<[u128; 2]>; 3],
}

const E: usize = 0;
const T: usize = 1;
const F: usize = 2;

impl ExprCounts {
    pub fn new(n: usize, with_x: bool) -> Self {
        let mut table = [
            vec![[0u128; 2]; n + 1],
            vec![[0u128; 2]; n + 1],
            vec![[0u128; 2]; n + 1],
        ];
        for len in 1..=n {
            for k in 0..2 {
                let f = if len == 1 {
                    if k == 0 {
                        5
                    } else if with_x {
                        1
                    } else {
                        0
                    }
                } else {
                    let paren = if len >= 3 { table[E][len - 2][k] } else { 0 };
                    paren + table[F][len - 1][k]
                };
                table[F][len][k] = f;
                table[T][len][k] = f + Self::split(&table, T, F, len, k, 1);
                table[E][len][k] = table[T][len][k] + 2 * Self::split(&table, E, T, len, k, 1);
            }
        }
        ExprCounts { n, with_x, table }
    }

    // Number of `A op B` strings of total length `len` with `k` x's.
    fn split(table: &[Vec<[u128; 2]>; 3], a: usize, b: usize, len: usize, k: usize, op: usize) -> u128 {
        let mut s = 0;
        for la in 1..len.saturating_sub(op) {
            let lb = len - op - la;
            for ka in 0..=k {
                s += table[a][la][ka] * table[b][lb][k - ka];
            }
        }
        s
    }

    fn k(&self) -> usize {
        usize::from(self.with_x)
    }

    pub fn count(&self) -> u128 {
        self.table[E][self.n][self.k()]
    }

    /// The `index`-th string in a fixed enumeration order.
    pub fn unrank(&self, index: u128) -> Vec<u8> {
        assert!(index < self.count());
        let mut out = Vec::with_capacity(self.n);
        self.unrank_at(E, self.n, self.k(), index, &mut out);
        out
    }

    fn unrank_at(&self, nt: usize, len: usize, k: usize, mut i: u128, out: &mut Vec<u8>) {
        let t = &self.table;
        match nt {
            F => {
                if len == 1 {
                    out.push(if k == 1 { X } else { i as u8 });
                    return;
                }
                if len >= 3 {
                    let c = t[E][len - 2][k];
                    if i < c {
                        out.push(OPEN);
                        self.unrank_at(E, len - 2, k, i, out);
                        out.push(CLOSE);
                        return;
                    }
                    i -= c;
                }
                out.push(MINUS);
                self.unrank_at(F, len - 1, k, i, out);
            }
            T | E => {
                let (sub, ops): (usize, &[u8]) = if nt == T { (F, &[TIMES]) } else { (T, &[PLUS, MINUS]) };
                let c = t[sub][len][k];
                if i < c {
                    self.unrank_at(sub, len, k, i, out);
                    return;
                }
                i -= c;
                for &op in ops {
                    for la in 1..len.saturating_sub(1) {
                        let lb = len - 1 - la;
                        for ka in 0..=k {
                            let ca = t[nt][la][ka];
                            let cb = t[sub][lb][k - ka];
                            if i < ca * cb {
                                self.unrank_at(nt, la, ka, i / cb, out);
                                out.push(op);
                                self.unrank_at(sub, lb, k - ka, i % cb, out);
                                return;
                            }
                            i -= ca * cb;
                        }
                    }
                }
                unreachable!("index beyond count");
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::vocab::encode;

    #[test]
    fn documented_expressions() {
        assert_eq!(evaluate(&encode("1+2-4").unwrap(), None), Ok(4));
        assert_eq!(evaluate(&encode("-(1-2)*(4-3*(-2))").unwrap(), None), Ok(0));
        assert_eq!(evaluate(&encode("2+3*4").unwrap(), None), Ok(4));
        assert_eq!(evaluate(&encode("--3").unwrap(), None), Ok(3));
    }

    #[test]
    fn malformed() {
        for s in ["", "1+", "(1", "1)", "12", "*1", "x"] {
            assert!(evaluate(&encode(s).unwrap(), None).is_err(), "{s}");
        }
    }

    #[test]
    fn counts_match_brute_force() {
        // Every string over the terminal set, filtered by the parser.
        let terminals: Vec<u8> = vec![0, 1, 2, 3, 4, PLUS, MINUS, TIMES, OPEN, CLOSE, X];
        for n in 1..=5 {
            let mut valid = [0u128; 2];
            let total = terminals.len().pow(n as u32);
            for mut code in 0..total {
                let s: Vec<u8> = (0..n)
                    .map(|_| {
                        let t = terminals[code % terminals.len()];
                        code /= terminals.len();
                        t
                    })
                    .collect();
                let xs = s.iter().filter(|&&t| t == X).count();
                if xs <= 1 && evaluate(&s, Some(0)).is_ok() {
                    valid[xs] += 1;
                }
            }
            assert_eq!(ExprCounts::new(n, false).count(), valid[0], "n={n}");
            assert_eq!(ExprCounts::new(n, true).count(), valid[1], "n={n}");
        }
    }

    #[test]
    fn unrank_is_a_bijection() {
        for with_x in [false, true] {
            let c = ExprCounts::new(5, with_x);
            let mut all: Vec<Vec<u8>> = (0..c.count()).map(|i| c.unrank(i)).collect();
            for s in &all {
                assert_eq!(s.len(), 5);
                assert!(evaluate(s, Some(1)).is_ok());
            }
            all.sort();
            all.dedup();
            assert_eq!(all.len() as u128, c.count());
        }
    }
}

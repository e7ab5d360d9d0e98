use crate::error::{Error, Result};

pub const VOCAB_VERSION: u32 = 1;
/// Content tokens shared by all tasks.
pub const CONTENT_TOKENS: usize = 17;
/// Content tokens plus the two delimiters.
pub const MODEL_ALPHABET: usize = 19;

pub const TRUE: u8 = 13;
pub const FALSE: u8 = 14;
pub const POP: u8 = 15;
pub const PUSH: u8 = 16;
pub const COMMA: u8 = 17;
pub const SEMICOLON: u8 = 18;

/// (id, name, surface character).
pub const TOKENS: [(u8, &str, char); MODEL_ALPHABET] = [
    (0, "0", '0'),
    (1, "1", '1'),
    (2, "2", '2'),
    (3, "3", '3'),
    (4, "4", '4'),
    (5, "a", 'a'),
    (6, "b", 'b'),
    (7, "+", '+'),
    (8, "-", '-'),
    (9, "*", '*'),
    (10, "(", '('),
    (11, ")", ')'),
    (12, "x", 'x'),
    (13, "True", 'T'),
    (14, "False", 'F'),
    (15, "POP", 'P'),
    (16, "PUSH", 'U'),
    (17, ",", ','),
    (18, ";", ';'),
];

pub fn digit(d: u8) -> u8 {
    debug_assert!(d < 5);
    d
}

pub fn letter(c: char) -> u8 {
    match c {
        'a' => 5,
        'b' => 6,
        _ => panic!("not a task letter: {c:?}"),
    }
}

pub fn boolean(v: bool) -> u8 {
    if v {
        TRUE
    } else {
        FALSE
    }
}

/// Encodes the one-character surface form, e.g. `"abbaaPUaP"`.
pub fn encode(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| {
            TOKENS
                .iter()
                .find(|t| t.2 == c)
                .map(|t| t.0)
                .ok_or_else(|| Error::Config(format!("no token for {c:?}")))
        })
        .collect()
}

pub fn decode(tokens: &[u8]) -> Result<String> {
    tokens
        .iter()
        .map(|&t| {
            TOKENS
                .get(t as usize)
                .map(|t| t.2)
                .ok_or_else(|| Error::Format(format!("token id {t} out of range")))
        })
        .collect()
}

/// The token table as shipped alongside task shards.
pub fn table_text() -> String {
    let mut s = format!("# solgen token table\nversion\t{VOCAB_VERSION}\n");
    for (id, name, surface) in TOKENS {
        s.push_str(&format!("{id}\t{name}\t{surface}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_bijective() {
        for (i, t) in TOKENS.iter().enumerate() {
            assert_eq!(t.0 as usize, i);
        }
        let mut surfaces: Vec<char> = TOKENS.iter().map(|t| t.2).collect();
        surfaces.sort();
        surfaces.dedup();
        assert_eq!(surfaces.len(), MODEL_ALPHABET);
    }

    #[test]
    fn round_trip() {
        let text = "abbaaPUaP,abba;";
        assert_eq!(decode(&encode(text).unwrap()).unwrap(), text);
        assert!(encode("c").is_err());
        assert!(decode(&[19]).is_err());
    }
}

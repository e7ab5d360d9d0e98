use rand::Rng;

use super::generate::{generate_episode, valid_length, Episode, MAX_INPUT_LEN, MIN_INPUT_LEN};
use super::task::Task;
use super::vocab::{COMMA, SEMICOLON};
use crate::error::Result;

/// Episodes of one task joined as `x1 , y1 ; x2 , y2 ; ...` and truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeRecord {
    pub task: Task,
    pub tokens: Vec<u8>,
    /// True exactly on output symbols.
    pub mask: Vec<bool>,
    pub episodes: Vec<Episode>,
}

impl EpisodeRecord {
    /// Joins episodes and truncates to `target_len`.
    pub fn from_episodes(task: Task, episodes: Vec<Episode>, target_len: usize) -> Self {
        let mut tokens = Vec::with_capacity(target_len);
        let mut mask = Vec::with_capacity(target_len);
        for e in &episodes {
            tokens.extend_from_slice(&e.input);
            mask.extend(std::iter::repeat(false).take(e.input.len()));
            tokens.push(COMMA);
            mask.push(false);
            tokens.extend_from_slice(&e.output);
            mask.extend(std::iter::repeat(true).take(e.output.len()));
            tokens.push(SEMICOLON);
            mask.push(false);
            if tokens.len() >= target_len {
                break;
            }
        }
        tokens.truncate(target_len);
        mask.truncate(target_len);
        EpisodeRecord {
            task,
            tokens,
            mask,
            episodes,
        }
    }
}

/// Samples episodes with input lengths uniform over the valid lengths in
/// `[1, 20]` until `target_len` tokens are filled.
pub fn assemble_sequence<R: Rng + ?Sized>(task: Task, target_len: usize, rng: &mut R) -> Result<EpisodeRecord> {
    let lengths: Vec<usize> = (MIN_INPUT_LEN..=MAX_INPUT_LEN)
        .filter(|&n| valid_length(task, n))
        .collect();
    let mut episodes = Vec::new();
    let mut filled = 0;
    while filled < target_len {
        let n = lengths[rng.random_range(0..lengths.len())];
        let e = generate_episode(task, n, rng)?;
        filled += e.input.len() + e.output.len() + 2;
        episodes.push(e);
    }
    Ok(EpisodeRecord::from_episodes(task, episodes, target_len))
}

/// Fraction of masked positions where the prediction equals the token.
/// A record without masked positions scores 0.
pub fn masked_accuracy(predictions: &[u8], record: &EpisodeRecord) -> f64 {
    assert_eq!(
        predictions.len(),
        record.tokens.len(),
        "predictions must align with tokens"
    );
    let (mut hits, mut total) = (0usize, 0usize);
    for ((&p, &t), &m) in predictions.iter().zip(&record.tokens).zip(&record.mask) {
        if m {
            total += 1;
            hits += usize::from(p == t);
        }
    }
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use crate::tasks::vocab::encode;

    #[test]
    fn single_reverse_episode() {
        let e = Episode {
            input: encode("aabba").unwrap(),
            output: encode("abbaa").unwrap(),
        };
        let r = EpisodeRecord::from_episodes(Task::ReverseString, vec![e], 12);
        assert_eq!(r.tokens, encode("aabba,abbaa;").unwrap());
        let expected: Vec<bool> = (0..12).map(|i| (6..11).contains(&i)).collect();
        assert_eq!(r.mask, expected);
    }

    #[test]
    fn exact_target_length() {
        let mut rng = seed::rng(21);
        for task in Task::ALL {
            let r = assemble_sequence(task, 256, &mut rng).unwrap();
            assert_eq!(r.tokens.len(), 256);
            assert_eq!(r.mask.len(), 256);
            for (t, m) in r.tokens.iter().zip(&r.mask) {
                if *t == COMMA || *t == SEMICOLON {
                    assert!(!m);
                }
            }
        }
    }

    #[test]
    fn accuracy() {
        let mut rng = seed::rng(22);
        let r = assemble_sequence(Task::ReverseString, 64, &mut rng).unwrap();
        assert_eq!(masked_accuracy(&r.tokens, &r), 1.0);
        assert_eq!(masked_accuracy(&vec![0; 64], &r), 0.0);
        let masked: Vec<usize> = (0..64).filter(|&i| r.mask[i]).collect();
        let mut half = r.tokens.clone();
        for &i in masked.iter().take(masked.len() / 2) {
            half[i] = 0;
        }
        let expect = (masked.len() - masked.len() / 2) as f64 / masked.len() as f64;
        assert_eq!(masked_accuracy(&half, &r), expect);
    }

    #[test]
    fn deterministic() {
        let a = assemble_sequence(Task::SolveEquation, 256, &mut seed::rng(5)).unwrap();
        let b = assemble_sequence(Task::SolveEquation, 256, &mut seed::rng(5)).unwrap();
        assert_eq!(a, b);
    }
}

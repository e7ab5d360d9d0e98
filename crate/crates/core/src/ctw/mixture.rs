use statrs::function::beta::ln_beta;

use crate::error::{Error, Result};
use crate::scalar::log_sum_exp;

pub const MIXTURE_MAX_DEPTH: usize = 3;
pub const MIXTURE_MAX_LEN: usize = 16;

/// Every tree of depth at most `depth` as (log prior weight, leaf contexts).
fn trees(depth: usize, max_depth: usize) -> Vec<(f64, Vec<Vec<u8>>)> {
    if depth == max_depth {
        return vec![(0.0, vec![Vec::new()])];
    }
    let half = 0.5f64.ln();
    let sub = trees(depth + 1, max_depth);
    let mut out = vec![(half, vec![Vec::new()])];
    for (w0, l0) in &sub {
        for (w1, l1) in &sub {
            let leaves = l0
                .iter()
                .map(|c| [&[0u8][..], c].concat())
                .chain(l1.iter().map(|c| [&[1u8][..], c].concat()))
                .collect();
            out.push((half + w0 + w1, leaves));
        }
    }
    out
}

fn log_kt(a: u64, b: u64) -> f64 {
    ln_beta(a as f64 + 0.5, b as f64 + 0.5) - ln_beta(0.5, 0.5)
}

/// Bayes mixture over all trees of depth at most `depth` under the
/// freeze/split prior, each tree scored by the product of its leaves' KT
/// probabilities. Returns the probability of `bits`.
pub fn brute_force_mixture(depth: usize, bits: &[u8]) -> Result<f64> {
    if depth > MIXTURE_MAX_DEPTH {
        return Err(Error::Guard {
            what: "mixture depth",
            value: depth as u64,
            limit: MIXTURE_MAX_DEPTH as u64,
        });
    }
    if bits.len() > MIXTURE_MAX_LEN {
        return Err(Error::Guard {
            what: "mixture sequence length",
            value: bits.len() as u64,
            limit: MIXTURE_MAX_LEN as u64,
        });
    }
    // Context of step t, most recent symbol first, zero padded.
    let contexts: Vec<Vec<u8>> = (0..bits.len())
        .map(|t| (1..=depth).map(|k| if t >= k { bits[t - k] } else { 0 }).collect())
        .collect();
    let terms: Vec<f64> = trees(0, depth)
        .into_iter()
        .map(|(w, leaves)| {
            w + leaves
                .iter()
                .map(|leaf| {
                    let (mut a, mut b) = (0, 0);
                    for (t, ctx) in contexts.iter().enumerate() {
                        if ctx.starts_with(leaf) {
                            if bits[t] == 0 {
                                a += 1;
                            } else {
                                b += 1;
                            }
                        }
                    }
                    log_kt(a, b)
                })
                .sum::<f64>()
        })
        .collect();
    Ok(log_sum_exp(&terms).exp())
}

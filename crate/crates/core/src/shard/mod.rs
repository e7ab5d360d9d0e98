//! Shard files: configuration, byte format, generation, verification and
//! statistics.
//!
//! Shard `i` of a set uses seed `seed::shard_seed(base_seed, i)` and its
//! record `j` uses `seed::record_seed(shard_seed, j)`, so any record can be
//! rebuilt from the config and its stored seed alone.

mod config;
mod format;
mod generate;
mod stats;
mod verify;

use std::path::Path;

pub use config::{fnv1a64, GenConfig, Generator, Source, DEFAULT_SEQ_LEN, DEFAULT_SHARD_SIZE};
pub use format::{
    decode_shard, encode_shard, ChomskyPayload, Header, Payload, Shard, ShardRecord, UtmPayload, VomsPayload,
    FORMAT_VERSION, HEADER_LEN, MAGIC,
};
pub use generate::{
    generate_record, generate_shard_records, list_shards, shard_bytes, shard_file_name, write_shards, WrittenShard,
};
pub use stats::{Histogram, Stats};
pub use verify::{verify_bytes, verify_shard, Check, VerifyReport};

use crate::ctw::SuffixTree;
use crate::error::{Error, Result};
use crate::eval::{EvalSequence, GroupKeys};

/// Reads and strictly validates a shard file.
pub fn read_shard(path: &Path) -> Result<Shard> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_shard(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

impl ShardRecord {
    pub fn to_eval(&self) -> EvalSequence {
        let (keys, shortened_len) = match &self.payload {
            Payload::Utm(p) => (
                GroupKeys {
                    program_len: Some(p.consumed_len as usize),
                    ..GroupKeys::default()
                },
                Some(p.shortened_len as usize),
            ),
            Payload::Voms(p) => (
                GroupKeys {
                    tree_depth: SuffixTree::from_preorder(&p.shape, &p.thetas, p.max_depth as usize)
                        .ok()
                        .map(|t| t.depth()),
                    ..GroupKeys::default()
                },
                None,
            ),
            Payload::Chomsky(p) => (
                GroupKeys {
                    task: Some(p.task),
                    ..GroupKeys::default()
                },
                None,
            ),
        };
        EvalSequence {
            tokens: self.tokens.clone(),
            mask: self.mask.clone(),
            truth: self.truth.clone(),
            keys,
            shortened_len,
        }
    }
}

impl Shard {
    pub fn eval_sequences(&self) -> Vec<EvalSequence> {
        self.records.iter().map(ShardRecord::to_eval).collect()
    }
}

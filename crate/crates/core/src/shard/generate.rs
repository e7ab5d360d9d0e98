use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use super::config::{GenConfig, Generator, Source};
use super::format::{encode_shard, ChomskyPayload, Payload, ShardRecord, UtmPayload, VomsPayload, FORMAT_VERSION};
use crate::ctw::{sample_sequence, sample_tree, SplitProbs};
use crate::error::{Error, Result};
use crate::machine::sample_and_run;
use crate::prior::pad_record;
use crate::sampling::shorten;
use crate::seed;
use crate::tasks::assemble_sequence;

/// Builds the record with the given seed. Depends only on the config and
/// the seed.
pub fn generate_record(cfg: &GenConfig, record_seed: u64) -> Result<ShardRecord> {
    let mut rng = seed::rng(record_seed);
    let n = cfg.seq_len;
    Ok(match &cfg.source {
        Source::Utm { pad, q, .. } => {
            let limits = cfg.limits().expect("utm limits");
            let run = sample_and_run(q, &limits, &mut rng);
            let short = shorten(&run.program, &run.trace, &limits);
            let padded = pad_record(&run.output, n, *pad);
            ShardRecord {
                seed: record_seed,
                truth: vec![1.0; n],
                tokens: padded.tokens,
                mask: padded.mask,
                payload: Payload::Utm(UtmPayload {
                    program: run.program.text(),
                    consumed_len: run.trace.consumed_len as u32,
                    output_len: run.output.len() as u32,
                    shortened_len: short.shortened_len as u32,
                    steps: run.steps,
                }),
            }
        }
        Source::Voms { depth, alpha } => {
            let tree = sample_tree(*depth, &SplitProbs::Constant(*alpha), &mut rng);
            let sample = sample_sequence(&tree, n, &mut rng);
            let (shape, thetas) = tree.to_preorder();
            ShardRecord {
                seed: record_seed,
                truth: sample.truth(),
                mask: vec![true; n],
                tokens: sample.bits,
                payload: Payload::Voms(VomsPayload {
                    max_depth: *depth as u32,
                    shape,
                    thetas,
                }),
            }
        }
        Source::Chomsky { tasks } => {
            let task = tasks[rng.random_range(0..tasks.len())];
            let rec = assemble_sequence(task, n, &mut rng)?;
            ShardRecord {
                seed: record_seed,
                truth: vec![1.0; n],
                tokens: rec.tokens,
                mask: rec.mask,
                payload: Payload::Chomsky(ChomskyPayload {
                    task,
                    episodes: rec.episodes,
                }),
            }
        }
    })
}

/// Records of shard `index`.
pub fn generate_shard_records(cfg: &GenConfig, index: usize) -> Result<Vec<ShardRecord>> {
    let start = index * cfg.shard_size;
    let end = (start + cfg.shard_size).min(cfg.count);
    let shard_seed = seed::shard_seed(cfg.base_seed, index as u64);
    (0..end.saturating_sub(start))
        .into_par_iter()
        .map(|j| generate_record(cfg, seed::record_seed(shard_seed, j as u64)))
        .collect()
}

/// Complete file bytes of shard `index`.
pub fn shard_bytes(cfg: &GenConfig, index: usize) -> Result<Vec<u8>> {
    let records = generate_shard_records(cfg, index)?;
    Ok(encode_shard(
        cfg.generator(),
        cfg.alphabet() as u32,
        &cfg.to_text(),
        cfg.digest(),
        &records,
    ))
}

pub fn shard_file_name(generator: Generator, index: usize) -> String {
    format!("{}-{index:05}.slfg", generator.name())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrittenShard {
    pub path: PathBuf,
    pub records: usize,
    pub checksum: u32,
}

fn manifest_text(cfg: &GenConfig, file: &str, bytes: &[u8], records: usize) -> String {
    let checksum = u32::from_le_bytes(bytes[40..44].try_into().unwrap());
    format!(
        "file\t{file}\nformat_version\t{FORMAT_VERSION}\ngenerator\t{}\nalphabet\t{}\nconfig_digest\t{:016x}\nrecords\t{records}\nbytes\t{}\ncrc32\t{checksum:08x}\n",
        cfg.generator().name(),
        cfg.alphabet(),
        cfg.digest(),
        bytes.len(),
    )
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Writes every shard of `cfg` into `dir`, each with a `.manifest` sidecar.
pub fn write_shards(cfg: &GenConfig, dir: &Path) -> Result<Vec<WrittenShard>> {
    cfg.validate()?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    (0..cfg.shard_count())
        .into_par_iter()
        .map(|i| {
            let bytes = shard_bytes(cfg, i)?;
            let name = shard_file_name(cfg.generator(), i);
            let path = dir.join(&name);
            let records = (cfg.count - i * cfg.shard_size).min(cfg.shard_size);
            write_atomic(&path, &bytes)?;
            write_atomic(
                &path.with_extension("manifest"),
                manifest_text(cfg, &name, &bytes, records).as_bytes(),
            )?;
            Ok(WrittenShard {
                path,
                records,
                checksum: u32::from_le_bytes(bytes[40..44].try_into().unwrap()),
            })
        })
        .collect()
}

/// Shard files in `dir`, sorted by name.
pub fn list_shards(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "slfg"))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shard::format::decode_shard;

    #[test]
    fn utm_records_are_padded() {
        let cfg = GenConfig::utm(32, 20, 1);
        for r in generate_shard_records(&cfg, 0).unwrap() {
            assert_eq!(r.tokens.len(), 32);
            let Payload::Utm(p) = &r.payload else { panic!() };
            assert_eq!(r.mask.iter().filter(|&&m| m).count(), p.output_len as usize);
            assert!(p.shortened_len <= p.consumed_len);
        }
    }

    #[test]
    fn partial_last_shard() {
        let mut cfg = GenConfig::voms(4, 16, 25, 2);
        cfg.shard_size = 10;
        assert_eq!(generate_shard_records(&cfg, 2).unwrap().len(), 5);
        let shard = decode_shard(&shard_bytes(&cfg, 2).unwrap()).unwrap();
        assert_eq!(shard.records.len(), 5);
        assert_eq!(GenConfig::from_text(&shard.config_text).unwrap(), cfg);
    }

    #[test]
    fn records_depend_only_on_seed() {
        let cfg = GenConfig::chomsky(crate::tasks::Task::ALL.to_vec(), 64, 8, 3);
        let recs = generate_shard_records(&cfg, 0).unwrap();
        for r in &recs {
            assert_eq!(&generate_record(&cfg, r.seed).unwrap(), r);
        }
    }
}

use std::fmt;
use std::path::{Path, PathBuf};

use super::config::{GenConfig, Generator};
use super::format::{read_config, read_header, read_record, Payload, ShardRecord, FORMAT_VERSION, HEADER_LEN, MAGIC};
use super::generate::generate_record;
use crate::ctw::SuffixTree;
use crate::error::{Error, Result};
use crate::machine::{parse_program, regenerate, Instruction};
use crate::prior::ABSORBER;
use crate::tasks::{task_oracle, EpisodeRecord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: std::result::Result<(), String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub path: PathBuf,
    pub records: usize,
    pub replayed: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.is_ok())
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| c.outcome.is_err())
            .map(|c| c.name)
            .collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} records, {} replayed",
            self.path.display(),
            self.records,
            self.replayed
        )?;
        for c in &self.checks {
            match &c.outcome {
                Ok(()) => writeln!(f, "  ok    {}", c.name)?,
                Err(e) => writeln!(f, "  FAIL  {}: {e}", c.name)?,
            }
        }
        Ok(())
    }
}

fn lengths_ok(r: &ShardRecord, alphabet: u32) -> std::result::Result<(), String> {
    if r.mask.len() != r.tokens.len() || r.truth.len() != r.tokens.len() {
        return Err("token, mask and truth lengths differ".into());
    }
    if let Some(t) = r.tokens.iter().find(|&&t| t as u32 >= alphabet) {
        return Err(format!("token {t} outside alphabet {alphabet}"));
    }
    if r.truth.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
        return Err("ground-truth probability outside (0, 1]".into());
    }
    Ok(())
}

/// Replays a record from its own payload and from its seed.
fn replay(cfg: &GenConfig, r: &ShardRecord) -> std::result::Result<(), String> {
    match &r.payload {
        Payload::Utm(p) => {
            let cells = parse_program(&p.program).map_err(|e| e.to_string())?;
            let draws: Vec<Instruction> = cells.iter().map(|c| c.as_drawn()).collect();
            let limits = cfg.limits().ok_or("config is not utm")?;
            let run = regenerate(&draws, &limits);
            let n = p.output_len as usize;
            if run.output.len() != n || run.output[..] != r.tokens[..n] || run.program.text() != p.program {
                return Err("program replay differs from the recorded tokens".into());
            }
            if run.steps != p.steps {
                return Err("program replay step count differs".into());
            }
        }
        Payload::Voms(p) => {
            let tree =
                SuffixTree::from_preorder(&p.shape, &p.thetas, p.max_depth as usize).map_err(|e| e.to_string())?;
            for t in 0..r.tokens.len() {
                let theta = tree.theta_after(&r.tokens[..t]);
                let mu = if r.tokens[t] == 0 { theta } else { 1.0 - theta };
                if mu != r.truth[t] {
                    return Err(format!("tree disagrees with ground truth at step {t}"));
                }
            }
        }
        Payload::Chomsky(p) => {
            for e in &p.episodes {
                if task_oracle(p.task, &e.input).map_err(|e| e.to_string())? != e.output {
                    return Err("episode output differs from the task oracle".into());
                }
            }
            let rec = EpisodeRecord::from_episodes(p.task, p.episodes.clone(), r.tokens.len());
            if rec.tokens != r.tokens || rec.mask != r.mask {
                return Err("episodes do not reassemble into the tokens".into());
            }
        }
    }
    let again = generate_record(cfg, r.seed).map_err(|e| e.to_string())?;
    if &again != r {
        return Err(format!("record with seed {:#x} does not regenerate", r.seed));
    }
    Ok(())
}

/// Checks one shard file. `replay_samples` records, evenly spaced, are
/// regenerated; 0 skips replay.
pub fn verify_bytes(path: &Path, bytes: &[u8], replay_samples: usize) -> VerifyReport {
    let mut checks = Vec::new();
    let mut push = |name, outcome| checks.push(Check { name, outcome });
    let mut report_records = 0;
    let mut replayed = 0;
    let mut r = super::format::Reader::new(bytes);
    let header = read_header(&mut r);
    let (header, magic) = match header {
        Ok(h) => h,
        Err(e) => {
            push("header", Err(e));
            return VerifyReport {
                path: path.to_path_buf(),
                records: 0,
                replayed: 0,
                checks,
            };
        }
    };
    push(
        "magic",
        if magic == MAGIC {
            Ok(())
        } else {
            Err(format!("found {magic:?}"))
        },
    );
    push(
        "version",
        if header.version == FORMAT_VERSION {
            Ok(())
        } else {
            Err(format!("version {}", header.version))
        },
    );
    let payload = &bytes[HEADER_LEN..];
    push(
        "payload_length",
        if payload.len() as u64 == header.payload_len {
            Ok(())
        } else {
            Err(format!(
                "{} bytes present, header says {}",
                payload.len(),
                header.payload_len
            ))
        },
    );
    let crc = crc32fast::hash(payload);
    push(
        "checksum",
        if crc == header.checksum {
            Ok(())
        } else {
            Err(format!("computed {crc:08x}, header {:08x}", header.checksum))
        },
    );
    let config = read_config(&mut r).and_then(|text| {
        let cfg = GenConfig::from_text(&text).map_err(|e| e.to_string())?;
        if cfg.digest() != header.config_digest {
            return Err("config digest mismatch".into());
        }
        if cfg.generator() != header.generator || cfg.alphabet() as u32 != header.alphabet {
            return Err("config disagrees with header".into());
        }
        Ok(cfg)
    });
    push("config", config.as_ref().map(|_| ()).map_err(Clone::clone));
    let mut records = Vec::new();
    let mut parse_error = None;
    while (records.len() as u64) < header.record_count && r.remaining() > 0 {
        match read_record(&mut r, header.generator) {
            Ok(rec) => records.push(rec),
            Err(e) => {
                parse_error = Some(format!("record {}: {e}", records.len()));
                break;
            }
        }
    }
    report_records = report_records.max(records.len());
    let count_ok = records.len() as u64 == header.record_count && r.remaining() == 0 && parse_error.is_none();
    push(
        "record_count",
        if count_ok {
            Ok(())
        } else {
            Err(format!(
                "header says {}, parsed {}{}{}",
                header.record_count,
                records.len(),
                parse_error.map(|e| format!(" ({e})")).unwrap_or_default(),
                if r.remaining() > 0 {
                    format!(", {} trailing bytes", r.remaining())
                } else {
                    String::new()
                },
            ))
        },
    );
    let lengths = records
        .iter()
        .enumerate()
        .try_for_each(|(i, rec)| lengths_ok(rec, header.alphabet).map_err(|e| format!("record {i}: {e}")));
    push("lengths", lengths);
    if replay_samples > 0 {
        let outcome = match &config {
            Err(_) => Err("no usable config".into()),
            Ok(cfg) => {
                let step = (records.len() / replay_samples.min(records.len()).max(1)).max(1);
                records
                    .iter()
                    .enumerate()
                    .step_by(step)
                    .take(replay_samples)
                    .try_for_each(|(i, rec)| {
                        replayed += 1;
                        replay(cfg, rec).map_err(|e| format!("record {i}: {e}"))
                    })
            }
        };
        push("replay", outcome);
    }
    if header.generator == Generator::Utm {
        // The absorber, when present, sits right after the real output.
        let pad_ok = records.iter().enumerate().try_for_each(|(i, rec)| {
            let Payload::Utm(p) = &rec.payload else {
                return Err(format!("record {i}: wrong payload kind"));
            };
            let n = p.output_len as usize;
            if n > rec.tokens.len() || rec.mask[..n].iter().any(|&m| !m) {
                return Err(format!("record {i}: real output not fully masked in"));
            }
            if header.alphabet == 18 && n < rec.tokens.len() && (rec.tokens[n] != ABSORBER || !rec.mask[n]) {
                return Err(format!("record {i}: missing trained absorber"));
            }
            Ok(())
        });
        push("padding", pad_ok);
    }
    VerifyReport {
        path: path.to_path_buf(),
        records: report_records,
        replayed,
        checks,
    }
}

pub fn verify_shard(path: &Path, replay_samples: usize) -> Result<VerifyReport> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < HEADER_LEN {
        return Ok(VerifyReport {
            path: path.to_path_buf(),
            records: 0,
            replayed: 0,
            checks: vec![Check {
                name: "header",
                outcome: Err(format!("file is {} bytes, header needs {HEADER_LEN}", bytes.len())),
            }],
        });
    }
    Ok(verify_bytes(path, &bytes, replay_samples))
}

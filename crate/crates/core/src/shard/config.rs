use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::RunLimits;
use crate::prior::PadMode;
use crate::sampling::ProgramDistribution;
use crate::tasks::{vocab, Task};

pub const DEFAULT_SHARD_SIZE: usize = 1000;
pub const DEFAULT_SEQ_LEN: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Utm = 0,
    Voms = 1,
    Chomsky = 2,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Utm => "utm",
            Generator::Voms => "voms",
            Generator::Chomsky => "chomsky",
        }
    }

    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            0 => Ok(Generator::Utm),
            1 => Ok(Generator::Voms),
            2 => Ok(Generator::Chomsky),
            _ => Err(Error::Format(format!("unknown generator id {id}"))),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "utm" => Ok(Generator::Utm),
            "voms" => Ok(Generator::Voms),
            "chomsky" => Ok(Generator::Chomsky),
            _ => Err(Error::Config(format!("unknown generator {name:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Utm {
        max_steps: u64,
        max_program_len: Option<usize>,
        pad: PadMode,
        q: ProgramDistribution,
    },
    Voms {
        depth: usize,
        alpha: f64,
    },
    Chomsky {
        tasks: Vec<Task>,
    },
}

/// Everything needed to regenerate a shard set.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub source: Source,
    /// Sequence length (the output budget for UTM records).
    pub seq_len: usize,
    pub count: usize,
    pub base_seed: u64,
    pub shard_size: usize,
}

impl GenConfig {
    pub fn utm(seq_len: usize, count: usize, base_seed: u64) -> Self {
        GenConfig {
            source: Source::Utm {
                max_steps: 1000,
                max_program_len: None,
                pad: PadMode::Normalized,
                q: ProgramDistribution::uniform(0),
            },
            seq_len,
            count,
            base_seed,
            shard_size: DEFAULT_SHARD_SIZE,
        }
    }

    pub fn voms(depth: usize, seq_len: usize, count: usize, base_seed: u64) -> Self {
        GenConfig {
            source: Source::Voms { depth, alpha: 0.5 },
            seq_len,
            count,
            base_seed,
            shard_size: DEFAULT_SHARD_SIZE,
        }
    }

    pub fn chomsky(tasks: Vec<Task>, seq_len: usize, count: usize, base_seed: u64) -> Self {
        GenConfig {
            source: Source::Chomsky { tasks },
            seq_len,
            count,
            base_seed,
            shard_size: DEFAULT_SHARD_SIZE,
        }
    }

    pub fn generator(&self) -> Generator {
        match self.source {
            Source::Utm { .. } => Generator::Utm,
            Source::Voms { .. } => Generator::Voms,
            Source::Chomsky { .. } => Generator::Chomsky,
        }
    }

    /// Model alphabet of the records.
    pub fn alphabet(&self) -> usize {
        match &self.source {
            Source::Utm {
                pad: PadMode::Unnormalized,
                ..
            } => 18,
            Source::Utm { .. } => 17,
            Source::Voms { .. } => 2,
            Source::Chomsky { .. } => vocab::MODEL_ALPHABET,
        }
    }

    pub fn limits(&self) -> Option<RunLimits> {
        match &self.source {
            Source::Utm {
                max_steps,
                max_program_len,
                ..
            } => Some(RunLimits::new(*max_steps, self.seq_len, *max_program_len)),
            _ => None,
        }
    }

    pub fn shard_count(&self) -> usize {
        self.count.div_ceil(self.shard_size)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seq_len == 0 || self.shard_size == 0 {
            return Err(Error::Config("sequence length and shard size must be positive".into()));
        }
        if self.seq_len > u32::MAX as usize {
            return Err(Error::Config("sequence length too large".into()));
        }
        match &self.source {
            Source::Utm {
                max_steps,
                max_program_len,
                ..
            } => {
                if *max_steps == 0 || *max_program_len == Some(0) {
                    return Err(Error::Config("budgets must be positive".into()));
                }
            }
            Source::Voms { alpha, .. } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::Config(format!("alpha {alpha} outside (0, 1)")));
                }
            }
            Source::Chomsky { tasks } => {
                if tasks.is_empty() {
                    return Err(Error::Config("no tasks selected".into()));
                }
            }
        }
        Ok(())
    }

    /// Canonical text form, stored in every shard.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "generator\t{}", self.generator().name()).unwrap();
        writeln!(s, "seq_len\t{}", self.seq_len).unwrap();
        writeln!(s, "count\t{}", self.count).unwrap();
        writeln!(s, "base_seed\t{}", self.base_seed).unwrap();
        writeln!(s, "shard_size\t{}", self.shard_size).unwrap();
        match &self.source {
            Source::Utm {
                max_steps,
                max_program_len,
                pad,
                q,
            } => {
                writeln!(s, "max_steps\t{max_steps}").unwrap();
                writeln!(s, "tape_len\t{}", crate::machine::TAPE_LEN).unwrap();
                let l = max_program_len.map_or("none".to_string(), |l| l.to_string());
                writeln!(s, "max_program_len\t{l}").unwrap();
                let pad = match pad {
                    PadMode::Normalized => "normalized",
                    PadMode::Unnormalized => "unnormalized",
                };
                writeln!(s, "pad\t{pad}").unwrap();
                writeln!(s, "q\t---").unwrap();
                s.push_str(&q.to_text());
            }
            Source::Voms { depth, alpha } => {
                writeln!(s, "depth\t{depth}").unwrap();
                writeln!(s, "alpha\t{alpha}").unwrap();
            }
            Source::Chomsky { tasks } => {
                let names: Vec<&str> = tasks.iter().map(|t| t.name()).collect();
                writeln!(s, "tasks\t{}", names.join(",")).unwrap();
                writeln!(s, "vocab_version\t{}", vocab::VOCAB_VERSION).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (head, q_text) = match text.split_once("q\t---\n") {
            Some((h, q)) => (h, Some(q)),
            None => (text, None),
        };
        let mut fields = std::collections::HashMap::new();
        for line in head.lines().filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::Config(format!("bad config line {line:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::Config(format!("missing {k:?}")))
        };
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("bad value {v:?} for {k:?}")))
        }
        let source = match Generator::from_name(get("generator")?)? {
            Generator::Utm => {
                let l = get("max_program_len")?;
                Source::Utm {
                    max_steps: num("max_steps", get("max_steps")?)?,
                    max_program_len: if l == "none" {
                        None
                    } else {
                        Some(num("max_program_len", l)?)
                    },
                    pad: match get("pad")? {
                        "normalized" => PadMode::Normalized,
                        "unnormalized" => PadMode::Unnormalized,
                        p => return Err(Error::Config(format!("bad pad mode {p:?}"))),
                    },
                    q: ProgramDistribution::from_text(q_text.ok_or_else(|| Error::Config("missing Q table".into()))?)?,
                }
            }
            Generator::Voms => Source::Voms {
                depth: num("depth", get("depth")?)?,
                alpha: num("alpha", get("alpha")?)?,
            },
            Generator::Chomsky => Source::Chomsky {
                tasks: get("tasks")?.split(',').map(Task::from_name).collect::<Result<_>>()?,
            },
        };
        let cfg = GenConfig {
            source,
            seq_len: num("seq_len", get("seq_len")?)?,
            count: num("count", get("count")?)?,
            base_seed: num("base_seed", get("base_seed")?)?,
            shard_size: num("shard_size", get("shard_size")?)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// FNV-1a (64-bit) of the canonical text.
    pub fn digest(&self) -> u64 {
        fnv1a64(self.to_text().as_bytes())
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

//! Byte layout of shard files. All integers are little-endian.

use super::config::Generator;
use crate::tasks::{Episode, Task};

pub const MAGIC: [u8; 4] = *b"SLFG";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 44;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub version: u32,
    pub generator: Generator,
    pub alphabet: u32,
    pub config_digest: u64,
    pub record_count: u64,
    pub payload_len: u64,
    pub checksum: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UtmPayload {
    /// Generated cells in evaluation order, `{` for skipped opens.
    pub program: String,
    pub consumed_len: u32,
    /// Length of the real output before padding.
    pub output_len: u32,
    pub shortened_len: u32,
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VomsPayload {
    pub max_depth: u32,
    /// Preorder node flags, true for split nodes.
    pub shape: Vec<bool>,
    /// Leaf probabilities of 0 in preorder.
    pub thetas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChomskyPayload {
    pub task: Task,
    pub episodes: Vec<Episode>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Utm(UtmPayload),
    Voms(VomsPayload),
    Chomsky(ChomskyPayload),
}

impl Payload {
    pub fn generator(&self) -> Generator {
        match self {
            Payload::Utm(_) => Generator::Utm,
            Payload::Voms(_) => Generator::Voms,
            Payload::Chomsky(_) => Generator::Chomsky,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShardRecord {
    pub seed: u64,
    pub tokens: Vec<u8>,
    pub mask: Vec<bool>,
    /// Probability the source gave each realized token.
    pub truth: Vec<f64>,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shard {
    pub header: Header,
    pub config_text: String,
    pub records: Vec<ShardRecord>,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn len_bytes(&mut self, b: &[u8]) {
        self.u32(b.len() as u32);
        self.0.extend_from_slice(b);
    }
}

fn write_record(w: &mut Writer, r: &ShardRecord) {
    w.u64(r.seed);
    w.u32(r.tokens.len() as u32);
    w.0.extend_from_slice(&r.tokens);
    w.0.extend(r.mask.iter().map(|&m| u8::from(m)));
    for &t in &r.truth {
        w.f64(t);
    }
    match &r.payload {
        Payload::Utm(p) => {
            w.len_bytes(p.program.as_bytes());
            w.u32(p.consumed_len);
            w.u32(p.output_len);
            w.u32(p.shortened_len);
            w.u64(p.steps);
        }
        Payload::Voms(p) => {
            w.u32(p.max_depth);
            w.u32(p.shape.len() as u32);
            w.0.extend(p.shape.iter().map(|&s| u8::from(s)));
            w.u32(p.thetas.len() as u32);
            for &t in &p.thetas {
                w.f64(t);
            }
        }
        Payload::Chomsky(p) => {
            w.u8(p.task.id());
            w.u32(p.episodes.len() as u32);
            for e in &p.episodes {
                w.len_bytes(&e.input);
                w.len_bytes(&e.output);
            }
        }
    }
}

/// Serializes a complete shard file.
pub fn encode_shard(
    generator: Generator,
    alphabet: u32,
    config_text: &str,
    config_digest: u64,
    records: &[ShardRecord],
) -> Vec<u8> {
    let mut payload = Writer(Vec::new());
    payload.len_bytes(config_text.as_bytes());
    for r in records {
        debug_assert_eq!(r.payload.generator(), generator);
        write_record(&mut payload, r);
    }
    let mut w = Writer(Vec::with_capacity(HEADER_LEN + payload.0.len()));
    w.0.extend_from_slice(&MAGIC);
    w.u32(FORMAT_VERSION);
    w.u32(generator as u32);
    w.u32(alphabet);
    w.u64(config_digest);
    w.u64(records.len() as u64);
    w.u64(payload.0.len() as u64);
    w.u32(crc32fast::hash(&payload.0));
    w.0.extend_from_slice(&payload.0);
    w.0
}

/// Bounds-checked little-endian reader.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pub pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn bytes(&mut self, n: usize) -> Result<&'a [u8], String> {
        if self.remaining() < n {
            return Err(format!(
                "need {n} bytes at offset {}, {} left",
                self.pos,
                self.remaining()
            ));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8, String> {
        Ok(self.bytes(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, String> {
        Ok(u32::from_le_bytes(self.bytes(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, String> {
        Ok(u64::from_le_bytes(self.bytes(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64, String> {
        Ok(f64::from_le_bytes(self.bytes(8)?.try_into().unwrap()))
    }

    fn len_bytes(&mut self) -> Result<&'a [u8], String> {
        let n = self.u32()? as usize;
        self.bytes(n)
    }

    fn flags(&mut self, n: usize) -> Result<Vec<bool>, String> {
        self.bytes(n)?
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(format!("flag byte {b} is neither 0 nor 1")),
            })
            .collect()
    }
}

pub(crate) fn read_header(r: &mut Reader) -> Result<(Header, [u8; 4]), String> {
    let magic: [u8; 4] = r.bytes(4)?.try_into().unwrap();
    let version = r.u32()?;
    let generator = Generator::from_id(r.u32()?).map_err(|e| e.to_string())?;
    Ok((
        Header {
            version,
            generator,
            alphabet: r.u32()?,
            config_digest: r.u64()?,
            record_count: r.u64()?,
            payload_len: r.u64()?,
            checksum: r.u32()?,
        },
        magic,
    ))
}

pub(crate) fn read_config(r: &mut Reader) -> Result<String, String> {
    String::from_utf8(r.len_bytes()?.to_vec()).map_err(|_| "config block is not UTF-8".to_string())
}

pub(crate) fn read_record(r: &mut Reader, generator: Generator) -> Result<ShardRecord, String> {
    let seed = r.u64()?;
    let n = r.u32()? as usize;
    let tokens = r.bytes(n)?.to_vec();
    let mask = r.flags(n)?;
    let truth = (0..n).map(|_| r.f64()).collect::<Result<_, _>>()?;
    let payload = match generator {
        Generator::Utm => Payload::Utm(UtmPayload {
            program: String::from_utf8(r.len_bytes()?.to_vec()).map_err(|_| "program text is not UTF-8")?,
            consumed_len: r.u32()?,
            output_len: r.u32()?,
            shortened_len: r.u32()?,
            steps: r.u64()?,
        }),
        Generator::Voms => {
            let max_depth = r.u32()?;
            let nodes = r.u32()? as usize;
            let shape = r.flags(nodes)?;
            let leaves = r.u32()? as usize;
            let thetas = (0..leaves).map(|_| r.f64()).collect::<Result<_, _>>()?;
            Payload::Voms(VomsPayload {
                max_depth,
                shape,
                thetas,
            })
        }
        Generator::Chomsky => {
            let task = Task::from_id(r.u8()?).map_err(|e| e.to_string())?;
            let count = r.u32()? as usize;
            let mut episodes = Vec::with_capacity(count.min(1 << 16));
            for _ in 0..count {
                let input = r.len_bytes()?.to_vec();
                let output = r.len_bytes()?.to_vec();
                episodes.push(Episode { input, output });
            }
            Payload::Chomsky(ChomskyPayload { task, episodes })
        }
    };
    Ok(ShardRecord {
        seed,
        tokens,
        mask,
        truth,
        payload,
    })
}

/// Strict parse: any inconsistency is an error.
pub fn decode_shard(bytes: &[u8]) -> Result<Shard, String> {
    let mut r = Reader::new(bytes);
    let (header, magic) = read_header(&mut r)?;
    if magic != MAGIC {
        return Err(format!("bad magic {magic:?}"));
    }
    if header.version != FORMAT_VERSION {
        return Err(format!("unsupported format version {}", header.version));
    }
    if r.remaining() as u64 != header.payload_len {
        return Err(format!(
            "payload is {} bytes, header says {}",
            r.remaining(),
            header.payload_len
        ));
    }
    if crc32fast::hash(&bytes[HEADER_LEN..]) != header.checksum {
        return Err("checksum mismatch".into());
    }
    let config_text = read_config(&mut r)?;
    let mut records = Vec::new();
    for i in 0..header.record_count {
        records.push(read_record(&mut r, header.generator).map_err(|e| format!("record {i}: {e}"))?);
    }
    if r.remaining() != 0 {
        return Err(format!("{} trailing bytes", r.remaining()));
    }
    Ok(Shard {
        header,
        config_text,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_records() -> Vec<ShardRecord> {
        vec![
            ShardRecord {
                seed: 1,
                tokens: vec![0, 1],
                mask: vec![true, true],
                truth: vec![0.25, 0.5],
                payload: Payload::Voms(VomsPayload {
                    max_depth: 2,
                    shape: vec![true, false, false],
                    thetas: vec![0.25, 0.5],
                }),
            },
            ShardRecord {
                seed: u64::MAX,
                tokens: vec![],
                mask: vec![],
                truth: vec![],
                payload: Payload::Voms(VomsPayload {
                    max_depth: 0,
                    shape: vec![false],
                    thetas: vec![1.0],
                }),
            },
        ]
    }

    #[test]
    fn header_layout() {
        let bytes = encode_shard(Generator::Voms, 2, "x", 0xabcd, &sample_records());
        assert_eq!(&bytes[..4], b"SLFG");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 0xabcd);
        assert_eq!(u64::from_le_bytes(bytes[24..32].try_into().unwrap()), 2);
        assert_eq!(
            u64::from_le_bytes(bytes[32..40].try_into().unwrap()) as usize,
            bytes.len() - HEADER_LEN
        );
        assert_eq!(
            u32::from_le_bytes(bytes[40..44].try_into().unwrap()),
            crc32fast::hash(&bytes[44..])
        );
        // Config block follows the header.
        assert_eq!(&bytes[44..49], &[1, 0, 0, 0, b'x']);
    }

    #[test]
    fn round_trip() {
        let records = sample_records();
        let bytes = encode_shard(Generator::Voms, 2, "cfg", 9, &records);
        let shard = decode_shard(&bytes).unwrap();
        assert_eq!(shard.records, records);
        assert_eq!(shard.config_text, "cfg");
        assert_eq!(shard.header.record_count, 2);
    }

    #[test]
    fn corruption_detected() {
        let bytes = encode_shard(Generator::Voms, 2, "cfg", 9, &sample_records());
        let mut flipped = bytes.clone();
        *flipped.last_mut().unwrap() ^= 1;
        assert!(decode_shard(&flipped).unwrap_err().contains("checksum"));
        assert!(decode_shard(&bytes[..bytes.len() - 3]).is_err());
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert!(decode_shard(&magic).unwrap_err().contains("magic"));
    }
}

//! Parses shards by hand following docs/shard_format.md.

use std::collections::HashMap;

use solgen::machine::{parse_program, regenerate};
use solgen::prior::PadMode;
use solgen::shard::{
    decode_shard, encode_shard, fnv1a64, shard_bytes, verify_bytes, write_shards, GenConfig, Generator, Payload, Source,
};
use solgen::tasks::Task;

struct Cursor<'a>(&'a [u8], usize);

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> &[u8] {
        let s = &self.0[self.1..self.1 + n];
        self.1 += n;
        s
    }
    fn u8(&mut self) -> u8 {
        self.take(1)[0]
    }
    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take(4).try_into().unwrap())
    }
    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take(8).try_into().unwrap())
    }
    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take(8).try_into().unwrap())
    }
}

/// Bitwise CRC-32 (reflected, polynomial 0xEDB88320).
fn crc32(bytes: &[u8]) -> u32 {
    let mut c = 0xffff_ffffu32;
    for &b in bytes {
        c ^= b as u32;
        for _ in 0..8 {
            c = if c & 1 == 1 { (c >> 1) ^ 0xedb8_8320 } else { c >> 1 };
        }
    }
    !c
}

struct Parsed {
    generator: u32,
    alphabet: u32,
    records: Vec<(u64, Vec<u8>, Vec<u8>, Vec<f64>)>,
    config: String,
    digest: u64,
}

fn parse(bytes: &[u8]) -> Parsed {
    let mut c = Cursor(bytes, 0);
    assert_eq!(c.take(4), b"SLFG");
    assert_eq!(c.u32(), 1);
    let generator = c.u32();
    let alphabet = c.u32();
    let digest = c.u64();
    let count = c.u64();
    let payload_len = c.u64();
    let crc = c.u32();
    assert_eq!(c.1, 44);
    assert_eq!(payload_len as usize, bytes.len() - 44);
    assert_eq!(crc, crc32(&bytes[44..]));
    let clen = c.u32() as usize;
    let config = String::from_utf8(c.take(clen).to_vec()).unwrap();
    let mut records = Vec::new();
    for _ in 0..count {
        let seed = c.u64();
        let n = c.u32() as usize;
        let tokens = c.take(n).to_vec();
        let mask = c.take(n).to_vec();
        assert!(mask.iter().all(|&m| m <= 1));
        let truth: Vec<f64> = (0..n).map(|_| c.f64()).collect();
        match generator {
            0 => {
                let p = c.u32() as usize;
                let text = c.take(p).to_vec();
                assert!(text.iter().all(|b| b"<>+-[]{.".contains(b)));
                let consumed = c.u32();
                assert_eq!(consumed as usize, p);
                let _output_len = c.u32();
                let shortened = c.u32();
                assert!(shortened <= consumed);
                let _steps = c.u64();
            }
            1 => {
                let _depth = c.u32();
                let m = c.u32() as usize;
                let splits = c.take(m).iter().filter(|&&f| f == 1).count();
                let k = c.u32() as usize;
                assert_eq!(k, splits + 1);
                for _ in 0..k {
                    let theta = c.f64();
                    assert!((0.0..=1.0).contains(&theta));
                }
            }
            2 => {
                assert!(c.u8() < 15);
                for _ in 0..c.u32() {
                    let a = c.u32() as usize;
                    c.take(a);
                    let b = c.u32() as usize;
                    c.take(b);
                }
            }
            g => panic!("generator {g}"),
        }
        records.push((seed, tokens, mask, truth));
    }
    assert_eq!(c.1, bytes.len());
    Parsed {
        generator,
        alphabet,
        records,
        config,
        digest,
    }
}

fn configs() -> Vec<GenConfig> {
    let mut unnormalized = GenConfig::utm(24, 7, 3);
    if let Source::Utm { pad, .. } = &mut unnormalized.source {
        *pad = PadMode::Unnormalized;
    }
    vec![
        GenConfig::utm(24, 7, 3),
        unnormalized,
        GenConfig::voms(24, 40, 6, 1),
        GenConfig::chomsky(Task::ALL.to_vec(), 64, 9, 2),
    ]
}

#[test]
fn documented_layout_matches_written_bytes() {
    for cfg in configs() {
        let bytes = shard_bytes(&cfg, 0).unwrap();
        let p = parse(&bytes);
        assert_eq!(p.generator, cfg.generator() as u32);
        assert_eq!(p.alphabet as usize, cfg.alphabet());
        assert_eq!(p.config, cfg.to_text());
        assert_eq!(p.digest, fnv1a64(p.config.as_bytes()));
        assert_eq!(p.records.len(), cfg.count);
        for (_, tokens, mask, truth) in &p.records {
            assert_eq!(tokens.len(), cfg.seq_len);
            assert!(tokens.iter().all(|&t| (t as u32) < p.alphabet));
            assert_eq!(mask.len(), truth.len());
        }
        let decoded = decode_shard(&bytes).unwrap();
        for (r, (seed, tokens, _, truth)) in decoded.records.iter().zip(&p.records) {
            assert_eq!((r.seed, &r.tokens, &r.truth), (*seed, tokens, truth));
        }
    }
}

#[test]
fn crate_checksum_is_standard_crc32() {
    assert_eq!(crc32(b"123456789"), 0xcbf4_3926);
    let bytes = shard_bytes(&GenConfig::voms(3, 8, 2, 0), 0).unwrap();
    assert_eq!(
        u32::from_le_bytes(bytes[40..44].try_into().unwrap()),
        crc32(&bytes[44..])
    );
}

#[test]
fn utm_padding_and_mask() {
    for cfg in &configs()[..2] {
        let shard = decode_shard(&shard_bytes(cfg, 0).unwrap()).unwrap();
        let unnormalized = cfg.alphabet() == 18;
        for r in &shard.records {
            let Payload::Utm(p) = &r.payload else { panic!() };
            let out = p.output_len as usize;
            let scored = r.mask.iter().filter(|&&m| m).count();
            let expected = if unnormalized && out < r.tokens.len() {
                out + 1
            } else {
                out
            };
            assert_eq!(scored, expected);
            if unnormalized {
                assert!(r.tokens[out..].iter().all(|&t| t == 17));
            }
            let run = regenerate(&parse_program(&p.program).unwrap(), &cfg.limits().unwrap());
            assert_eq!(&r.tokens[..out], &run.output[..]);
            assert_eq!(run.steps, p.steps);
        }
    }
}

#[test]
fn chomsky_mask_selects_outputs() {
    let cfg = GenConfig::chomsky(vec![Task::ReverseString], 40, 5, 4);
    let shard = decode_shard(&shard_bytes(&cfg, 0).unwrap()).unwrap();
    for r in &shard.records {
        let Payload::Chomsky(p) = &r.payload else { panic!() };
        let mut tokens = Vec::new();
        let mut mask = Vec::new();
        for e in &p.episodes {
            tokens.extend(&e.input);
            tokens.push(17);
            tokens.extend(&e.output);
            tokens.push(18);
            mask.extend(e.input.iter().map(|_| 0));
            mask.push(0);
            mask.extend(e.output.iter().map(|_| 1));
            mask.push(0);
        }
        assert_eq!(&tokens[..40], &r.tokens[..]);
        let m: Vec<u8> = r.mask.iter().map(|&b| u8::from(b)).collect();
        assert_eq!(&mask[..40], &m[..]);
    }
}

#[test]
fn manifest_sidecar_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = GenConfig::voms(4, 16, 5, 0);
    let written = write_shards(&cfg, dir.path()).unwrap();
    let path = &written[0].path;
    assert_eq!(path.file_name().unwrap(), "voms-00000.slfg");
    let bytes = std::fs::read(path).unwrap();
    let text = std::fs::read_to_string(path.with_extension("manifest")).unwrap();
    let fields: HashMap<&str, &str> = text.lines().filter_map(|l| l.split_once('\t')).collect();
    assert_eq!(fields["file"], "voms-00000.slfg");
    assert_eq!(fields["format_version"], "1");
    assert_eq!(fields["generator"], "voms");
    assert_eq!(fields["alphabet"], "2");
    assert_eq!(fields["records"], "5");
    assert_eq!(fields["bytes"], bytes.len().to_string());
    assert_eq!(fields["config_digest"], format!("{:016x}", cfg.digest()));
    assert_eq!(fields["crc32"], format!("{:08x}", crc32(&bytes[44..])));
}

#[test]
fn config_text_round_trips() {
    for cfg in configs() {
        let back = GenConfig::from_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.digest(), cfg.digest());
    }
    assert!(GenConfig::from_text("generator\tnope\n").is_err());
}

#[test]
fn strict_decoding_rejects_damage() {
    let bytes = shard_bytes(&GenConfig::voms(4, 16, 3, 0), 0).unwrap();
    assert!(decode_shard(&bytes[..bytes.len() - 1]).is_err());
    let mut extra = bytes.clone();
    extra.push(0);
    assert!(decode_shard(&extra).is_err());
    let mut version = bytes.clone();
    version[4] = 2;
    assert!(decode_shard(&version).unwrap_err().contains("version"));
    let mut generator = bytes.clone();
    generator[8] = 9;
    assert!(decode_shard(&generator).is_err());
}

#[test]
fn verification_names_each_failure() {
    let cfg = GenConfig::utm(16, 6, 0);
    let good = shard_bytes(&cfg, 0).unwrap();
    let path = std::path::Path::new("x.slfg");
    let report = verify_bytes(path, &good, 6);
    assert!(report.passed(), "{report}");

    let mut flipped = good.clone();
    let k = flipped.len() - 3;
    flipped[k] ^= 0xff;
    assert!(verify_bytes(path, &flipped, 6).failed().contains(&"checksum"));

    let truncated = &good[..good.len() - 20];
    let failed = verify_bytes(path, truncated, 6).failed();
    assert!(failed.contains(&"record_count"), "{failed:?}");

    // a record that no longer replays: rewrite one token and fix the checksum
    let shard = decode_shard(&good).unwrap();
    let mut records = shard.records.clone();
    let i = records
        .iter()
        .position(|r| matches!(&r.payload, Payload::Utm(p) if p.output_len > 0))
        .expect("a record with output");
    records[i].tokens[0] = (records[i].tokens[0] + 1) % 17;
    let forged = encode_shard(
        Generator::Utm,
        17,
        &shard.config_text,
        shard.header.config_digest,
        &records,
    );
    assert!(verify_bytes(path, &forged, 6).failed().contains(&"replay"));

    let wrong_digest = encode_shard(Generator::Utm, 17, &shard.config_text, 1, &shard.records);
    assert!(verify_bytes(path, &wrong_digest, 6).failed().contains(&"config"));
}

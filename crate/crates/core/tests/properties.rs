use proptest::prelude::*;
use solgen::machine::{parse_sampled, regenerate, run_program, Instruction, RunLimits, SAMPLED};
use solgen::prior::PrefixCounts;
use solgen::sampling::shorten;
use solgen::shard::{decode_shard, encode_shard, ChomskyPayload, Generator, Payload, ShardRecord, VomsPayload};
use solgen::tasks::vocab::{decode, encode};
use solgen::tasks::{Episode, Task};
use solgen::Ctw;

fn program() -> impl Strategy<Value = Vec<Instruction>> {
    prop::collection::vec((0..7usize).prop_map(|i| SAMPLED[i]), 0..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fixed_runs_are_prefix_consistent(p in program(), s in 1u64..300, k in 1u64..300) {
        let a = run_program(&p, &RunLimits::new(s, 64, None));
        let b = run_program(&p, &RunLimits::new(s + k, 64, None));
        prop_assert!(b.output.starts_with(&a.output));
        prop_assert!(a.steps <= s);
    }

    #[test]
    fn generated_runs_respect_budgets(p in program(), s in 1u64..500, n in 1usize..32) {
        let limits = RunLimits::new(s, n, None);
        let run = regenerate(&p, &limits);
        prop_assert!(run.steps <= s);
        prop_assert!(run.output.len() <= n);
        prop_assert!(run.output.iter().all(|&v| v < 17));
        prop_assert!(run.program.len() <= p.len());
    }

    #[test]
    fn shortening_keeps_the_output(p in program()) {
        let limits = RunLimits::new(500, 32, None);
        let run = regenerate(&p, &limits);
        let s = shorten(&run.program, &run.trace, &limits);
        let rerun = regenerate(&s.program.draws(), &limits);
        prop_assert!(rerun.output.starts_with(&run.output));
        prop_assert!(s.shortened_len <= s.original_len);
        let again = shorten(&rerun.program, &rerun.trace, &limits);
        prop_assert_eq!(again.program, s.program);
    }

    #[test]
    fn text_round_trip(p in program()) {
        let text: String = p.iter().map(|c| c.to_char()).collect();
        prop_assert_eq!(parse_sampled(&text).unwrap(), p);
    }

    #[test]
    fn ctw_is_a_measure(bits in prop::collection::vec(0u8..2, 0..64), depth in 0usize..12) {
        let mut s = Ctw::new(depth);
        let mut log_p = 0.0;
        for &b in &bits {
            let p = s.predict();
            prop_assert!((p[0] + p[1] - 1.0).abs() <= 1e-12);
            log_p += s.update(b).ln();
        }
        prop_assert!((s.log_prob() - log_p).abs() <= 1e-9 * (1.0 + log_p.abs()));
    }

    #[test]
    fn prefix_counts_are_superadditive(records in prop::collection::vec(prop::collection::vec(0u8..4, 0..6), 1..30)) {
        let c = PrefixCounts::build(&records);
        prop_assert_eq!(c.total(), records.len() as u64);
        for (x, n) in c.prefixes() {
            let children: u64 = (0..4u8).map(|a| c.count(&[x, &[a]].concat())).sum();
            prop_assert!(children <= n);
        }
    }

    #[test]
    fn shards_round_trip(
        seqs in prop::collection::vec((any::<u64>(), prop::collection::vec(0u8..2, 0..20)), 0..6),
        theta in 0.0f64..=1.0,
    ) {
        let records: Vec<ShardRecord> = seqs
            .into_iter()
            .map(|(seed, bits)| ShardRecord {
                seed,
                mask: bits.iter().map(|&b| b == 1).collect(),
                truth: bits.iter().map(|_| theta).collect(),
                tokens: bits,
                payload: Payload::Voms(VomsPayload { max_depth: 1, shape: vec![true, false, false], thetas: vec![theta, 1.0 - theta] }),
            })
            .collect();
        let bytes = encode_shard(Generator::Voms, 2, "cfg", 7, &records);
        prop_assert_eq!(decode_shard(&bytes).unwrap().records, records);
    }

    #[test]
    fn chomsky_records_round_trip(input in prop::collection::vec(5u8..7, 1..10), task in 0u8..15) {
        let task = Task::from_id(task).unwrap();
        let record = ShardRecord {
            seed: 1,
            tokens: input.clone(),
            mask: vec![false; input.len()],
            truth: vec![1.0; input.len()],
            payload: Payload::Chomsky(ChomskyPayload { task, episodes: vec![Episode { input: input.clone(), output: input.clone() }] }),
        };
        let bytes = encode_shard(Generator::Chomsky, 19, "", 0, std::slice::from_ref(&record));
        prop_assert_eq!(&decode_shard(&bytes).unwrap().records[0], &record);
    }

    #[test]
    fn vocabulary_is_invertible(tokens in prop::collection::vec(0u8..19, 0..40)) {
        prop_assert_eq!(encode(&decode(&tokens).unwrap()).unwrap(), tokens);
    }
}

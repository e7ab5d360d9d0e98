use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use solgen::eval::{baseline, evaluate_sequences, Baseline, EvalSequence, Predictor};
use solgen::machine::{parse_program, regenerate, Instruction, RunLimits};
use solgen::prior::{enumerate_prior_with_guard, OracleConfig, PadMode, DEFAULT_LENGTH_GUARD};
use solgen::sampling::{shorten, solomonoff_upper_bound, train_q, InterestFilter, ProgramDistribution};
use solgen::shard::{list_shards, read_shard, verify_shard, write_shards, GenConfig, Shard, Source, Stats};
use solgen::tasks::{vocab, Task};

/// Worker threads; defaults to all cores.
const WORKERS_ENV: &str = "SOLGEN_WORKERS";

#[derive(Parser)]
#[command(name = "solgen", version, about = "Universal sequence prediction data and baselines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample BrainPhoque programs and write their outputs as shards.
    GenerateUtm(UtmArgs),
    /// Sample variable-order Markov sources and write shards.
    GenerateVoms(VomsArgs),
    /// Write episodic sequences of the algorithmic tasks.
    GenerateChomsky(ChomskyArgs),
    /// Score a baseline on a directory of shards.
    Eval(EvalArgs),
    /// Enumerate the budgeted prior exactly.
    Oracle(OracleArgs),
    /// Fit a Markov program distribution to interesting programs.
    TrainQ(TrainQArgs),
    /// Shorten one generated program.
    Shorten(ShortenArgs),
    /// Histograms over shards or freshly sampled programs.
    Stats(StatsArgs),
    /// Validate shard files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 256)]
    len: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = solgen::shard::DEFAULT_SHARD_SIZE)]
    shard_size: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pad {
    Normalized,
    Unnormalized,
}

#[derive(Args)]
struct UtmArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long)]
    max_program_len: Option<usize>,
    #[arg(long, value_enum, default_value = "normalized")]
    pad: Pad,
    /// Q table file; uniform when absent.
    #[arg(long)]
    q: Option<PathBuf>,
}

#[derive(Args)]
struct VomsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 24)]
    depth: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Args)]
struct ChomskyArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated task names, or `all`.
    #[arg(long, default_value = "all")]
    tasks: String,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    shards: PathBuf,
    /// uniform, ctw(D), kt(D) or solomonoff_ub.
    #[arg(long)]
    baseline: String,
    #[arg(long)]
    bits: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    steps: u64,
    #[arg(long)]
    max_program_len: usize,
    #[arg(long, default_value_t = 8)]
    max_output: usize,
    #[arg(long, default_value_t = DEFAULT_LENGTH_GUARD)]
    guard: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainQArgs {
    #[arg(long, default_value_t = 1_000_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    order: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 256)]
    len: usize,
    #[arg(long, default_value_t = 10)]
    min_len: usize,
    #[arg(long, default_value_t = 16)]
    max_period: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ShortenArgs {
    /// Program in generation order; `{` is read as `[`.
    program: String,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 256)]
    len: usize,
}

#[derive(Args)]
struct StatsArgs {
    /// Shard directory; when absent, programs are sampled directly.
    #[arg(long)]
    shards: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    q: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 256)]
    len: usize,
    #[arg(long, default_value_t = 10)]
    min_len: usize,
    #[arg(long, default_value_t = 16)]
    max_period: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Shard files or directories.
    paths: Vec<PathBuf>,
    /// Records replayed per shard.
    #[arg(long, default_value_t = 16)]
    replay: usize,
}

fn read_q(path: Option<&Path>) -> Result<ProgramDistribution> {
    match path {
        None => Ok(ProgramDistribution::uniform(0)),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(ProgramDistribution::from_text(&text)?)
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config(common: &Common, source: Source) -> GenConfig {
    GenConfig {
        source,
        seq_len: common.len,
        count: common.count,
        base_seed: common.seed,
        shard_size: common.shard_size,
    }
}

fn generate(cfg: GenConfig, out: &Path) -> Result<()> {
    let written = write_shards(&cfg, out)?;
    let records: usize = written.iter().map(|w| w.records).sum();
    println!("wrote {} shards, {records} records to {}", written.len(), out.display());
    Ok(())
}

fn load_shards(dir: &Path) -> Result<Vec<Shard>> {
    let paths = if dir.is_dir() {
        list_shards(dir)?
    } else {
        vec![dir.to_path_buf()]
    };
    paths.iter().map(|p| Ok(read_shard(p)?)).collect()
}

fn eval(args: &EvalArgs) -> Result<()> {
    let shards = load_shards(&args.shards)?;
    let alphabet = match shards.first() {
        Some(s) => s.header.alphabet as usize,
        None => bail!("no shards in {}", args.shards.display()),
    };
    if let Some(s) = shards.iter().find(|s| s.header.alphabet as usize != alphabet) {
        bail!("shards mix alphabets {alphabet} and {}", s.header.alphabet);
    }
    let sequences: Vec<EvalSequence> = shards.iter().flat_map(Shard::eval_sequences).collect();
    let which = baseline(&args.baseline)?;
    let text = if which == Baseline::SolomonoffUb {
        let lengths: Option<Vec<usize>> = sequences.iter().map(|s| s.shortened_len).collect();
        let Some(lengths) = lengths else {
            bail!("solomonoff_ub needs utm shards")
        };
        let ub: f64 = solomonoff_upper_bound(&lengths);
        let (ub, unit) = if args.bits {
            (ub / std::f64::consts::LN_2, "bits")
        } else {
            (ub, "nats")
        };
        format!(
            "# baseline\tsolomonoff_ub\tunit\t{unit}\nsequences\t{}\nsolomonoff_ub\t{ub:.12e}\n",
            lengths.len()
        )
    } else {
        let make = || -> Box<dyn Predictor<f64>> { which.predictor(alphabet).expect("predictor baseline") };
        evaluate_sequences(make, alphabet, &sequences)?.to_text(args.bits)
    };
    write_or_print(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenerateUtm(a) => {
            let pad = match a.pad {
                Pad::Normalized => PadMode::Normalized,
                Pad::Unnormalized => PadMode::Unnormalized,
            };
            let source = Source::Utm {
                max_steps: a.steps,
                max_program_len: a.max_program_len,
                pad,
                q: read_q(a.q.as_deref())?,
            };
            generate(config(&a.common, source), &a.common.out)?;
        }
        Command::GenerateVoms(a) => {
            let source = Source::Voms {
                depth: a.depth,
                alpha: a.alpha,
            };
            generate(config(&a.common, source), &a.common.out)?;
        }
        Command::GenerateChomsky(a) => {
            let tasks = if a.tasks == "all" {
                Task::ALL.to_vec()
            } else {
                a.tasks.split(',').map(Task::from_name).collect::<Result<_, _>>()?
            };
            generate(config(&a.common, Source::Chomsky { tasks }), &a.common.out)?;
            let table = a.common.out.join("tokens.txt");
            fs::write(&table, vocab::table_text()).with_context(|| format!("writing {}", table.display()))?;
        }
        Command::Eval(a) => eval(&a)?,
        Command::Oracle(a) => {
            let cfg = OracleConfig::new(a.steps, a.max_program_len, a.max_output);
            let table = enumerate_prior_with_guard(&cfg, a.guard)?;
            write_or_print(a.out.as_deref(), &table.to_text())?;
        }
        Command::TrainQ(a) => {
            let limits = RunLimits::new(a.steps, a.len, None);
            let filter = InterestFilter {
                min_len: a.min_len,
                max_period: a.max_period,
            };
            let t = train_q(
                &ProgramDistribution::uniform(0),
                &limits,
                a.count,
                a.seed,
                filter,
                a.order,
                a.epsilon,
            )?;
            fs::write(&a.out, t.dist.to_text()).with_context(|| format!("writing {}", a.out.display()))?;
            println!(
                "sampled {}, interesting {} ({:.4e})",
                t.sampled,
                t.interesting,
                t.source_fraction()
            );
        }
        Command::Shorten(a) => {
            let limits = RunLimits::new(a.steps, a.len, None);
            let draws: Vec<Instruction> = parse_program(&a.program)?.iter().map(|c| c.as_drawn()).collect();
            let run = regenerate(&draws, &limits);
            let short = shorten(&run.program, &run.trace, &limits);
            println!("program\t{}", run.program.text());
            println!("shortened\t{}", short.program.text());
            println!("lengths\t{}\t{}", short.original_len, short.shortened_len);
            let out: Vec<String> = run.output.iter().map(u8::to_string).collect();
            println!("output\t{}", out.join(","));
        }
        Command::Stats(a) => {
            let filter = InterestFilter {
                min_len: a.min_len,
                max_period: a.max_period,
            };
            let stats = match &a.shards {
                Some(dir) => Stats::from_shards(&load_shards(dir)?, filter),
                None => Stats::sample_utm(
                    &read_q(a.q.as_deref())?,
                    RunLimits::new(a.steps, a.len, None),
                    a.sample,
                    a.seed,
                    filter,
                ),
            };
            print!("{}", stats.to_text());
        }
        Command::Verify(a) => {
            let mut ok = true;
            for p in &a.paths {
                let files = if p.is_dir() { list_shards(p)? } else { vec![p.clone()] };
                for f in files {
                    let report = verify_shard(&f, a.replay)?;
                    print!("{report}");
                    ok &= report.passed();
                }
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var(WORKERS_ENV) {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {WORKERS_ENV} must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

//! `emms`: command-line front end for EMMS computation, Bundle Claiming and
//! allocation verification.
//!
//! Exit codes: 0 when every check passes, 1 on a fairness or invariant failure,
//! 2 on a usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emms_core::claiming::{cut_and_choose, run_bc, PartitionSource};
use emms_core::fairness::{average_share, check_allocation, emms, extended_proportional_share, mms, EmmsMode};
use emms_core::generate::{random_general, random_network, ExperimentConfig, Strategy};
use emms_core::io::{instance_to_json, read_allocation, read_instance, write_instance, AllocationFile};
use emms_core::{parse_rational, run_experiment, Error, Rational, DEFAULT_SEARCH_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "emms", version, about = "Fair allocation of indivisible goods with network externalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Print every agent's EMMS, MMS, average-share and extended-proportional share.
    Emms(EmmsArgs),
    /// Compute an allocation with the chosen strategy.
    Allocate(AllocateArgs),
    /// Check an allocation against the strategy's EMMS guarantee.
    Verify(VerifyArgs),
    /// Run Bundle Claiming and emit its step-by-step trace as JSON.
    Trace(TraceArgs),
    /// Run a seeded experiment sweep and write the CSV report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CapArg {
    /// Limit on n^m candidate partitions for exhaustive search.
    #[arg(long, env = "EMMS_CAP", default_value_t = DEFAULT_SEARCH_CAP)]
    cap: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Agent count, `N` or `LO..HI`.
    #[arg(long, default_value = "2..4", value_parser = parse_range)]
    agents: (usize, usize),
    /// Item count, `N` or `LO..HI`; each instance has at least as many items as agents.
    #[arg(long, default_value = "4..7", value_parser = parse_range)]
    items: (usize, usize),
    /// Lower bound on every self-weight, in (0, 1].
    #[arg(long, default_value = "7/10", value_parser = parse_rational_arg)]
    beta: Rational,
    /// Integer item values, `N` or `LO..HI`.
    #[arg(long, default_value = "0..20", value_parser = parse_range)]
    values: (usize, usize),
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Generate general-form instances with independent cross values.
    #[arg(long)]
    general: bool,
    /// Output directory; instances are printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Lpt,
}

impl Mode {
    fn emms_mode(self, cap: u64) -> EmmsMode {
        match self {
            Mode::Exact => EmmsMode::Exact { cap },
            Mode::Lpt => EmmsMode::LptBound,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    BcExact,
    BcLpt,
    CutAndChoose,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::BcExact => Strategy::BcExact,
            StrategyArg::BcLpt => Strategy::BcLpt,
            StrategyArg::CutAndChoose => Strategy::CutAndChoose,
        }
    }
}

#[derive(Args)]
struct EmmsArgs {
    instance: PathBuf,
    /// `exact` searches every partition; `lpt` reports the LPT lower bound.
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[command(flatten)]
    cap: CapArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AllocateArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "bc-exact")]
    strategy: StrategyArg,
    #[command(flatten)]
    cap: CapArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    allocation: PathBuf,
    /// Self-reliance in the checked bound; defaults to the instance's smallest self-weight.
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,
    /// Strategy whose guarantee is checked; defaults to the one recorded in the allocation file.
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[command(flatten)]
    cap: CapArg,
    /// Write the report as CSV (`.csv`) or JSON (anything else).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    instance: PathBuf,
    /// `exact` uses optimal reference partitions, `lpt` uses LPT ones.
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[command(flatten)]
    cap: CapArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Self-reliance in the checked bound; defaults to each instance's smallest self-weight.
    #[arg(long, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,
    /// Strategies to run; repeat or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bc-exact,bc-lpt")]
    strategy: Vec<StrategyArg>,
    #[command(flatten)]
    cap: CapArg,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    match text.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => parse(text).map(|v| (v, v)),
    }
}

fn parse_rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a decimal or p/q rational"))
}

/// Why a command did not succeed.
enum Failure {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// A fairness bound or runtime invariant failed: exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvariantBroken(_) => Failure::Check(err.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_config(sweep: &SweepArgs) -> Result<ExperimentConfig, Failure> {
    let values = (
        u32::try_from(sweep.values.0).map_err(|e| Failure::Usage(e.to_string()))?,
        u32::try_from(sweep.values.1).map_err(|e| Failure::Usage(e.to_string()))?,
    );
    Ok(ExperimentConfig {
        seed: sweep.seed,
        instances: sweep.count,
        agents: sweep.agents,
        items: sweep.items,
        beta: sweep.beta.clone(),
        values,
        ..ExperimentConfig::default()
    })
}

fn gen(args: GenArgs) -> Outcome {
    let config = sweep_config(&args.sweep)?;
    // the search cap is irrelevant for generation
    ExperimentConfig { cap: u64::MAX, ..config.clone() }.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
    }
    for k in 0..config.instances {
        let n = rng.gen_range(config.agents.0..=config.agents.1);
        let m = rng.gen_range(config.items.0.max(n)..=config.items.1);
        let instance = if args.general {
            random_general(&mut rng, n, m, config.values)
        } else {
            random_network(&mut rng, n, m, &config.beta, config.values)
        };
        match &args.out {
            Some(dir) => write_instance(&instance, dir.join(format!("instance-{k:04}.json")))?,
            None => println!("{}", instance_to_json(&instance)),
        }
    }
    Ok(())
}

fn emms_cmd(args: EmmsArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let mode = args.mode.emms_mode(args.cap.cap);
    let mut text = String::from("agent,emms,emms_exact,mms_raw,mms_self_scaled,average_share,extended_proportional_share\n");
    for i in 0..instance.agents() {
        let share = emms(&instance, i, mode)?;
        let maximin = mms(&instance, i, args.cap.cap)?;
        text.push_str(&format!(
            "{i},{},{},{},{},{},{}\n",
            share.value,
            share.exact,
            maximin.raw,
            maximin.self_scaled,
            average_share(&instance, i),
            extended_proportional_share(&instance, i)
        ));
    }
    emit(args.out.as_deref(), &text)
}

fn allocate(args: AllocateArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let strategy = Strategy::from(args.strategy);
    let (partition, allocation) = match strategy {
        Strategy::BcExact | Strategy::BcLpt => {
            let source = if strategy == Strategy::BcExact {
                PartitionSource::Exact { cap: args.cap.cap }
            } else {
                PartitionSource::Lpt
            };
            let outcome = run_bc(&instance, source)?;
            (outcome.partition, outcome.allocation)
        }
        Strategy::CutAndChoose => cut_and_choose(&instance, args.cap.cap)?,
    };
    let file = AllocationFile::new(strategy.label(), &partition, &allocation);
    emit(args.out.as_deref(), &(file.to_json() + "\n"))
}

fn verify(args: VerifyArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let file = read_allocation(&args.allocation)?;
    let strategy = match args.strategy {
        Some(s) => Strategy::from(s),
        None => Strategy::parse(&file.strategy)
            .ok_or_else(|| Failure::Usage(format!("unknown strategy `{}`; pass --strategy", file.strategy)))?,
    };
    let alpha = match args.alpha {
        Some(a) => a,
        None => instance.self_reliance()?,
    };
    let partition = file.partition(instance.items())?;
    let bound = strategy.bound(&alpha);
    let report = check_allocation(&instance, &partition, &file.assignment, &bound, args.mode.emms_mode(args.cap.cap))?;
    let text = match &args.out {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => report.to_csv(),
        _ => report.to_json() + "\n",
    };
    emit(args.out.as_deref(), &text)?;
    for a in &report.agents {
        eprintln!(
            "agent {}: utility {} required {} ({}·EMMS) {}",
            a.agent,
            a.utility,
            a.required,
            bound,
            if a.pass { "PASS" } else { "FAIL" }
        );
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} guarantee violated", strategy.label())))
    }
}

fn trace(args: TraceArgs) -> Outcome {
    let instance = read_instance(&args.instance)?;
    let source = match args.mode {
        Mode::Exact => PartitionSource::Exact { cap: args.cap.cap },
        Mode::Lpt => PartitionSource::Lpt,
    };
    let outcome = run_bc(&instance, source)?;
    emit(args.out.as_deref(), &(outcome.trace.to_json() + "\n"))?;
    if outcome.trace.all_checks_hold() {
        Ok(())
    } else {
        Err(Failure::Check("trace contains a failed check".into()))
    }
}

fn bench(args: BenchArgs) -> Outcome {
    let mut strategies: Vec<Strategy> = args.strategy.iter().map(|&s| s.into()).collect();
    strategies.dedup();
    let config = ExperimentConfig {
        alpha: args.alpha,
        strategies,
        cap: args.cap.cap,
        ..sweep_config(&args.sweep)?
    };
    let report = run_experiment(&config)?;
    emit(args.out.as_deref(), &report.to_csv())?;
    eprint!("{}", report.summary_text());
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check("some rows violate their bound or invariants".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Emms(a) => emms_cmd(a),
        Command::Allocate(a) => allocate(a),
        Command::Verify(a) => verify(a),
        Command::Trace(a) => trace(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

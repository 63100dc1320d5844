use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use ventadd::ir::{diagram, serial};
use ventadd::parallel::Execution;
use ventadd::resources::{count_builder, format_table, linearity_check, sweep, DEFAULT_SPREAD_BOUND};
use ventadd::sim::{verify_builder, BranchMode, InputSet, SimConfig, VerificationReport, VerifyOptions};
use ventadd::{AdderSpec, BuilderId, CarryIn, Error};

const EXIT_FLAGS: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Synthesize, inspect, verify and count vented constant adders.
#[derive(Parser)]
#[command(name = "ventadd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a circuit.
    Emit {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = EmitFormat::Diagram)]
        format: EmitFormat,
    },
    /// Simulate a circuit against the reference model.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Branches::Auto)]
        branches: Branches,
        /// Branches per input when sampling.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// All offsets, targets and dirty values instead of a seeded sample.
        #[arg(long)]
        exhaustive: bool,
        /// Run the case matrix on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Gate counts and ancilla budget.
    Count {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Counts over a width range, with the linear fit residual.
    Sweep {
        builder: BuilderArg,
        /// Inclusive range, e.g. 4..24.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<u32>,
        /// Offset, reduced mod 2^n per row; symbolic when absent.
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct Target {
    builder: BuilderArg,
    #[arg(long)]
    n: u32,
    /// Offset constant; symbolic when absent.
    #[arg(long)]
    d: Option<u64>,
    /// Add a control qubit gating the offset. Requires --d.
    #[arg(long, requires = "d")]
    controlled: bool,
    /// Classical carry-in bit folded into the offset.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    carry_in_const: Option<u8>,
}

impl Target {
    fn spec(&self) -> AdderSpec {
        let carry_in = match self.carry_in_const {
            Some(b) => CarryIn::Const(b == 1),
            None => CarryIn::Qubit,
        };
        AdderSpec::new(self.n).carry_in(carry_in)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuilderArg {
    Stream,
    Carryxor,
    Add2c,
    Add3c,
}

impl From<BuilderArg> for BuilderId {
    fn from(b: BuilderArg) -> Self {
        match b {
            BuilderArg::Stream => BuilderId::Stream,
            BuilderArg::Carryxor => BuilderId::CarryXor,
            BuilderArg::Add2c => BuilderId::Add2c,
            BuilderArg::Add3c => BuilderId::Add3c,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Diagram,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branches {
    Auto,
    Enumerate,
    Sample,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u32 = a.parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim_start_matches('=').parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::EnumerationCap { .. } => EXIT_BUDGET,
        _ => EXIT_FLAGS,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_FLAGS } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(command: Command) -> ventadd::Result<u8> {
    match command {
        Command::Emit { target, format } => {
            let s = BuilderId::from(target.builder).synthesize(&target.spec(), target.d, target.controlled)?;
            match format {
                EmitFormat::Diagram => print!("{}", diagram::render(&s.circuit)),
                EmitFormat::Json => println!("{}", serial::to_json(&s.circuit)),
            }
            Ok(0)
        }
        Command::Count { target, format } => {
            let r = count_builder(target.builder.into(), &target.spec(), target.d, target.controlled)?;
            match format {
                ReportFormat::Text => print!("{}", format_table(std::slice::from_ref(&r))),
                ReportFormat::Json => println!("{}", to_json(json!(r))),
            }
            Ok(0)
        }
        Command::Sweep { builder, n, d, format } => {
            let builder = BuilderId::from(builder);
            let lo = (*n.start()).max(builder.min_n());
            let rows = sweep(builder, lo..=*n.end(), &AdderSpec::new(lo), d, false)?;
            let fit = linearity_check(builder, lo..=*n.end(), builder.slope(), DEFAULT_SPREAD_BOUND)?;
            match format {
                ReportFormat::Text => {
                    print!("{}", format_table(&rows));
                    println!(
                        "fit: toffoli - {}n in [{}, {}], spread {} (bound {}) {}",
                        fit.slope,
                        fit.points.iter().map(|p| p.2).min().unwrap_or(0),
                        fit.points.iter().map(|p| p.2).max().unwrap_or(0),
                        fit.spread,
                        fit.bound,
                        if fit.passed() { "ok" } else { "exceeded" }
                    );
                }
                ReportFormat::Json => println!("{}", to_json(json!({ "rows": rows, "fit": fit }))),
            }
            Ok(0)
        }
        Command::Verify {
            target,
            seed,
            branches,
            samples,
            exhaustive,
            sequential,
            format,
        } => {
            let builder = BuilderId::from(target.builder);
            let opts = verify_options(&target, seed, branches, samples, exhaustive, sequential);
            let report = verify_builder(builder, target.n, &opts)?;
            match format {
                ReportFormat::Text => print!("{}", render_report(builder, target.n, &report)),
                ReportFormat::Json => println!(
                    "{}",
                    to_json(json!({
                        "builder": builder,
                        "n": target.n,
                        "passed": report.passed(),
                        "report": report,
                    }))
                ),
            }
            Ok(if report.passed() { 0 } else { EXIT_FAILED })
        }
    }
}

fn verify_options(
    target: &Target,
    seed: u64,
    branches: Branches,
    samples: usize,
    exhaustive: bool,
    sequential: bool,
) -> VerifyOptions {
    let sampled = |k| if exhaustive { InputSet::All } else { InputSet::Sample(k) };
    let offsets = match target.d {
        Some(d) => Some(vec![d]),
        None if exhaustive => None,
        None => Some(sample_offsets(target.n, seed)),
    };
    VerifyOptions {
        carry_in: target.spec().carry_in,
        controlled: target.controlled,
        offsets,
        targets: sampled(64),
        dirty: sampled(16),
        branches: match branches {
            Branches::Auto => BranchMode::Auto,
            Branches::Enumerate => BranchMode::Enumerate,
            Branches::Sample => BranchMode::Sample(samples),
        },
        phase_offsets: sampled(4),
        seed,
        tolerance: 1e-9,
        config: SimConfig::default(),
        execution: if sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    }
}

/// Extremes plus a seeded spread of offsets, all distinct.
fn sample_offsets(n: u32, seed: u64) -> Vec<u64> {
    let space = 1u64 << n.min(63);
    let mut v = std::collections::BTreeSet::from([0, space - 1]);
    let mut state = seed;
    while v.len() < 16.min(space as usize) {
        // xorshift step; quality is irrelevant here
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        v.insert(state % space);
    }
    v.into_iter().collect()
}

fn render_report(builder: BuilderId, n: u32, r: &VerificationReport) -> String {
    let mut s = format!(
        "verify {builder} n={n}: {}\n  cases {}, branches {}, phase branches {}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.cases,
        r.branches,
        r.phase_branches
    );
    if let Some(ov) = r.min_overlap {
        s.push_str(&format!(", min overlap {ov:.12}"));
    }
    s.push('\n');
    if let Some(f) = r.failures.first() {
        s.push_str(&format!(
            "  {} failures; first: d={} {:?}",
            r.failure_count, f.offset, f.kind
        ));
        if let Some(b) = f.input {
            s.push_str(&format!(" input={b:#x}"));
        }
        s.push_str(&format!(" {}\n", f.detail));
    }
    s
}

fn to_json(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("a JSON value always serialises")
}

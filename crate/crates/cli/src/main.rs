//! `wsat`: command-line front end for the weak-saturation laboratory.
//!
//! JSON results are wrapped as `{"manifest": .., "result": ..}`. Exit codes:
//! 0 success, 1 a verification check failed, 2 usage or input error.

mod commands;
mod resolve;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "wsat", version, about = "Weak saturation / graph bootstrap percolation laboratory")]
struct Cli {
    /// Omit the wall-clock duration from the manifest.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Exact invariants of a pattern graph.
    Analyze(AnalyzeArgs),
    /// Closure of a graph; prints the final edge list.
    Close(CloseArgs),
    /// Whether a graph percolates.
    Percolate(PercolateArgs),
    /// Witness graph of one closure edge.
    Witness(WitnessArgs),
    /// Build, verify or count pattern ladders.
    #[command(subcommand)]
    Ladder(LadderCommand),
    /// Exhaustive count of percolating labelled graphs.
    Census(CensusArgs),
    /// Percolation probability on a grid of p.
    Curve(CurveArgs),
    /// Bisection for the median percolation threshold.
    PcSearch(PcSearchArgs),
    /// Induced-ladder frequency experiment.
    LadderExp(LadderExpArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug, Serialize)]
struct AnalyzeArgs {
    #[arg(long)]
    pattern: String,
}

#[derive(clap::Args, Debug, Serialize)]
struct CloseArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    pattern: String,
    /// Write the round-by-round trace as JSON to this file.
    #[arg(long)]
    trace: Option<String>,
}

#[derive(clap::Args, Debug, Serialize)]
struct PercolateArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    pattern: String,
}

#[derive(clap::Args, Debug, Serialize)]
struct WitnessArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    pattern: String,
    /// Target pair, "u v".
    #[arg(long)]
    target: String,
    /// Include the red-edge replay.
    #[arg(long)]
    rea: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LadderCommand {
    /// Construct a ladder and print it.
    Build(LadderArgs),
    /// Exhaustive density check and closure-round check.
    Verify(LadderArgs),
    /// Count induced ladders based at an ordered pair of a host graph.
    Count(LadderCountArgs),
}

#[derive(clap::Args, Debug, Serialize)]
struct LadderArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    height: usize,
    /// Lower rung as a pattern edge "a b" (needs --upper).
    #[arg(long, requires = "upper")]
    lower: Option<String>,
    /// Upper rung as a pattern edge "c d" (needs --lower).
    #[arg(long, requires = "lower")]
    upper: Option<String>,
}

#[derive(clap::Args, Debug, Serialize)]
struct LadderCountArgs {
    #[command(flatten)]
    ladder: LadderArgs,
    #[arg(long)]
    host: String,
    /// Ordered base pair "u v".
    #[arg(long)]
    base: String,
}

#[derive(clap::Args, Debug, Serialize)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Serialize)]
struct CurveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
    /// Comma-separated p values.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(clap::Args, Debug, Serialize)]
struct PcSearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
    #[arg(long, default_value_t = 400)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop when the bracket is narrower than tol * p.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Rounding {
    Nearest,
    Floor,
}

#[derive(clap::Args, Debug, Serialize)]
struct LadderExpArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: String,
    /// p = (alpha/n)^(1/lambda); needs --beta.
    #[arg(long, requires = "beta", conflicts_with_all = ["p", "height"])]
    alpha: Option<f64>,
    /// h = beta ln n; needs --alpha.
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Rounding::Nearest)]
    rounding: Rounding,
    /// Edge probability, used with --height instead of --alpha/--beta.
    #[arg(long, requires = "height")]
    p: Option<f64>,
    #[arg(long, requires = "p")]
    height: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Suite {
    /// Balance equivalences over all small patterns.
    Appendix,
    /// Engine against the naive closure on every labelled graph.
    Engine,
    /// Witness invariants on random graphs.
    Witness,
    /// Ladder density bounds and closure rounds.
    Ladder,
}

#[derive(clap::Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest pattern order for the appendix suite.
    #[arg(long, default_value_t = 5)]
    vmax: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
    /// Random graphs for the witness suite.
    #[arg(long, default_value_t = 100)]
    runs: u64,
    /// Edge probability for the witness suite (default n^(-1/lambda)).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest ladder height for the ladder suite.
    #[arg(long, default_value_t = 3)]
    max_height: usize,
}

/// What a subcommand produced.
enum Output {
    /// JSON result; `passed` is false when a verification check failed.
    Json { result: Value, passed: bool, seed: Option<u64> },
    /// Plain text for stdout, plus an optional JSON file `(path, body)`.
    Text { text: String, side: Option<(String, Value)> },
}

impl Output {
    fn json<T: Serialize>(result: &T, seed: Option<u64>) -> Result<Self> {
        Ok(Output::Json {
            result: serde_json::to_value(result)?,
            passed: true,
            seed,
        })
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunManifest<'a> {
    subcommand: &'a str,
    config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_ms: Option<u64>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Close(_) => "close",
            Command::Percolate(_) => "percolate",
            Command::Witness(_) => "witness",
            Command::Ladder(LadderCommand::Build(_)) => "ladder build",
            Command::Ladder(LadderCommand::Verify(_)) => "ladder verify",
            Command::Ladder(LadderCommand::Count(_)) => "ladder count",
            Command::Census(_) => "census",
            Command::Curve(_) => "curve",
            Command::PcSearch(_) => "pc-search",
            Command::LadderExp(_) => "ladder-exp",
            Command::Verify(_) => "verify",
        }
    }

    fn config(&self) -> Result<Value> {
        let v = match self {
            Command::Analyze(a) => serde_json::to_value(a),
            Command::Close(a) => serde_json::to_value(a),
            Command::Percolate(a) => serde_json::to_value(a),
            Command::Witness(a) => serde_json::to_value(a),
            Command::Ladder(LadderCommand::Build(a) | LadderCommand::Verify(a)) => serde_json::to_value(a),
            Command::Ladder(LadderCommand::Count(a)) => serde_json::to_value(a),
            Command::Census(a) => serde_json::to_value(a),
            Command::Curve(a) => serde_json::to_value(a),
            Command::PcSearch(a) => serde_json::to_value(a),
            Command::LadderExp(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        Ok(v?)
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("WSAT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .with_context(|| format!("WSAT_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("cannot configure the worker pool")
}

fn dispatch(command: &Command) -> Result<Output> {
    match command {
        Command::Analyze(a) => commands::analyze(&a.pattern),
        Command::Close(a) => commands::close(&a.input, &a.pattern, a.trace.as_deref()),
        Command::Percolate(a) => commands::percolate(&a.input, &a.pattern),
        Command::Witness(a) => commands::witness(&a.input, &a.pattern, &a.target, a.rea),
        Command::Ladder(LadderCommand::Build(a)) => commands::ladder_build(a),
        Command::Ladder(LadderCommand::Verify(a)) => commands::ladder_verify(a),
        Command::Ladder(LadderCommand::Count(a)) => commands::ladder_count(a),
        Command::Census(a) => commands::census(a.n, &a.pattern),
        Command::Curve(a) => commands::curve(a),
        Command::PcSearch(a) => commands::pc_search(a),
        Command::LadderExp(a) => commands::ladder_exp(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn wrap(cli: &Cli, result: Value, seed: Option<u64>, start: Instant) -> Result<String> {
    let manifest = RunManifest {
        subcommand: cli.command.name(),
        config: cli.command.config()?,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        duration_ms: (!cli.no_timing).then(|| start.elapsed().as_millis() as u64),
    };
    Ok(serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let outcome = configure_threads().and_then(|_| dispatch(&cli.command));
    match outcome.and_then(|out| emit(&cli, out, start)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Prints the output; returns whether every check passed.
fn emit(cli: &Cli, out: Output, start: Instant) -> Result<bool> {
    match out {
        Output::Text { text, side } => {
            if let Some((path, body)) = side {
                let s = wrap(cli, body, None, start)?;
                std::fs::write(&path, s + "\n").with_context(|| format!("cannot write {path}"))?;
            }
            print!("{text}");
            Ok(true)
        }
        Output::Json { result, passed, seed } => {
            println!("{}", wrap(cli, result, seed, start)?);
            Ok(passed)
        }
    }
}

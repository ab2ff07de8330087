//! The `scan-nacs` command line.
//!
//! Exit status is 0 on success, 1 on I/O, format or data errors and 2 on
//! usage errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::corpus::{
    self, Direction, HeldOutPrimitive, SplitSpec, DEFAULT_LENGTH_THRESHOLD, DEFAULT_TRAIN_FRACTION,
};
use crate::error::{Error, Result};
use crate::evaluator;
use crate::stats;

#[derive(Debug, Parser)]
#[command(
    name = "scan-nacs",
    version,
    about = "Generate, split and score SCAN and NACS datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the universe, split it and write a dataset directory.
    Generate(GenerateArgs),
    /// Write structural statistics of the universe and the standard splits.
    Stats(StatsArgs),
    /// Score a predictions file against a dataset's test side.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Scan,
    Nacs,
}

impl From<DirectionArg> for Direction {
    fn from(arg: DirectionArg) -> Self {
        match arg {
            DirectionArg::Scan => Direction::Scan,
            DirectionArg::Nacs => Direction::Nacs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SplitArg {
    Simple,
    Length,
    Primitive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrimitiveArg {
    Jump,
    TurnLeft,
}

impl From<PrimitiveArg> for HeldOutPrimitive {
    fn from(arg: PrimitiveArg) -> Self {
        match arg {
            PrimitiveArg::Jump => HeldOutPrimitive::Jump,
            PrimitiveArg::TurnLeft => HeldOutPrimitive::TurnLeft,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = DirectionArg::Scan)]
    direction: DirectionArg,
    #[arg(long, value_enum)]
    split: SplitArg,
    /// Train fraction of the simple split [default: 0.8]
    #[arg(long)]
    fraction: Option<f64>,
    /// Longest action sequence kept in training by the length split [default: 22]
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long, value_enum)]
    primitive: Option<PrimitiveArg>,
    /// Seed of the simple split (required for it)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Directory receiving stats.json and stats.txt
    #[arg(long)]
    out: PathBuf,
    /// Also tabulate a simple split with this seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRAIN_FRACTION)]
    fraction: f64,
    #[arg(long, default_value_t = DEFAULT_LENGTH_THRESHOLD)]
    threshold: usize,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Defaults to the direction the dataset was written in
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    predictions: PathBuf,
    /// Where to write the JSON report
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include per-example verdicts in the report
    #[arg(long)]
    verdicts: bool,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Generate(args) => match generate_spec(&args) {
            Ok(spec) => generate(&args, &spec),
            Err(usage) => return usage_error(usage),
        },
        Command::Stats(args) => match stats_specs(&args) {
            Ok(specs) => write_stats(&args, &specs),
            Err(usage) => return usage_error(usage),
        },
        Command::Eval(args) => eval(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn usage_error(message: String) -> i32 {
    let err = Cli::command().error(ErrorKind::ArgumentConflict, message);
    let _ = err.print();
    err.exit_code()
}

fn generate_spec(args: &GenerateArgs) -> std::result::Result<SplitSpec, String> {
    let direction = args.direction.into();
    let forbid = |present: bool, flag: &str| {
        if present {
            Err(format!("--{flag} does not apply to a {:?} split", args.split).to_lowercase())
        } else {
            Ok(())
        }
    };
    let spec = match args.split {
        SplitArg::Simple => {
            forbid(args.threshold.is_some(), "threshold")?;
            forbid(args.primitive.is_some(), "primitive")?;
            let seed = args
                .seed
                .ok_or_else(|| "the simple split requires --seed".to_owned())?;
            SplitSpec::simple(
                args.fraction.unwrap_or(DEFAULT_TRAIN_FRACTION),
                seed,
                direction,
            )
        }
        SplitArg::Length => {
            forbid(args.fraction.is_some(), "fraction")?;
            forbid(args.seed.is_some(), "seed")?;
            forbid(args.primitive.is_some(), "primitive")?;
            SplitSpec::length(
                args.threshold.unwrap_or(DEFAULT_LENGTH_THRESHOLD),
                direction,
            )
        }
        SplitArg::Primitive => {
            forbid(args.fraction.is_some(), "fraction")?;
            forbid(args.seed.is_some(), "seed")?;
            forbid(args.threshold.is_some(), "threshold")?;
            let primitive = args
                .primitive
                .ok_or_else(|| "the primitive split requires --primitive".to_owned())?;
            Ok(SplitSpec::primitive(primitive.into(), direction))
        }
    };
    spec.map_err(|e| e.to_string())
}

fn generate(args: &GenerateArgs, spec: &SplitSpec) -> Result<()> {
    let dataset = corpus::generate(spec, &args.out)?;
    println!(
        "wrote {} train / {} test examples to {}",
        dataset.train.len(),
        dataset.test.len(),
        args.out.display()
    );
    Ok(())
}

fn stats_specs(args: &StatsArgs) -> std::result::Result<Vec<SplitSpec>, String> {
    let mut specs = Vec::new();
    if let Some(seed) = args.seed {
        specs.push(
            SplitSpec::simple(args.fraction, seed, Direction::Scan).map_err(|e| e.to_string())?,
        );
    }
    specs.push(SplitSpec::length(args.threshold, Direction::Scan).map_err(|e| e.to_string())?);
    specs.push(SplitSpec::primitive(
        HeldOutPrimitive::Jump,
        Direction::Scan,
    ));
    specs.push(SplitSpec::primitive(
        HeldOutPrimitive::TurnLeft,
        Direction::Scan,
    ));
    Ok(specs)
}

fn write_stats(args: &StatsArgs, specs: &[SplitSpec]) -> Result<()> {
    let universe = corpus::build_universe();
    let datasets = specs
        .iter()
        .map(|spec| corpus::split(spec, &universe))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<_> = datasets.iter().collect();
    let report = stats::summarize(&universe, &refs);

    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    let json_path = args.out.join("stats.json");
    fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    let text = report.to_string();
    let text_path = args.out.join("stats.txt");
    fs::write(&text_path, &text).map_err(|e| Error::io(&text_path, e))?;
    print!("{text}");
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let report = evaluator::score_files(
        &args.dataset,
        &args.predictions,
        args.direction.map(Direction::from),
        args.report.as_deref(),
        args.verdicts,
    )?;
    println!(
        "{} accuracy {:.6} ({}/{})",
        report.direction, report.accuracy, report.correct, report.total
    );
    for (reason, count) in &report.reasons {
        println!("  {reason:?}: {count}");
    }
    Ok(())
}

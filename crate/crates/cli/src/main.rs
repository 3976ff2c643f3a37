use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};
use monostar::report::{self, B3Mode, CheckSelection, OutputFormat, RunConfig, CHECKS, OPS};

#[derive(Parser)]
#[command(name = "monostar", version, about = "Exact checks for magnetic-monopole star products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks and print a report. Exit status 1 if any verdict differs from its expectation.
    Verify(VerifyArgs),
    /// Evaluate one operation and print the exact result.
    Eval(EvalArgs),
    /// List check ids and operation names.
    ListChecks,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long = "field-b1", value_name = "EXPR")]
    b1: Option<String>,
    #[arg(long = "field-b2", value_name = "EXPR")]
    b2: Option<String>,
    #[arg(long = "field-b3", value_name = "EXPR")]
    b3: Option<String>,
    /// Flat `key = value` configuration; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long)]
    order: Option<usize>,
    /// zero, random:<seed> or pair:<seed>
    #[arg(long = "b3", value_name = "MODE")]
    b3_mode: Option<B3Mode>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Comma-separated check ids, or `all`.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    op: String,
    #[arg(long = "arg", value_name = "EXPR")]
    args: Vec<String>,
}

fn load(field: &FieldArgs) -> Result<RunConfig> {
    let mut cfg = match &field.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::parse_kv(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    for (k, v) in [&field.b1, &field.b2, &field.b3].into_iter().enumerate() {
        if let Some(v) = v {
            cfg.field[k] = v.clone();
        }
    }
    if let Some(order) = field.order {
        cfg.set("order", &order.to_string())?;
    }
    if let Some(mode) = field.b3_mode {
        cfg.b3_mode = mode;
    }
    Ok(cfg)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut cfg = load(&args.field)?;
    if let Some(checks) = &args.checks {
        cfg.checks = checks.parse::<CheckSelection>()?;
    }
    if let Some(format) = args.format {
        cfg.output = format;
    }
    let rep = report::run(&cfg)?;
    let text = match cfg.output {
        OutputFormat::Json => rep.to_json() + "\n",
        OutputFormat::Text => rep.to_text(),
    };
    match &args.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(if rep.reproduced() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Eval(args) => load(&args.field)
            .and_then(|cfg| Ok(report::eval(&args.op, &args.args, &cfg)?))
            .map(|out| {
                println!("{out}");
                ExitCode::SUCCESS
            }),
        Command::ListChecks => {
            for c in CHECKS {
                println!("{:<28} {}", c.id, c.description);
            }
            println!();
            for (op, arity) in OPS {
                println!("op {op}/{arity}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}

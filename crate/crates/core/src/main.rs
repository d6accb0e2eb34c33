use std::path::PathBuf;
use std::process::ExitCode;

use braidcat::cli::{self, Command, Format, RunConfig};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    ListBuiltins,
    CheckBicharacter,
    CheckRmatrix,
    BuildCore,
    BuildBraided,
    ExtractR,
    VerifyAll,
    LeftSuite,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Finite quantum groups, R-matrices and braided tensor products, checked numerically.
#[derive(Debug, Parser)]
#[command(name = "braidcat", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Builtin group name or JSON group spec.
    #[arg(long)]
    group: Option<String>,
    /// Builtin R-matrix name or JSON R-matrix spec.
    #[arg(long = "r", default_value = "trivial")]
    r: String,
    /// Comma-separated objects, builtin names or JSON specs.
    #[arg(long, value_delimiter = ',')]
    objects: Vec<String>,
    /// Overrides every tolerance-bound residual limit; must lie in (0, 1e-3).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    /// Suite to run with verify-all.
    #[arg(long, default_value = "default")]
    suite: String,
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::ListBuiltins => Command::ListBuiltins,
        Cmd::CheckBicharacter => Command::CheckBicharacter,
        Cmd::CheckRmatrix => Command::CheckRmatrix,
        Cmd::BuildCore => Command::BuildCore,
        Cmd::BuildBraided => Command::BuildBraided,
        Cmd::ExtractR => Command::ExtractR,
        Cmd::VerifyAll => Command::VerifyAll,
        Cmd::LeftSuite => Command::LeftSuite,
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = RunConfig::new(command(args.command));
    cfg.group = args.group;
    cfg.rmatrix = args.r;
    cfg.objects = args.objects;
    cfg.tolerance = args.tol;
    cfg.format = match args.format {
        Fmt::Json => Format::Json,
        Fmt::Text => Format::Text,
    };
    let outcome = cli::seed_from_env()
        .map(|seed| cfg.seed = seed)
        .and_then(|_| {
            if args.suite != "default" {
                return Err(braidcat::Error::Input(format!("unknown suite '{}'", args.suite)));
            }
            cli::run(&cfg)
        });
    match outcome {
        Ok(o) => {
            if let Err(e) = emit(&o.render(cfg.format), args.out.as_ref()) {
                eprintln!("braidcat: cannot write report: {e}");
                return ExitCode::from(1);
            }
            if let (Some(_), cli::Outcome::Report(r)) = (&args.out, &o) {
                eprintln!("{} checks, {} failed", r.checks.len(), r.failures());
            }
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("braidcat: {e}");
            if let Some(p) = &args.out {
                let _ = std::fs::write(p, cli::error_report(&cfg, &e).to_json());
            }
            ExitCode::from(1)
        }
    }
}

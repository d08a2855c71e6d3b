//! `toralpha`: log canonical thresholds and alpha-invariants of toric
//! manifolds from fan data.
//!
//! Results go to stdout as JSON, diagnostics to stderr. Exit codes: 0
//! success, 1 failed validation or internal error, 2 parse, 3 domain,
//! 4 invariance, 5 capacity.

mod commands;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use toralpha_core::{Error, ErrorKind, Limits};

use crate::commands::{AlphaInput, LctInput, Report};
use crate::document::JobDocument;

#[derive(Parser)]
#[command(name = "toralpha", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[arg(long, global = true, env = "TORALPHA_MAX_DIMENSION", default_value_t = Limits::default().max_dimension)]
    max_dimension: usize,

    #[arg(long, global = true, env = "TORALPHA_MAX_RAYS", default_value_t = Limits::default().max_rays)]
    max_rays: usize,

    #[arg(long, global = true, env = "TORALPHA_MAX_INEQUALITIES", default_value_t = Limits::default().max_inequalities)]
    max_inequalities: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms, smoothness, completeness and divisor positivity.
    Validate(Input),
    /// Positivity flags, support slopes, polytope vertices, volume and barycenter.
    Info(Input),
    /// Log canonical threshold of a point metric or of a metric given by sections.
    Lct(LctArgs),
    /// Alpha-invariant with respect to a group of fan automorphisms.
    Alpha(AlphaArgs),
    /// Automorphism group of the fan.
    Autos(Input),
}

#[derive(Args)]
struct Input {
    file: PathBuf,
}

#[derive(Args)]
struct LctArgs {
    file: PathBuf,
    /// Comma-separated rational coordinates, e.g. "1/2,1/2".
    #[arg(long, conflicts_with = "sections")]
    point: Option<String>,
    /// JSON file of section exponents.
    #[arg(long)]
    sections: Option<PathBuf>,
    /// Tensor power the sections live in.
    #[arg(long)]
    level: Option<u32>,
}

#[derive(Args)]
struct AlphaArgs {
    file: PathBuf,
    /// "full" or a JSON file of generator matrices.
    #[arg(long)]
    group: Option<String>,
    /// Also evaluate the boundary-point formula for the anticanonical class.
    #[arg(long)]
    fano: bool,
    /// Check alpha against every fixed point with denominators up to D.
    #[arg(long, value_name = "D", env = "TORALPHA_ORACLE")]
    oracle: Option<u32>,
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Parse => 2,
        ErrorKind::Domain => 3,
        ErrorKind::Invariance => 4,
        ErrorKind::Capacity => 5,
        ErrorKind::Invalid | ErrorKind::Internal => 1,
    }
}

fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Parse => "parse",
        ErrorKind::Invalid => "invalid",
        ErrorKind::Domain => "domain",
        ErrorKind::Invariance => "invariance",
        ErrorKind::Capacity => "capacity",
        ErrorKind::Internal => "internal",
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let limits = Limits {
        max_dimension: cli.max_dimension,
        max_rays: cli.max_rays,
        max_inequalities: cli.max_inequalities,
    };
    match &cli.command {
        Command::Validate(a) => commands::validate(&JobDocument::load(&a.file, limits)?),
        Command::Info(a) => commands::info(&JobDocument::load(&a.file, limits)?),
        Command::Autos(a) => commands::autos(&JobDocument::load(&a.file, limits)?),
        Command::Lct(a) => commands::lct(
            &JobDocument::load(&a.file, limits)?,
            &LctInput {
                point: a.point.as_deref(),
                sections: a.sections.as_deref(),
                level: a.level,
            },
        ),
        Command::Alpha(a) => commands::alpha(
            &JobDocument::load(&a.file, limits)?,
            &AlphaInput {
                group: a.group.as_deref(),
                fano: a.fano,
                oracle: a.oracle,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let render = |v: &serde_json::Value| {
        if cli.pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        }
        .expect("JSON values serialize")
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", render(&report.value));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let mut diag = json!({ "error": kind_name(e.kind()), "message": e.to_string() });
            if let Error::InvalidFan(list) = &e {
                diag["diagnostics"] = json!(list);
            }
            eprintln!("{}", render(&diag));
            ExitCode::from(exit_code(&e))
        }
    }
}

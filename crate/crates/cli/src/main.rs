use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use formality_core::error::Error;
use formality_core::format::parse_algebra;
use formality_core::report::{error_report, exit_code, render_json, render_text, report, Command, Options};

#[derive(Parser)]
#[command(name = "formality", version, about = "Exact minimal models and formality obstructions for small dg algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check the algebra axioms
    Check(Args),
    /// Cohomology with class representatives and the induced product
    Cohomology(Args),
    /// Minimal model on cohomology by homotopy transfer
    Transfer(Args),
    /// Obstruction sequence in the operadic complex of the species
    Obstructions(Args),
    /// Quillen comparison and PBW checks for a Lie algebra
    Envelope(Args),
    /// Chain-map check of Alt on the cohomology of a Lie algebra
    Alt(Args),
    /// Barr splitting of the Hochschild cochains of a commutative algebra
    HarrisonSplit(Args),
    /// Harrison and Hochschild obstructions side by side
    CompareComAss(Args),
    /// Chevalley-Eilenberg and envelope obstructions side by side
    CompareLieAss(Args),
    /// Obstruction sequence with the degree-bound certificate
    Certify(Args),
}

#[derive(clap::Args, Clone, Copy)]
struct Args {
    /// Algebra file
    #[arg(value_name = "FILE")]
    file: FileArg,
    #[arg(long, default_value_t = 5)]
    arity_bound: usize,
    #[arg(long, default_value_t = 4)]
    weight_bound: usize,
    /// Last obstruction stage or split arity (defaults to the arity bound; at most 4 for harrison-split)
    #[arg(long)]
    stage: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the basis-permutation recheck
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<FileArg>,
}

/// Paths are interned so `Args` stays `Copy`.
#[derive(Clone, Copy)]
struct FileArg(&'static std::path::Path);

impl std::str::FromStr for FileArg {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(FileArg(Box::leak(PathBuf::from(s).into_boxed_path())))
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

fn split(cmd: Cmd) -> (Command, Args) {
    match cmd {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Cohomology(a) => (Command::Cohomology, a),
        Cmd::Transfer(a) => (Command::Transfer, a),
        Cmd::Obstructions(a) => (Command::Obstructions, a),
        Cmd::Envelope(a) => (Command::Envelope, a),
        Cmd::Alt(a) => (Command::Alt, a),
        Cmd::HarrisonSplit(a) => (Command::HarrisonSplit, a),
        Cmd::CompareComAss(a) => (Command::CompareComAss, a),
        Cmd::CompareLieAss(a) => (Command::CompareLieAss, a),
        Cmd::Certify(a) => (Command::Certify, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = split(cli.command);
    let opts = Options {
        arity_bound: args.arity_bound,
        weight_bound: args.weight_bound,
        stage: args.stage,
        seed: args.seed,
    };
    let parsed = std::fs::read_to_string(args.file.0)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", args.file.0.display())))
        .and_then(|text| parse_algebra(&text));
    let (doc, err) = match parsed {
        Ok(alg) => report(cmd, &alg, &opts),
        Err(e) => (error_report(cmd, &opts, &e), Some(e)),
    };
    let rendered = match args.format {
        Format::Json => render_json(&doc),
        Format::Text => render_text(&doc),
    };
    if let Some(e) = &err {
        eprintln!("formality: {e}");
    }
    match args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path.0, rendered) {
                eprintln!("formality: cannot write {}: {e}", path.0.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(exit_code(err.as_ref()) as u8)
}

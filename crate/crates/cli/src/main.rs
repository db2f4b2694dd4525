//! `fracjet`: fractional derivatives, jet lifts, Euler-Lagrange checks and
//! model solves from the command line.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when a numerical
//! routine fails.

mod commands;
mod inputs;
mod options;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracjet::FracError;
use thiserror::Error;

use options::{Format, Options};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] FracError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(e) => match e {
                FracError::InvalidArgument(_)
                | FracError::UnknownName(_)
                | FracError::GridTooShort { .. }
                | FracError::OutOfRange { .. } => 2,
                _ => 3,
            },
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "fracjet", version, about = "Fractional calculus on uniform grids")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Left or right fractional derivative of a sampled function
    Deriv(Options),
    /// One-parameter Mittag-Leffler function E_alpha(z)
    Mlf(Options),
    /// Fractional jet lift y^(alpha a) = D^(alpha a) x / Γ(1 + alpha a)
    Lift(Options),
    /// Action of a catalog Lagrangian along a path
    Action(Options),
    /// Euler-Lagrange residual of a catalog Lagrangian along a path
    ElCheck(Options),
    /// Solve a catalog model with zero initial state
    Solve(Options),
    /// Model and Lagrangian catalogs
    Models {
        #[command(subcommand)]
        action: ModelsCmd,
    },
}

#[derive(Subcommand)]
enum ModelsCmd {
    List(Options),
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    let (opts, artifact) = match cmd {
        Cmd::Models {
            action: ModelsCmd::List(opts),
        } => {
            let opts = opts.resolve()?;
            let bytes = commands::models_list(&opts)?;
            return output::emit(&bytes, opts.output.as_deref());
        }
        Cmd::Deriv(o) => {
            let o = o.resolve()?;
            let a = commands::deriv(&o)?;
            (o, a)
        }
        Cmd::Mlf(o) => {
            let o = o.resolve()?;
            let a = commands::mlf(&o)?;
            (o, a)
        }
        Cmd::Lift(o) => {
            let o = o.resolve()?;
            let a = commands::lift_cmd(&o)?;
            (o, a)
        }
        Cmd::Action(o) => {
            let o = o.resolve()?;
            let a = commands::action(&o)?;
            (o, a)
        }
        Cmd::ElCheck(o) => {
            let o = o.resolve()?;
            let a = commands::el_check(&o)?;
            (o, a)
        }
        Cmd::Solve(o) => {
            let o = o.resolve()?;
            let a = commands::solve(&o)?;
            (o, a)
        }
    };
    let bytes = output::render(&artifact, opts.format.unwrap_or(Format::Csv))?;
    output::emit(&bytes, opts.output.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracjet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

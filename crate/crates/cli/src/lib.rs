//! Batch front end over `sumsets-core`: argument parsing, dispatch and exit codes.

pub mod commands;
pub mod config;
pub mod construct;
pub mod report;

use std::io::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use sumsets_core::Error;

use crate::commands::Expect;
use crate::config::{ExperimentConfig, Format};
use crate::report::Output;

/// Every asserted check passed.
pub const EXIT_OK: i32 = 0;
/// A check failed or the run hit an unexpected error.
pub const EXIT_FAILED: i32 = 1;
/// Bad arguments, configuration or input literals.
pub const EXIT_USAGE: i32 = 2;
/// A window exceeded the element cap.
pub const EXIT_CAP: i32 = 3;
/// A search ran out of budget.
pub const EXIT_BUDGET: i32 = 4;

/// Invalid input rejected before any computation.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Parser)]
#[command(
    name = "sumsets",
    version,
    about = "Densities, Følner sequences and sumset searches in abelian groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file with the same keys as the flags; its values win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Group, e.g. "Z^1 x T2^1" or "F3^w".
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Følner recipe, e.g. "tri_lger(1,1)".
    #[arg(long, global = true)]
    pub recipe: Option<String>,
    /// Construction, e.g. "fpw(3)" or "product(1,1)".
    #[arg(long = "construct", global = true)]
    pub construction: Option<String>,
    /// Window indices: "1..10", "4" or "1,3,5".
    #[arg(long = "N", global = true)]
    pub n: Option<String>,
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Work budget for searches; defaults to $SUMSETS_BUDGET or 10^8.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Element cap for materialized windows.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group invariants.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Følner sequence diagnostics.
    #[command(subcommand)]
    Folner(FolnerCmd),
    /// α of a group, or measured doubling overlaps of a recipe.
    Alpha,
    /// Prefix densities of a construction.
    Density,
    /// Build a construction and report its trace and densities.
    Construct {
        /// Construction name and parameters, e.g. `fpw 3` or `product(1,2)`.
        name: Vec<String>,
    },
    /// Search for `t + B + B ⊂ A` inside a window.
    Search(SearchArgs),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Tables recomputed from scratch.
    #[command(subcommand)]
    Table(TableCmd),
    /// Data for figures.
    #[command(subcommand, name = "plot-data")]
    PlotData(PlotCmd),
    /// Re-parse and re-check a JSON report.
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    Info,
}

#[derive(Debug, Subcommand)]
pub enum FolnerCmd {
    Defects,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Kernel and halving asymptotics of one recipe, or of the shipped suite.
    Appendix,
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    /// Measured overlaps against α_G for the four example groups.
    Intro,
}

#[derive(Debug, Subcommand)]
pub enum PlotCmd {
    /// Stripe rectangles of a product construction.
    Sec45,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Target size of `B`.
    #[arg(long)]
    pub k: Option<usize>,
    /// `none`, `fixed:<element>` or `pool:<N>`.
    #[arg(long)]
    pub shift: Option<String>,
    /// Only sums of distinct elements are required.
    #[arg(long)]
    pub restricted: bool,
    /// Exhaust the window and report the largest achievable size.
    #[arg(long)]
    pub certify: bool,
    /// Assert the outcome; the exit code reflects it.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

impl Cli {
    fn flags(&self) -> ExperimentConfig {
        let c = &self.common;
        let mut cfg = ExperimentConfig {
            group: c.group.clone(),
            recipe: c.recipe.clone(),
            construction: c.construction.clone(),
            n: c.n.clone(),
            tolerance: c.tolerance.clone(),
            budget: c.budget,
            cap: c.cap,
            format: c.format,
            ..Default::default()
        };
        match &self.command {
            Command::Construct { name } if !name.is_empty() => {
                cfg.construction = Some(match name.as_slice() {
                    [one] => one.clone(),
                    [head, rest @ ..] => format!("{head}({})", rest.join(",")),
                    [] => unreachable!(),
                });
            }
            Command::Search(s) => {
                cfg.k = s.k;
                cfg.shift = s.shift.clone();
                cfg.restricted = s.restricted.then_some(true);
            }
            _ => {}
        }
        cfg
    }
}

/// Exit code for a failed run.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::WindowTooLarge { .. }) => EXIT_CAP,
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(
            Error::Parse(_)
            | Error::SpecMismatch { .. }
            | Error::InvalidSpec(_)
            | Error::InvalidElement { .. }
            | Error::DyadicOverflow(_)
            | Error::Constraint(_)
            | Error::Unsupported(_)
            | Error::OutOfRange(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn execute(cli: &Cli, cfg: &ExperimentConfig) -> Result<Output> {
    match &cli.command {
        Command::Group(GroupCmd::Info) => commands::group_info(cfg),
        Command::Folner(FolnerCmd::Defects) => commands::folner_defects(cfg),
        Command::Alpha => commands::alpha(cfg),
        Command::Density => commands::density(cfg),
        Command::Construct { .. } => commands::construct(cfg),
        Command::Search(s) => commands::search(cfg, s.certify, s.expect),
        Command::Verify(VerifyCmd::Appendix) => commands::verify_appendix(cfg),
        Command::Table(TableCmd::Intro) => commands::table_intro(cfg),
        Command::PlotData(PlotCmd::Sec45) => commands::plot_sec45(cfg),
        Command::Validate { .. } => unreachable!("handled before dispatch"),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_inner(cli: &Cli) -> Result<i32> {
    if let Command::Validate { file } = &cli.command {
        report::validate(&std::fs::read_to_string(file)?)?;
        println!("{}: valid", file.display());
        return Ok(EXIT_OK);
    }
    let mut cfg = cli.flags();
    if let Some(path) = &cli.common.config {
        let (merged, warnings) = cfg.overlay(ExperimentConfig::from_file(path)?);
        for w in warnings {
            log::warn!("{w}");
        }
        cfg = merged;
    }
    if let Some(cap) = cfg.cap {
        sumsets_core::set::set_element_cap(cap);
    }
    let out = execute(cli, &cfg)?;
    let default_format = match cli.command {
        Command::PlotData(_) => Format::Csv,
        _ => Format::Json,
    };
    let text = match cfg.format.unwrap_or(default_format) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report::envelope(&out, &cfg)?)?;
            s.push('\n');
            s
        }
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| UsageError(format!("{} has no CSV form", out.command)))?,
    };
    emit(&text, cli.common.output.as_ref())?;
    Ok(if out.budget_exhausted {
        EXIT_BUDGET
    } else if out.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

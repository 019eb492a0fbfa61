//! Command-line front end. Every command writes a JSON report (stdout unless `--json` is
//! given) and exits with 0 when all checks pass, 1 when a check fails and 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{max_gap, verify_grid, write_csv, Case, GridSpec, JoinBoundResult, OracleConfig};
use crate::catalog::{self, achievable_pairs_table, Params, ENTRIES};
use crate::config::RunConfig;
use crate::error::{ProjError, Result};
use crate::report::{to_json_string, SCHEMA_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "projkit", version, about = "Alpha invariants of projections in truncated sequence algebras")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Run settings; each flag overrides the matching key of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with keys seed, trunc, fiber_dim, budget, samples, inner_grid, outer_grid,
    /// delta_grid and a [tolerances] table.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of explicit fibers N.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    #[arg(long, global = true)]
    pub fiber_dim: Option<usize>,
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Random elements per regularity estimate.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub inner_grid: Option<usize>,
    #[arg(long, global = true)]
    pub outer_grid: Option<usize>,
    #[arg(long, global = true)]
    pub delta_grid: Option<usize>,
    /// Output file for the JSON report.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { cfg.$f = v; })*};
        }
        set!(seed, trunc, fiber_dim, budget, samples, inner_grid, outer_grid, delta_grid);
        if cfg.trunc < 8 {
            return Err(ProjError::Param(format!("trunc = {} must be at least 8", cfg.trunc)));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog entries.
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Join-bound verification against the numerical oracle.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Achievable (alpha(p), alpha(pbar)) pairs.
    #[command(subcommand)]
    Pairs(PairsCmd),
    /// Full regression suite.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    /// Build and measure one entry.
    Run {
        id: String,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// List entries and their default parameters.
    List,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    Verify {
        /// I or II.
        #[arg(long)]
        case: String,
        /// `default` or `theta=a,b;t1=c,d;t2=e`.
        #[arg(long, default_value = "default")]
        grid: String,
        /// CSV output of the grid rows.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PairsCmd {
    Table {
        /// Comma-separated values of alpha(p); `inf` allowed.
        #[arg(long, default_value = "1,2,4,inf")]
        s: String,
        /// Comma-separated values of alpha(pbar); `inf` allowed.
        #[arg(long, default_value = "1,2,4,inf")]
        t: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    All,
}

#[derive(Debug, Serialize)]
struct ErrorReport<'a> {
    schema: &'static str,
    command: &'a str,
    error: String,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct BoundsReport {
    schema: &'static str,
    case: Case,
    grid: GridSpec,
    rows: Vec<JoinBoundResult>,
    max_gap: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct EntryListing {
    schema: &'static str,
    entries: &'static [catalog::CatalogEntry],
}

/// Usage errors: the request itself is malformed or names something that does not exist.
fn is_usage(e: &ProjError) -> bool {
    matches!(e, ProjError::UnknownId(_) | ProjError::Param(_) | ProjError::Config(_) | ProjError::Unsupported(_))
}

fn emit(json: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{json}\n"))?,
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{json}")?;
        }
    }
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|v| !v.trim().is_empty()).map(catalog::parse_value).collect()
}

/// Runs the command and returns `(json, pass)`.
fn execute(cmd: &Command, cfg: &RunConfig) -> Result<(String, bool)> {
    match cmd {
        Command::Example(ExampleCmd::List) => Ok((to_json_string(&EntryListing { schema: SCHEMA_VERSION, entries: ENTRIES })?, true)),
        Command::Example(ExampleCmd::Run { id, params }) => {
            let p = Params::parse_pairs(params)?;
            let rep = catalog::run_example(id, &p, cfg, cfg.seed)?;
            Ok((to_json_string(&rep)?, rep.pass))
        }
        Command::Bounds(BoundsCmd::Verify { case, grid, csv }) => {
            let case: Case = case.parse()?;
            let grid = GridSpec::parse(grid)?;
            let ocfg = OracleConfig::from(cfg);
            let rows = verify_grid(case, &grid, &ocfg)?;
            if let Some(path) = csv {
                write_csv(&rows, std::fs::File::create(path)?)?;
            }
            let gap = max_gap(&rows);
            let pass = gap <= ocfg.tol && rows.iter().all(|r| !r.flagged);
            let rep = BoundsReport { schema: SCHEMA_VERSION, case, grid, rows, max_gap: gap, tolerance: ocfg.tol, pass };
            Ok((to_json_string(&rep)?, pass))
        }
        Command::Pairs(PairsCmd::Table { s, t }) => {
            let table = achievable_pairs_table(&parse_list(s)?, &parse_list(t)?, cfg);
            Ok((to_json_string(&table)?, table.pass))
        }
        Command::Suite(SuiteCmd::All) => {
            let rep = catalog::suite_all(cfg)?;
            Ok((to_json_string(&rep)?, rep.pass))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Example(ExampleCmd::Run { .. }) => "example run",
        Command::Example(ExampleCmd::List) => "example list",
        Command::Bounds(_) => "bounds verify",
        Command::Pairs(_) => "pairs table",
        Command::Suite(_) => "suite all",
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let name = command_name(&cli.command);
    let outcome = cli.run.resolve().and_then(|cfg| execute(&cli.command, &cfg));
    let (json, code) = match outcome {
        Ok((json, pass)) => (json, if pass { EXIT_PASS } else { EXIT_FAIL }),
        Err(e) => {
            eprintln!("projkit: {e}");
            let code = if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL };
            let rep = ErrorReport { schema: SCHEMA_VERSION, command: name, error: e.to_string(), pass: false };
            (to_json_string(&rep).unwrap_or_default(), code)
        }
    };
    match emit(&json, cli.run.json.as_deref()) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("projkit: cannot write report: {e}");
            EXIT_FAIL
        }
    }
}

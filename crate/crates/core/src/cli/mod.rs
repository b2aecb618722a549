//! The `hbps` command line: argument parsing, job configuration, caching and
//! dispatch to the library.

mod cache;
mod render;
mod suites;
pub mod tables;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::completions::NumericError;
use crate::invariants::{
    two_path_check, wallcross_transport, GeneratingFunction, InvariantError, InvariantRecord,
};
use crate::lattice::{q_text, walls, ChernVector, DivisorClass, LatticeError, Polarization, Side, Surface, Q};
use crate::qseries::QExp;

pub use cache::{cache_key, Cache, CACHE_ENV};
pub use render::Format;
pub use suites::{run_suite, Suite, SuiteItem, SuiteReport};
pub use tables::{paper_table, PaperRows, PaperTable, TableReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid argument: {0}")]
    Usage(String),
}

impl CliError {
    /// Short machine-readable kind used in the structured error message.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Invariant(_) => "invariant",
            CliError::Lattice(_) => "lattice",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Usage(_) => "usage",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hbps", version, about = "Refined BPS invariants of sheaves on Hirzebruch surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers and Euler numbers for a range of c2.
    Betti(JobArgs),
    /// Euler numbers only.
    Euler(JobArgs),
    /// The generating function f or h as a truncated series.
    Series {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, value_enum, default_value_t = Which::F)]
        which: Which,
    },
    /// Walls of marginal stability for each charge in the range.
    Walls(JobArgs),
    /// Transport the generating function from one polarization to --J.
    Wallcross {
        #[command(flatten)]
        job: JobArgs,
        /// Starting polarization m,n,side.
        #[arg(long, default_value = "0,1,plus", allow_hyphen_values = true)]
        from: String,
        /// Optional intermediate polarization for a two-path comparison.
        #[arg(long, allow_hyphen_values = true)]
        via: Option<String>,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        job: JobArgs,
        /// Random points per law or parameter set.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Reproduce Tables 1-3 for Σ₁, r = 3.
    Tables {
        /// 1, 2, 3 or all.
        #[arg(long, default_value = "all")]
        table: String,
        #[command(flatten)]
        job: JobArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    F,
    H,
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub rank: u32,
    /// c1 = bC - af given as b,a.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub c1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c2_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2_max: Option<i64>,
    /// Polarization J = mC + (mℓ+n)f given as m,n,side with side plus|minus|exact.
    #[arg(long = "J", default_value = "1,0,plus")]
    pub j: String,
    /// Truncation order of the series (derived from c2-max when omitted).
    #[arg(long)]
    pub qmax: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 20120101)]
    pub seed: u64,
}

/// Everything that determines the output of a command; `jobs` and the cache
/// location are deliberately absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobConfig {
    pub ell: u32,
    pub r: u32,
    pub c1: DivisorClass,
    pub c2_min: i64,
    pub c2_max: i64,
    pub j: Polarization,
    #[serde(with = "q_text")]
    pub qmax: Q,
    pub format: Format,
    pub seed: u64,
}

fn parse_pair(s: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [b, a] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected b,a, got '{s}'")));
    };
    let parse = |x: &str| x.parse::<i64>().map_err(|e| CliError::Usage(format!("'{x}': {e}")));
    Ok((parse(b)?, parse(a)?))
}

pub fn parse_polarization(s: &str) -> Result<Polarization, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let (m, n, side) = match parts.as_slice() {
        [m, n] => (*m, *n, Side::Plus),
        [m, n, side] => (*m, *n, side.parse::<Side>().map_err(CliError::Usage)?),
        _ => return Err(CliError::Usage(format!("expected m,n[,side], got '{s}'"))),
    };
    let m = q_text::parse(m).map_err(CliError::Usage)?;
    let n = q_text::parse(n).map_err(CliError::Usage)?;
    Ok(Polarization::new(m, n, side)?)
}

/// Lowest integral `c₂` with `Δ ≥ 0`.
fn lowest_c2(s: &Surface, r: u32, c1: DivisorClass) -> Result<i64, CliError> {
    let delta = |c2| -> Result<Q, CliError> { Ok(ChernVector::integral(r, c1, c2)?.discriminant(s)) };
    let mut c2 = 0;
    while delta(c2)? < Q::from_integer(0) {
        c2 += 1;
    }
    while delta(c2 - 1)? >= Q::from_integer(0) {
        c2 -= 1;
    }
    Ok(c2)
}

impl JobConfig {
    pub fn from_args(args: &JobArgs, default_format: Format) -> Result<Self, CliError> {
        let ell = args.ell.unwrap_or(1);
        let s = Surface::new(ell)?;
        let (b, a) = parse_pair(&args.c1)?;
        let c1 = DivisorClass::from_beta_alpha(b, a);
        let r = args.rank;
        if !(1..=3).contains(&r) {
            return Err(CliError::Usage(format!("rank {r} is not supported (1, 2 or 3)")));
        }
        let j = parse_polarization(&args.j)?;
        let c2_min = match args.c2_min {
            Some(c) => c,
            None => lowest_c2(&s, r, c1)?,
        };
        let c2_max = args.c2_max.unwrap_or(c2_min + 3);
        if c2_max < c2_min {
            return Err(CliError::Usage(format!("c2-max {c2_max} < c2-min {c2_min}")));
        }
        let qmax = match &args.qmax {
            Some(q) => q_text::parse(q).map_err(CliError::Usage)?,
            None => {
                // r·Δ_max − r/6 + 1 for h, i.e. r·Δ_max + 1 for f
                let top = ChernVector::integral(r, c1, c2_max)?;
                (top.discriminant(&s) * r as i64 + 1).max(Q::from_integer(1))
            }
        };
        Ok(JobConfig {
            ell,
            r,
            c1,
            c2_min,
            c2_max,
            j,
            qmax,
            format: args.format.unwrap_or(default_format),
            seed: args.seed,
        })
    }

    pub fn surface(&self) -> Result<Surface, CliError> {
        Ok(Surface::new(self.ell)?)
    }
}

/// Rendered result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CliOutput {
    pub text: String,
    /// `false` when a verification suite failed.
    pub pass: bool,
}

fn records(cfg: &JobConfig) -> Result<Vec<InvariantRecord>, CliError> {
    let gf = GeneratingFunction::new(cfg.surface()?, cfg.r, cfg.c1, cfg.j, cfg.c2_max)?;
    let rows: Result<Vec<_>, InvariantError> = (cfg.c2_min..=cfg.c2_max).into_par_iter().map(|c2| gf.record(c2)).collect();
    Ok(rows?)
}

fn cmd_series(cfg: &JobConfig, which: Which) -> Result<CliOutput, CliError> {
    let gf = GeneratingFunction::with_qmax(cfg.surface()?, cfg.r, cfg.c1, cfg.j, cfg.qmax)?;
    let series = match which {
        Which::F => gf.f().clone(),
        Which::H => gf.h(),
    };
    Ok(CliOutput { text: render::series(&series, cfg.format)?, pass: true })
}

fn cmd_walls(cfg: &JobConfig) -> Result<CliOutput, CliError> {
    let s = cfg.surface()?;
    let mut rows = Vec::new();
    for c2 in cfg.c2_min..=cfg.c2_max {
        let gamma = ChernVector::integral(cfg.r, cfg.c1, c2)?;
        rows.push((c2, walls(&gamma, &s)?));
    }
    Ok(CliOutput { text: render::walls(&rows, cfg.format)?, pass: true })
}

fn cmd_wallcross(cfg: &JobConfig, from: &str, via: Option<&str>) -> Result<CliOutput, CliError> {
    let s = cfg.surface()?;
    let from = parse_polarization(from)?;
    let t = wallcross_transport(&s, cfg.r, cfg.c1, &from, &cfg.j, cfg.qmax)?;
    let mut rows = Vec::new();
    for c2 in cfg.c2_min..=cfg.c2_max {
        let gamma = ChernVector::integral(cfg.r, cfg.c1, c2)?;
        let delta = crate::invariants::transported_omega(&t, &gamma, &s)?;
        rows.push(json!({ "c2": c2, "delta_omega": delta.reduce().to_string() }));
    }
    let mut doc = json!({
        "ell": cfg.ell,
        "r": cfg.r,
        "c1": [cfg.c1.beta_alpha().0, cfg.c1.beta_alpha().1],
        "from": from.to_string(),
        "to": cfg.j.to_string(),
        "walls": t.walls.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "rows": rows,
    });
    let mut pass = true;
    if let Some(via) = via {
        let via = parse_polarization(via)?;
        let check = two_path_check(&s, cfg.r, cfg.c1, &from, &via, &cfg.j, cfg.qmax)?;
        pass = check.holds;
        doc["two_path"] = serde_json::to_value(&check)?;
    }
    Ok(CliOutput { text: render::document(&doc, cfg.format)?, pass })
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Betti(_) => "betti".into(),
        Command::Euler(_) => "euler".into(),
        Command::Series { which, .. } => format!("series-{}", if *which == Which::F { "f" } else { "h" }),
        Command::Walls(_) => "walls".into(),
        Command::Wallcross { from, via, .. } => format!("wallcross:{from}:{}", via.as_deref().unwrap_or("")),
        Command::Check { suite, points, .. } => format!("check-{suite:?}:{points:?}"),
        Command::Tables { table, .. } => format!("tables:{table}"),
    }
}

fn job_args(c: &Command) -> &JobArgs {
    match c {
        Command::Betti(j) | Command::Euler(j) | Command::Walls(j) => j,
        Command::Series { job, .. } | Command::Wallcross { job, .. } | Command::Check { job, .. } | Command::Tables { job, .. } => job,
    }
}

fn default_format(c: &Command) -> Format {
    match c {
        Command::Tables { .. } => Format::Md,
        _ => Format::Json,
    }
}

fn execute(command: &Command, cfg: &JobConfig) -> Result<CliOutput, CliError> {
    match command {
        Command::Betti(_) => Ok(CliOutput { text: render::records(&records(cfg)?, cfg.format, false), pass: true }),
        Command::Euler(_) => Ok(CliOutput { text: render::records(&records(cfg)?, cfg.format, true), pass: true }),
        Command::Series { which, .. } => cmd_series(cfg, *which),
        Command::Walls(_) => cmd_walls(cfg),
        Command::Wallcross { from, via, .. } => cmd_wallcross(cfg, from, via.as_deref()),
        Command::Check { suite, job, points } => {
            let report = run_suite(*suite, job.ell, cfg.qmax_for_suite(job), *points, cfg.seed)?;
            Ok(CliOutput { text: render::document(&serde_json::to_value(&report)?, cfg.format)?, pass: report.pass })
        }
        Command::Tables { table, .. } => {
            let which: Vec<PaperTable> = match table.as_str() {
                "all" => PaperTable::ALL.to_vec(),
                t => vec![t.parse::<PaperTable>().map_err(CliError::Usage)?],
            };
            let mut text = String::new();
            let mut pass = true;
            for t in which {
                let report = tables::reproduce(t)?;
                pass &= report.matches_golden && report.matches_paper;
                text.push_str(&render::table_report(&report, cfg.format)?);
            }
            Ok(CliOutput { text, pass })
        }
    }
}

impl JobConfig {
    fn qmax_for_suite(&self, args: &JobArgs) -> Option<QExp> {
        args.qmax.as_ref().map(|_| self.qmax)
    }
}

/// Run a parsed command line, consulting the cache when a directory is configured.
pub fn run(cli: &Cli) -> Result<CliOutput, CliError> {
    let args = job_args(&cli.command);
    let cfg = JobConfig::from_args(args, default_format(&cli.command))?;
    let name = command_name(&cli.command);
    let cache = Cache::from_option(args.cache_dir.clone());
    let key = cache_key(&name, &cfg)?;
    if let Some(c) = &cache {
        if let Some(hit) = c.load(&key)? {
            return Ok(hit);
        }
    }
    let pool = thread_pool(args.jobs)?;
    let out = pool.install(|| execute(&cli.command, &cfg))?;
    if let Some(c) = &cache {
        c.store(&key, &out)?;
    }
    Ok(out)
}

/// Entry point of the `hbps` binary.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let msg: Value = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

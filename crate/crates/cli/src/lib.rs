//! Command-line surface of the hit problem engine.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors (including slices over the column budget).

pub mod cache;
pub mod error;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use peterson::f2poly::{Monomial, WeightVector};
use peterson::glinv::{invariants_threaded, stability_report_threaded};
use peterson::hitsolver::{Part, Solver, DEFAULT_MAX_COLUMNS};
use peterson::kameko::{kameko_matrix, verify_split};
use peterson::reductions::{execute, plan, PlanHints, Strategy};
use peterson::HitError;

use cache::{Cache, CacheKey, CACHE_DIR_ENV};
use error::{CliError, CliResult};
use report::{DimReport, InvariantReport, KamekoReport, PlanReport, WeightReport};

#[derive(Debug, Parser)]
#[command(name = "peterson", version, about = "Admissible monomial bases and cohit dimensions over the Steenrod algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest number of columns a single direct elimination may use.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COLUMNS)]
    pub max_columns: u64,
    /// Worker threads for per-generator matrix builds.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cache directory.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    All,
    #[value(alias = "zero-part")]
    Zero,
    #[value(alias = "plus-part")]
    Plus,
}

impl From<PartArg> for Part {
    fn from(p: PartArg) -> Part {
        match p {
            PartArg::All => Part::All,
            PartArg::Zero => Part::Zero,
            PartArg::Plus => Part::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    /// Use the planner: vanishing, inductive formula, Kameko isomorphism,
    /// split, then direct elimination.
    Auto,
    /// Eliminate directly over every support.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(alias = "paper")]
    Published,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the cohit space in degree D.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = PartArg::All)]
        part: PartArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Print the computation route.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        json: bool,
    },
    /// Admissible monomials in degree D.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = PartArg::All)]
        part: PartArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Admissible monomials of one weight vector.
    Weight {
        #[arg(long)]
        n: usize,
        /// Weight vector, e.g. "3,4,4,3,1".
        #[arg(long)]
        omega: String,
        /// Restrict to monomials containing every variable.
        #[arg(long)]
        plus: bool,
        #[arg(long)]
        json: bool,
    },
    /// The squaring map from degree 2D + N onto degree D.
    Kameko {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        /// Check total = zero part + kernel on the plus part + image.
        #[arg(long)]
        verify_split: bool,
        #[arg(long)]
        json: bool,
    },
    /// Show the computation plan without running it.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        json: bool,
    },
    /// GL(N, F2)-invariant classes in degree D, or along a family of degrees.
    Invariants {
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "family")]
        d: Option<u32>,
        /// Report along d_s = N (2^s - 1) + M 2^s.
        #[arg(long, value_name = "M", conflicts_with = "d")]
        family: Option<u32>,
        /// Largest s computed for --family.
        #[arg(long, default_value_t = 2)]
        max_s: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a fixed table of checks against known values.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Published)]
        suite: Suite,
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a command: success or a failed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

pub struct Context {
    pub solver: Solver,
    pub hints: PlanHints,
    pub threads: usize,
    pub cache: Option<Cache>,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> Self {
        let threads = global
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        let cache = if global.no_cache { None } else { global.cache_dir.clone().or_else(Cache::default_root).map(Cache::new) };
        Context {
            solver: Solver::with_max_columns(global.max_columns),
            hints: PlanHints { max_columns: global.max_columns, allow_formula: true },
            threads,
            cache,
        }
    }
}

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn strings(basis: &[Monomial]) -> Vec<String> {
    basis.iter().map(|m| m.to_string()).collect()
}

fn small(d: u64) -> CliResult<u32> {
    u32::try_from(d).map_err(|_| CliError::Usage(format!("degree {d} is too large for a basis")))
}

fn infeasible_hint(err: CliError, n: usize, d: u64, hints: &PlanHints) -> CliError {
    match err {
        CliError::Hit(e @ HitError::Infeasible { .. }) => {
            let route = plan(n, d, hints);
            let advice = if route.is_feasible() {
                format!("; the planner can reach it:\n{route}\nrerun with --strategy auto")
            } else {
                "; no feasible route, raise --max-columns".to_string()
            };
            CliError::Usage(format!("{e}{advice}"))
        }
        other => other,
    }
}

/// The admissible basis of `(n, d)` restricted to `part`, through the cache.
fn basis_of(ctx: &Context, n: usize, d: u32, part: Part) -> CliResult<Vec<Monomial>> {
    let compute = || -> CliResult<Vec<Monomial>> {
        let hints = PlanHints { allow_formula: false, ..ctx.hints };
        let strategy = plan(n, u64::from(d), &hints);
        let outcome = execute(&strategy, &ctx.solver, part)?;
        outcome.basis.ok_or_else(|| CliError::Usage(format!("no basis route for ({n},{d})")))
    };
    match &ctx.cache {
        Some(cache) => Ok(cache.get_or_compute(&CacheKey::new(n, d, part.to_string()), compute)?.0.basis),
        None => compute(),
    }
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(|e| CliError::io("<stdout>", e))
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> CliResult<()> {
    writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
}

#[allow(clippy::too_many_arguments)]
fn cmd_dim(
    ctx: &Context,
    out: &mut dyn Write,
    n: usize,
    d: u64,
    part: Part,
    strategy: StrategyArg,
    explain: bool,
    json: bool,
) -> CliResult<()> {
    let start = Instant::now();
    let (dim, route) = match strategy {
        StrategyArg::Direct => {
            let d32 = small(d)?;
            let columns = Solver::plus_columns(n, d32);
            if columns > ctx.hints.max_columns && !peterson::arith::is_trivial_degree(n, d32) {
                let e = HitError::Infeasible { n, d: d32, columns, limit: ctx.hints.max_columns };
                return Err(infeasible_hint(e.into(), n, d, &ctx.hints));
            }
            let dim = ctx.solver.cohit_dim(n, d32, part)?;
            (dim, Strategy::Direct { n, d, columns, feasible: true })
        }
        StrategyArg::Auto => {
            let hints = PlanHints { allow_formula: part == Part::All, ..ctx.hints };
            let route = plan(n, d, &hints);
            let cached = match (&ctx.cache, u32::try_from(d)) {
                (Some(cache), Ok(d32)) => cache.load(&CacheKey::new(n, d32, part.to_string()))?,
                _ => None,
            };
            let dim = match cached {
                Some(entry) => entry.dim as u64,
                None => {
                    let outcome = execute(&route, &ctx.solver, part).map_err(|e| infeasible_hint(e.into(), n, d, &ctx.hints))?;
                    if let (Some(cache), Some(basis), Ok(d32)) = (&ctx.cache, &outcome.basis, u32::try_from(d)) {
                        cache.store(&CacheKey::new(n, d32, part.to_string()), basis, ms(start))?;
                    }
                    outcome.dim
                }
            };
            (dim, route)
        }
    };
    if json {
        let report = DimReport {
            n,
            d,
            part,
            dim,
            basis: None,
            strategy: explain.then(|| route.steps()),
            elapsed_ms: ms(start),
        };
        return emit_json(out, &report);
    }
    line(out, dim)?;
    if explain {
        line(out, route)?;
    }
    Ok(())
}

fn cmd_basis(ctx: &Context, out: &mut dyn Write, n: usize, d: u32, part: Part, format: Format) -> CliResult<()> {
    let start = Instant::now();
    let basis = basis_of(ctx, n, d, part)?;
    match format {
        Format::Text => {
            for m in &basis {
                line(out, m)?;
            }
            Ok(())
        }
        Format::Json => emit_json(
            out,
            &DimReport {
                n,
                d: u64::from(d),
                part,
                dim: basis.len() as u64,
                basis: Some(strings(&basis)),
                strategy: None,
                elapsed_ms: ms(start),
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["index", "monomial", "weight"])?;
            for (i, m) in basis.iter().enumerate() {
                w.write_record([i.to_string(), m.to_string(), m.weight_vector().to_string()])?;
            }
            w.flush().map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn cmd_weight(ctx: &Context, out: &mut dyn Write, n: usize, omega: &str, plus: bool, json: bool) -> CliResult<()> {
    let start = Instant::now();
    let omega: WeightVector = omega.parse().map_err(|e: HitError| CliError::Usage(e.to_string()))?;
    let part = if plus { Part::Plus } else { Part::All };
    let space = ctx.solver.weight_space(n, &omega, part)?;
    if json {
        let report = WeightReport {
            n,
            omega: omega.to_string(),
            part,
            dim: space.dim(),
            basis: strings(&space.basis),
            elapsed_ms: ms(start),
        };
        return emit_json(out, &report);
    }
    line(out, format!("weight {omega} in {n} variables [{part}]: {}", space.dim()))?;
    for m in &space.basis {
        line(out, m)?;
    }
    Ok(())
}

fn cmd_kameko(ctx: &Context, out: &mut dyn Write, n: usize, d: u32, verify: bool, json: bool) -> CliResult<Status> {
    let start = Instant::now();
    if verify {
        let report = verify_split(&ctx.solver, n, d)?;
        if json {
            emit_json(out, &report)?;
        } else {
            line(out, &report)?;
        }
        return Ok(if report.pass { Status::Ok } else { Status::VerificationFailed });
    }
    let slice = kameko_matrix(&ctx.solver, n, d)?;
    let report = KamekoReport {
        n,
        source_degree: slice.source_degree,
        target_degree: slice.target_degree,
        source_dim: slice.source.len(),
        target_dim: slice.target.len(),
        rank: slice.rank,
        kernel_dim: slice.kernel_dim(),
        surjective: slice.is_surjective(),
        elapsed_ms: ms(start),
    };
    if json {
        emit_json(out, &report)?;
    } else {
        line(
            out,
            format!(
                "({n},{}) -> ({n},{}): source {} target {} rank {} kernel {}{}",
                report.source_degree,
                report.target_degree,
                report.source_dim,
                report.target_dim,
                report.rank,
                report.kernel_dim,
                if report.surjective { ", onto" } else { "" }
            ),
        )?;
    }
    Ok(Status::Ok)
}

fn cmd_reduce(ctx: &Context, out: &mut dyn Write, n: usize, d: u64, json: bool) -> CliResult<()> {
    let strategy = plan(n, d, &ctx.hints);
    if json {
        let report = PlanReport { n, d, feasible: strategy.is_feasible(), steps: strategy.steps(), strategy };
        return emit_json(out, &report);
    }
    line(out, &strategy)?;
    if !strategy.is_feasible() {
        line(out, "some leaves exceed --max-columns")?;
    }
    Ok(())
}

fn cmd_invariants(
    ctx: &Context,
    out: &mut dyn Write,
    n: usize,
    d: Option<u32>,
    family: Option<u32>,
    max_s: u32,
    json: bool,
) -> CliResult<()> {
    if let Some(m) = family {
        let report = stability_report_threaded(&ctx.solver, n, m, max_s, ctx.threads)?;
        return if json { emit_json(out, &report) } else { write!(out, "{report}").map_err(|e| CliError::io("<stdout>", e)) };
    }
    let d = d.ok_or_else(|| CliError::Usage("--d or --family is required".into()))?;
    let start = Instant::now();
    let space = invariants_threaded(&ctx.solver, n, d, ctx.threads)?;
    let cohit_dim = ctx.solver.admissible_basis(n, d)?.dim();
    if json {
        let report = InvariantReport {
            n,
            d,
            dim: space.dim(),
            cohit_dim,
            basis: space.basis.iter().map(|p| p.to_string()).collect(),
            elapsed_ms: ms(start),
        };
        return emit_json(out, &report);
    }
    line(out, space.dim())
}

fn cmd_verify(ctx: &Context, out: &mut dyn Write, json: bool) -> CliResult<Status> {
    let report = suite::published(&ctx.solver, &ctx.hints, ctx.threads);
    if json {
        emit_json(out, &report)?;
    } else {
        line(out, &report)?;
    }
    Ok(if report.pass { Status::Ok } else { Status::VerificationFailed })
}

/// Runs a parsed command, writing reports to `out`.
pub fn execute_command(cli: &Cli, out: &mut dyn Write) -> CliResult<Status> {
    let ctx = Context::new(&cli.global);
    match cli.command {
        Command::Dim { n, d, part, strategy, explain, json } => {
            cmd_dim(&ctx, out, n, d, part.into(), strategy, explain, json)?
        }
        Command::Basis { n, d, part, format } => cmd_basis(&ctx, out, n, d, part.into(), format)?,
        Command::Weight { n, ref omega, plus, json } => cmd_weight(&ctx, out, n, omega, plus, json)?,
        Command::Kameko { n, d, verify_split, json } => return cmd_kameko(&ctx, out, n, d, verify_split, json),
        Command::Reduce { n, d, json } => cmd_reduce(&ctx, out, n, d, json)?,
        Command::Invariants { n, d, family, max_s, json } => cmd_invariants(&ctx, out, n, d, family, max_s, json)?,
        Command::Verify { suite: Suite::Published, json } => return cmd_verify(&ctx, out, json),
    }
    Ok(Status::Ok)
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute_command(&cli, &mut out) {
        Ok(Status::Ok) => 0,
        Ok(Status::VerificationFailed) => 1,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            2
        }
    }
}

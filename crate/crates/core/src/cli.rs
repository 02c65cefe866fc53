//! The `tardos` command line.
//!
//! Every subcommand writes its table to `--out` (stdout when absent) and a
//! one-line summary to stderr. Exit status: 0 on success, 2 for invalid or
//! inconsistent arguments, 3 for numerical failures, 4 for I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    convergence_report, dl_sweep, simulate, write_convergence_csv, write_sweep_csv, Attack,
    FamilyKind, MuReport, StrategyChoice, REFERENCE_FAMILY,
};
use crate::attacks::StrategyProfile;
use crate::distributions::{
    arcsine_cdf, points_for_colluders, BiasDistribution, ContinuousArcsine, CutoffSchedule,
};
use crate::error::Error;
use crate::format::sig17;
use crate::scheme::{choose_parameters, SchemeParameters};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x7A2D05;

#[derive(Debug, Parser)]
#[command(
    name = "tardos",
    version,
    about = "Symmetric Tardos fingerprinting toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the points and probabilities of a discrete family
    Dist(DistArgs),
    /// Evaluate CDFs on a grid, together with the plain arcsine CDF
    Cdf(CdfArgs),
    /// Expected coalition score and d_l for one configuration
    Mu(MuArgs),
    /// d_l for several families over a range of coalition sizes
    Sweep(SweepArgs),
    /// Compare exact Gauss-Legendre parameters with their large-c forms
    Converge(ConvergeArgs),
    /// Heuristic code length and threshold
    Params(ParamsArgs),
    /// Monte Carlo false-positive / false-negative rates
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct DistributionArgs {
    /// gl, darcsine, cheb or arcsine
    #[arg(long, default_value = "gl")]
    family: String,
    /// Number of atoms of a discrete family
    #[arg(long)]
    points: Option<usize>,
    /// Cutoff of the continuous arcsine family
    #[arg(long)]
    cutoff: Option<f64>,
    /// Cutoff schedule for the continuous family (none, power43)
    #[arg(long)]
    schedule: Option<String>,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[command(flatten)]
    dist: DistributionArgs,
    /// Design for this many colluders (ceil(c/2) points)
    #[arg(long)]
    colluders: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CdfArgs {
    /// Comma-separated families
    #[arg(long, default_value = "gl,arcsine", value_delimiter = ',')]
    families: Vec<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    colluders: Option<usize>,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    schedule: Option<String>,
    /// Grid resolution: p = i / grid for i = 0..=grid
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct StrategyArgs {
    /// interleaving, majority, minority, coin-flip or minimizing
    #[arg(long)]
    strategy: Option<String>,
    /// CSV file of (sigma, theta) rows
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MuArgs {
    #[command(flatten)]
    dist: DistributionArgs,
    #[arg(long)]
    colluders: usize,
    #[command(flatten)]
    strategy: StrategyArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(
        long,
        default_value = "gl,darcsine,cheb,arcsine",
        value_delimiter = ','
    )]
    families: Vec<String>,
    #[arg(long, default_value_t = 2)]
    cmin: usize,
    #[arg(long)]
    cmax: usize,
    /// A named strategy or `minimizing`
    #[arg(long, default_value = "minimizing")]
    strategy: String,
    #[arg(long, default_value = "power43")]
    schedule: String,
    /// Worker threads (0 = all cores); output does not depend on it
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    /// Comma-separated point counts
    #[arg(long, required = true, value_delimiter = ',')]
    points: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[command(flatten)]
    dist: DistributionArgs,
    #[arg(long)]
    colluders: usize,
    #[arg(long)]
    users: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon1: f64,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Comma-separated pirate indices (default: the first `colluders` users)
    #[arg(long, value_delimiter = ',')]
    coalition: Option<Vec<usize>>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output file (stdout when omitted); always JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(Error),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(e) => write!(f, "computation failed: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::Io(io.to_string()),
            Error::Csv(c) => CliError::Io(c.to_string()),
            Error::Json(j) => CliError::Io(j.to_string()),
            Error::InvalidParameter(_)
            | Error::InvalidCutoff(_)
            | Error::UnknownStrategy(_)
            | Error::InvalidProfile(_)
            | Error::EmptyDistribution
            | Error::DegreeTooSmall { .. }
            | Error::DegreeTooLarge { .. }
            | Error::LengthMismatch { .. }
            | Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            eprintln!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("tardos: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Dist(a) => cmd_dist(a),
        Command::Cdf(a) => cmd_cdf(a),
        Command::Mu(a) => cmd_mu(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Params(a) => cmd_params(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Io(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> CliResult<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

fn parse_family(name: &str) -> CliResult<FamilyKind> {
    Ok(name.trim().parse()?)
}

/// Resolve the distribution flags against the family, rejecting flags that
/// do not apply to it.
fn build_distribution(
    args: &DistributionArgs,
    colluders: Option<usize>,
) -> CliResult<BiasDistribution> {
    let family = parse_family(&args.family)?;
    resolve_distribution(
        family,
        args.points,
        args.cutoff,
        args.schedule.as_deref(),
        colluders,
    )
}

fn resolve_distribution(
    family: FamilyKind,
    points: Option<usize>,
    cutoff: Option<f64>,
    schedule: Option<&str>,
    colluders: Option<usize>,
) -> CliResult<BiasDistribution> {
    match family {
        FamilyKind::Discrete(f) => {
            if cutoff.is_some() || schedule.is_some() {
                return Err(CliError::Usage(format!(
                    "--cutoff/--schedule apply to the continuous arcsine family, not {}",
                    f.name()
                )));
            }
            let points = match (points, colluders) {
                (Some(p), _) => p,
                (None, Some(c)) => points_for_colluders(c),
                (None, None) => {
                    return Err(CliError::Usage(format!(
                        "{} needs --points or --colluders",
                        f.name()
                    )))
                }
            };
            Ok(f.build(points)?.into())
        }
        FamilyKind::Arcsine => {
            if points.is_some() {
                return Err(CliError::Usage(
                    "--points applies to discrete families, not arcsine".into(),
                ));
            }
            let cutoff = match (cutoff, schedule) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "give either --cutoff or --schedule, not both".into(),
                    ))
                }
                (Some(d), None) => d,
                (None, schedule) => {
                    let schedule: CutoffSchedule =
                        schedule.map(str::parse).transpose()?.unwrap_or_default();
                    match colluders {
                        Some(c) => schedule.cutoff(c),
                        None if schedule == CutoffSchedule::None => 0.0,
                        None => {
                            return Err(CliError::Usage(
                                "arcsine needs --cutoff, or --colluders to apply a schedule".into(),
                            ))
                        }
                    }
                }
            };
            Ok(ContinuousArcsine::new(cutoff)?.into())
        }
    }
}

fn strategy_choice(args: &StrategyArgs, default: &str) -> CliResult<StrategyChoice> {
    match (&args.strategy, &args.profile) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --strategy or --profile, not both".into(),
        )),
        (None, Some(path)) => {
            let file = File::open(path)
                .map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
            Ok(StrategyChoice::Custom(StrategyProfile::from_csv(file)?))
        }
        (Some(name), None) => Ok(name.parse()?),
        (None, None) => Ok(default.parse()?),
    }
}

#[derive(Serialize)]
struct DistRow<'a> {
    family: &'a str,
    c: usize,
    k: usize,
    point: f64,
    probability: f64,
    raw_normalizer: f64,
}

fn cmd_dist(a: DistArgs) -> CliResult<String> {
    if a.dist.points.is_some() && a.colluders.is_some() {
        return Err(CliError::Usage(
            "give either --points or --colluders, not both".into(),
        ));
    }
    let BiasDistribution::Discrete(d) = build_distribution(&a.dist, a.colluders)? else {
        return Err(CliError::Usage(
            "dist tabulates discrete families only (gl, darcsine, cheb)".into(),
        ));
    };
    let family = d.family().name();
    match a.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(&a.output.out)?);
            w.write_record(["family", "c", "k", "point", "probability"])
                .map_err(Error::from)?;
            for (k, p, w_k) in d.table() {
                w.write_record([
                    family.to_string(),
                    d.point_count().to_string(),
                    k.to_string(),
                    sig17(p),
                    sig17(w_k),
                ])
                .map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<DistRow> = d
                .table()
                .map(|(k, point, probability)| DistRow {
                    family,
                    c: d.point_count(),
                    k,
                    point,
                    probability,
                    raw_normalizer: d.raw_normalizer(),
                })
                .collect();
            write_json(&a.output.out, &rows)?;
        }
    }
    Ok(format!(
        "dist: {family} with {} points, raw normalizer {}",
        d.point_count(),
        sig17(d.raw_normalizer())
    ))
}

#[derive(Serialize)]
struct CdfRow {
    family: String,
    points: Option<usize>,
    cutoff: Option<f64>,
    p: f64,
    cdf: f64,
}

fn cmd_cdf(a: CdfArgs) -> CliResult<String> {
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let families = a
        .families
        .iter()
        .map(|f| parse_family(f))
        .collect::<CliResult<Vec<_>>>()?;
    let has_discrete = families
        .iter()
        .any(|f| matches!(f, FamilyKind::Discrete(_)));
    let has_arcsine = families.contains(&FamilyKind::Arcsine);
    if !has_arcsine && (a.cutoff.is_some() || a.schedule.is_some()) {
        return Err(CliError::Usage(
            "--cutoff/--schedule given but no arcsine family requested".into(),
        ));
    }
    if !has_discrete && a.points.is_some() {
        return Err(CliError::Usage(
            "--points given but no discrete family requested".into(),
        ));
    }

    let grid: Vec<f64> = (0..=a.grid).map(|i| i as f64 / a.grid as f64).collect();
    let mut rows = Vec::new();
    for family in families {
        let dist = match family {
            FamilyKind::Discrete(_) => {
                resolve_distribution(family, a.points, None, None, a.colluders)?
            }
            FamilyKind::Arcsine => {
                resolve_distribution(family, None, a.cutoff, a.schedule.as_deref(), a.colluders)?
            }
        };
        let cutoff = match &dist {
            BiasDistribution::Continuous(c) => Some(c.cutoff()),
            BiasDistribution::Discrete(_) => None,
        };
        rows.extend(grid.iter().map(|&p| CdfRow {
            family: dist.family_name().to_string(),
            points: dist.point_count(),
            cutoff,
            p,
            cdf: dist.cdf(p),
        }));
    }
    rows.extend(grid.iter().map(|&p| CdfRow {
        family: REFERENCE_FAMILY.to_string(),
        points: None,
        cutoff: Some(0.0),
        p,
        cdf: arcsine_cdf(p),
    }));

    match a.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(&a.output.out)?);
            w.write_record(["family", "points", "cutoff", "p", "cdf"])
                .map_err(Error::from)?;
            for r in &rows {
                w.write_record([
                    r.family.clone(),
                    r.points.map(|p| p.to_string()).unwrap_or_default(),
                    r.cutoff.map(sig17).unwrap_or_default(),
                    sig17(r.p),
                    sig17(r.cdf),
                ])
                .map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Json => write_json(&a.output.out, &rows)?,
    }
    Ok(format!(
        "cdf: {} rows on a {}-step grid",
        rows.len(),
        a.grid
    ))
}

fn write_reports(rows: &[MuReport], output: &Output) -> CliResult<()> {
    match output.format {
        Format::Csv => write_sweep_csv(rows, open_output(&output.out)?)?,
        Format::Json => write_json(&output.out, &rows)?,
    }
    Ok(())
}

fn cmd_mu(a: MuArgs) -> CliResult<String> {
    if a.colluders == 0 {
        return Err(CliError::Usage("--colluders must be at least 1".into()));
    }
    let dist = build_distribution(&a.dist, Some(a.colluders))?;
    let choice = strategy_choice(&a.strategy, "minimizing")?;
    let report = choice.evaluate(&dist, a.colluders)?;
    write_reports(std::slice::from_ref(&report), &a.output)?;
    Ok(format!(
        "mu: {} c={} {} mu={} d_l={}",
        report.family,
        report.c_tilde,
        report.strategy,
        sig17(report.mu),
        sig17(report.dl)
    ))
}

fn cmd_sweep(a: SweepArgs) -> CliResult<String> {
    if a.cmin == 0 || a.cmax < a.cmin {
        return Err(CliError::Usage(format!(
            "need 1 <= cmin <= cmax, got {}..={}",
            a.cmin, a.cmax
        )));
    }
    let families = a
        .families
        .iter()
        .map(|f| parse_family(f))
        .collect::<CliResult<Vec<_>>>()?;
    let choice: StrategyChoice = a.strategy.parse()?;
    let schedule: CutoffSchedule = a.schedule.parse()?;
    let rows = with_pool(a.jobs, || {
        dl_sweep(&families, a.cmin..=a.cmax, &choice, schedule)
    })??;
    write_reports(&rows, &a.output)?;
    Ok(format!(
        "sweep: {} rows, {} families, c = {}..={}, {} attack",
        rows.len(),
        families.len(),
        a.cmin,
        a.cmax,
        choice.label()
    ))
}

fn cmd_converge(a: ConvergeArgs) -> CliResult<String> {
    let rows = a
        .points
        .iter()
        .map(|&c| convergence_report(c, a.alpha))
        .collect::<crate::Result<Vec<_>>>()?;
    match a.output.format {
        Format::Csv => write_convergence_csv(&rows, open_output(&a.output.out)?)?,
        Format::Json => write_json(&a.output.out, &rows)?,
    }
    let min_gap = rows
        .iter()
        .map(|r| r.normalizer_gap)
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "converge: {} rows, alpha={}, smallest normalizer gap {}",
        rows.len(),
        a.alpha,
        sig17(min_gap)
    ))
}

fn scheme_parameters(args: &SchemeArgs) -> CliResult<(BiasDistribution, SchemeParameters)> {
    let dist = build_distribution(&args.dist, Some(args.colluders))?;
    let params = choose_parameters(args.colluders, args.users, args.epsilon1, &dist)?;
    Ok((dist, params))
}

fn cmd_params(a: ParamsArgs) -> CliResult<String> {
    let (dist, params) = scheme_parameters(&a.scheme)?;
    match a.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(&a.output.out)?);
            w.write_record([
                "colluders",
                "users",
                "epsilon1",
                "code_length",
                "threshold",
                "dl_constant",
            ])
            .map_err(Error::from)?;
            w.write_record([
                params.colluders.to_string(),
                params.users.to_string(),
                sig17(params.epsilon1),
                params.code_length.to_string(),
                sig17(params.threshold),
                sig17(params.dl_constant),
            ])
            .map_err(Error::from)?;
            w.flush()?;
        }
        Format::Json => write_json(&a.output.out, &params)?,
    }
    Ok(format!(
        "params: {} l={} Z={} d_l={}",
        dist.family_name(),
        params.code_length,
        sig17(params.threshold),
        sig17(params.dl_constant)
    ))
}

fn cmd_simulate(a: SimulateArgs) -> CliResult<String> {
    let (dist, params) = scheme_parameters(&a.scheme)?;
    let coalition = a
        .coalition
        .clone()
        .unwrap_or_else(|| (0..a.scheme.colluders).collect());
    let attack = match strategy_choice(&a.strategy, "interleaving")? {
        StrategyChoice::Named(s) => Attack::Named(s),
        StrategyChoice::Custom(p) => Attack::Profile(p),
        StrategyChoice::Minimizing => {
            Attack::Profile(StrategyChoice::Minimizing.profile(&dist, coalition.len())?)
        }
    };
    let report = with_pool(a.jobs, || {
        simulate(&params, &dist, &attack, &coalition, a.trials, a.seed)
    })??;
    write_json(&a.out, &report)?;
    Ok(format!(
        "simulate: {} trials, fp_rate={} fn_rate={} mean pirate score={}",
        report.trials, report.fp_rate, report.fn_rate, report.mean_pirate_score
    ))
}

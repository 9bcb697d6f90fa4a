//! `tallest-column` command line: `solve`, `verify` and `sweep`.
//!
//! Exit codes: 0 on success, 1 when the numerics fail or a check misses its
//! threshold, 2 on usage or I/O errors.

pub mod files;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use tallest_column::oracle::{DEFAULT_S_FLOOR, MIN_INTERVALS};
use tallest_column::shooting::{extrapolate_lambda, Extrapolation};
use tallest_column::{
    integrate_backward, lambda_sensitivity, optimality_residual, profile, stationarity_check,
    sturm_liouville_lambda, torque_residual, volume, BoundaryKind, ColumnProfile, DiscreteShape,
    Error, ShootingOptions, Solution,
};

use files::{JsonProfile, ProfileRow, Summary};

pub const NO_CROSSING_HINT: &str = "try negating --delta";

#[derive(Debug, Parser)]
#[command(name = "tallest-column", version, about = "Tallest self-supporting column by stable-manifold shooting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shoot for the buckling load and write profile, trajectory and summary.
    Solve(SolveArgs),
    /// Recompute λ independently and check the optimality conditions.
    Verify(VerifyArgs),
    /// λ over several offsets δ, with an extrapolated limit.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShootArgs {
    /// Base condition: clamped or hinged [default: clamped]
    #[arg(long)]
    pub bc: Option<BoundaryKind>,
    /// Offset from the critical point along the stable eigenvector.
    #[arg(long, default_value_t = -1e-4, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    /// Profile samples between --s-floor and the base.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Smallest arclength sampled; the tip below it follows the similarity solution.
    #[arg(long, default_value_t = 1e-3)]
    pub s_floor: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub shoot: ShootArgs,
    /// Profile file; summary and trajectory go next to it [default: <bc>.<format>]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub shoot: ShootArgs,
    /// Profile written by `solve`; its `.summary.json` supplies bc and λ.
    /// Without it the column is solved in-process.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Intervals of the eigenvalue discretization.
    #[arg(long, default_value_t = 2000)]
    pub oracle_points: usize,
    /// Write the report here as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub shoot: ShootArgs,
    /// Offsets, comma separated, all of one sign.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [-1e-3, -1e-4, -1e-5])]
    pub deltas: Vec<f64>,
    /// Table file (csv or json).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub bc: BoundaryKind,
    pub options: ShootingOptions,
    pub points: usize,
    pub s_floor: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_shoot(shoot: &ShootArgs, out: Option<PathBuf>, format: Format) -> Result<Self, Failure> {
        let cfg = Self {
            bc: shoot.bc.unwrap_or(BoundaryKind::Clamped),
            options: ShootingOptions {
                delta: shoot.delta,
                rel_tol: shoot.rel_tol,
                abs_tol: shoot.abs_tol,
                ..ShootingOptions::default()
            },
            points: shoot.points,
            s_floor: shoot.s_floor,
            out,
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.options.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        if self.points < 5 {
            return Err(Failure::Usage(format!("--points must be at least 5, got {}", self.points)));
        }
        if !(self.s_floor > 0.0 && self.s_floor < 1.0) {
            return Err(Failure::Usage(format!("--s-floor must lie in (0, 1), got {}", self.s_floor)));
        }
        Ok(())
    }

    pub fn profile_path(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.{}", self.bc, self.format.extension())))
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Numerical { message: String, hint: Option<&'static str> },
    ChecksFailed(usize),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Numerical { .. } | Failure::ChecksFailed(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Numerical { message, hint: Some(h) } => write!(f, "{message}\nhint: {h}"),
            Failure::Numerical { message, hint: None } => f.write_str(message),
            Failure::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            Error::NoCrossing { .. } => Failure::Numerical { message: e.to_string(), hint: Some(NO_CROSSING_HINT) },
            other => Failure::Numerical { message: other.to_string(), hint: None },
        }
    }
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::Io(format!("stdout: {e}"))
}

/// `x` rounded to `digits` significant figures.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Parse `args` (program name first), run, and report. Returns the exit code.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve(a) => cmd_solve(&RunConfig::from_shoot(&a.shoot, a.out.clone(), a.format)?, stdout).map(|_| ()),
        Command::Verify(a) => cmd_verify(a, stdout).map(|_| ()),
        Command::Sweep(a) => cmd_sweep(a, stdout).map(|_| ()),
    }
}

/// Shoot and sample the profile.
pub fn solve(cfg: &RunConfig) -> Result<(Solution, ColumnProfile), Failure> {
    let sol = integrate_backward(cfg.bc, &cfg.options)?;
    let prof = profile(&sol, cfg.points, cfg.s_floor)?;
    Ok((sol, prof))
}

pub fn cmd_solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Summary, Failure> {
    let (sol, prof) = solve(cfg)?;
    let path = cfg.profile_path();
    let rows: Vec<ProfileRow> = prof.samples.iter().map(ProfileRow::from).collect();
    let trajectory = files::trajectory_rows(&sol);
    let trajectory_file = match cfg.format {
        Format::Csv => {
            files::write_csv(&path, &rows)?;
            let tpath = files::sibling(&path, "trajectory.csv");
            files::write_csv(&tpath, &trajectory)?;
            Some(files::file_name(&tpath))
        }
        Format::Json => {
            let doc = JsonProfile { bc: cfg.bc, lambda: sol.lambda, profile: rows, trajectory };
            files::write_json(&path, &doc)?;
            None
        }
    };
    let summary = Summary {
        bc: cfg.bc,
        lambda: sol.lambda,
        delta: cfg.options.delta,
        t_stop: sol.t_stop,
        volume: volume(&prof),
        rel_tol: cfg.options.rel_tol,
        abs_tol: cfg.options.abs_tol,
        max_span: cfg.options.max_span,
        event_tol: cfg.options.event_tol,
        max_step: cfg.options.max_step,
        points: cfg.points,
        s_floor: cfg.s_floor,
        format: cfg.format,
        profile: files::file_name(&path),
        trajectory: trajectory_file,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let summary_path = files::sibling(&path, "summary.json");
    files::write_json(&summary_path, &summary)?;

    writeln!(stdout, "bc         {}", summary.bc).map_err(out_err)?;
    writeln!(stdout, "lambda     {}", significant(summary.lambda, 6)).map_err(out_err)?;
    writeln!(stdout, "delta_t    {}", significant(summary.t_stop, 6)).map_err(out_err)?;
    writeln!(stdout, "volume     {}", significant(summary.volume, 6)).map_err(out_err)?;
    writeln!(stdout, "profile    {}", path.display()).map_err(out_err)?;
    if let Some(t) = &summary.trajectory {
        writeln!(stdout, "trajectory {}", files::sibling(&path, "trajectory.csv").with_file_name(t).display())
            .map_err(out_err)?;
    }
    writeln!(stdout, "summary    {}", summary_path.display()).map_err(out_err)?;
    Ok(summary)
}

/// One line of the `verify` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, passed: value <= threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub bc: BoundaryKind,
    pub lambda: f64,
    pub oracle_lambda: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub const VOLUME_TOL: f64 = 1e-3;
pub const ORACLE_TOL: f64 = 1e-2;
pub const OPTIMALITY_TOL: f64 = 1e-2;
pub const TORQUE_TOL: f64 = 1e-3;
pub const STATIONARITY_TOL: f64 = 1e-2;
pub const STATIONARITY_STEP: f64 = 1e-3;

/// Run every check on a profile whose shooting load is `profile.lambda`.
pub fn verify_profile(prof: &ColumnProfile, oracle_points: usize) -> Result<VerifyReport, Failure> {
    if oracle_points < MIN_INTERVALS {
        return Err(Failure::Usage(format!("--oracle-points must be at least {MIN_INTERVALS}")));
    }
    let bc = prof.bc;
    let shape = DiscreteShape::from_profile(prof, oracle_points, DEFAULT_S_FLOOR)?;
    let oracle = sturm_liouville_lambda(&shape, bc)?;
    let direction = shape.volume_preserving_direction(|s| s.powi(3));
    let dlam = stationarity_check(&shape, bc, &direction, STATIONARITY_STEP)?;
    let checks = vec![
        Check::at_most("volume", (volume(prof) - 1.0).abs(), VOLUME_TOL),
        Check::at_most("oracle_lambda", (oracle - prof.lambda).abs() / prof.lambda, ORACLE_TOL),
        Check::at_most("optimality", optimality_residual(prof), OPTIMALITY_TOL),
        Check::at_most("torque", torque_residual(prof), TORQUE_TOL),
        Check::at_most("stationarity", (dlam / oracle).abs(), STATIONARITY_TOL),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { bc, lambda: prof.lambda, oracle_lambda: oracle, checks, passed })
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<VerifyReport, Failure> {
    let prof = match &args.profile {
        Some(path) => {
            let summary_path = files::sibling(path, "summary.json");
            let summary: Summary = files::read_json(&summary_path)?;
            if let Some(bc) = args.shoot.bc {
                if bc != summary.bc {
                    return Err(Failure::Usage(format!(
                        "--bc {bc} does not match the profile metadata ({}) in {}",
                        summary.bc,
                        summary_path.display()
                    )));
                }
            }
            files::read_profile(path, summary.bc, summary.lambda)?
        }
        None => solve(&RunConfig::from_shoot(&args.shoot, None, Format::Csv)?)?.1,
    };
    let report = verify_profile(&prof, args.oracle_points)?;
    let w = |stdout: &mut dyn Write, s: String| writeln!(stdout, "{s}").map_err(out_err);
    w(stdout, format!("bc             {}", report.bc))?;
    w(stdout, format!("lambda         {}", significant(report.lambda, 6)))?;
    w(stdout, format!("oracle lambda  {}", significant(report.oracle_lambda, 6)))?;
    w(stdout, format!("{:<14} {:>11} {:>11}  result", "check", "value", "threshold"))?;
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        w(stdout, format!("{:<14} {:>11.3e} {:>11.1e}  {status}", c.name, c.value, c.threshold))?;
    }
    if let Some(out) = &args.out {
        files::write_json(out, &report)?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(Failure::ChecksFailed(failed));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub bc: BoundaryKind,
    pub rows: Vec<SweepRow>,
    pub extrapolated: Extrapolation,
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<SweepReport, Failure> {
    if args.deltas.is_empty() {
        return Err(Failure::Usage("--deltas is empty".into()));
    }
    let cfg = RunConfig::from_shoot(&args.shoot, args.out.clone(), args.format)?;
    let runs = lambda_sensitivity(cfg.bc, &args.deltas, &cfg.options)?;
    let mut rows = Vec::with_capacity(runs.len());
    for (delta, res) in runs {
        rows.push(SweepRow { delta, lambda: res? });
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.lambda)).collect();
    let extrapolated = extrapolate_lambda(&pairs).expect("at least one offset");
    writeln!(stdout, "{:>12} {:>16}", "delta", "lambda").map_err(out_err)?;
    for r in &rows {
        writeln!(stdout, "{:>12.3e} {:>16.10}", r.delta, r.lambda).map_err(out_err)?;
    }
    let order = extrapolated.order.map_or_else(|| "n/a".to_string(), |p| format!("{p:.2}"));
    writeln!(stdout, "extrapolated {:>16.10}  (order {order})", extrapolated.lambda).map_err(out_err)?;
    let report = SweepReport { bc: cfg.bc, rows, extrapolated };
    if let Some(out) = &args.out {
        match args.format {
            Format::Csv => files::write_csv(out, &report.rows)?,
            Format::Json => files::write_json(out, &report)?,
        }
    }
    Ok(report)
}

//! `bb`: verify derivative bounds for rational functions with prescribed
//! poles.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails, 2 on usage or input errors.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use blaschke_bounds::bounds::check_zero_side;
use blaschke_bounds::harness::{
    default_family, family, limit_study, run_cases_streaming, run_suite_streaming, sharpness_suite, Case, LimitFamily,
    SuiteConfig, DEFAULT_ALPHAS, DEFAULT_POINTS,
};
use blaschke_bounds::instance::InstanceFile;
use blaschke_bounds::{BoundKind, Polynomial, Side};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex;

use output::{CsvSink, Outcome};

/// Environment variable overriding the relative pass tolerance.
const TOL_ENV: &str = "BB_TOL";

#[derive(Parser)]
#[command(name = "bb", version, about = "Derivative bounds for rational functions with prescribed poles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds on one instance file.
    Check(CheckArgs),
    /// Verify bounds over seeded random instances.
    Fuzz(FuzzArgs),
    /// Reproduce the equality cases.
    Sharpness(JsonFlag),
    /// Compare rational bounds with polynomial bounds as the poles recede.
    Limit(LimitArgs),
    /// Check the Blaschke-product identities on random instances.
    Identities(IdentityArgs),
    /// Print poles, zeros, norms and hypotheses of an instance file.
    Describe(DescribeArgs),
}

#[derive(Args)]
struct JsonFlag {
    /// Emit the report as one JSON document.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    /// Comma-separated tags, or `all`, `all-upper`, `all-lower`. Defaults
    /// to every bound on the instance's side.
    #[arg(long)]
    kinds: Option<String>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Overrides the file's `k` (default 1).
    #[arg(long)]
    k: Option<f64>,
    /// Overrides the file's side; inferred from the zeros otherwise.
    #[arg(long)]
    side: Option<Side>,
    #[arg(long)]
    lambda_sweep: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = Side::Outside)]
    side: Side,
    /// Defaults to `all-upper` or `all-lower` according to `--side`.
    #[arg(long)]
    kinds: Option<String>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long)]
    lambda_sweep: bool,
    /// Also check the Blaschke-product identities.
    #[arg(long)]
    identities: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LimitArgs {
    /// Ascending numerator coefficients, e.g. `1,1` or `0.5,1-2i`.
    #[arg(long)]
    poly: String,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Increasing pole positions.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// `upper` or `lower`; chosen from the zeros when omitted.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long)]
    lambda_sweep: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DescribeArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

/// A usage or input error; maps to exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Sharpness(a) => cmd_sharpness(a),
        Command::Limit(a) => cmd_limit(a),
        Command::Identities(a) => cmd_identities(a),
        Command::Describe(a) => cmd_describe(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn tolerance() -> Result<f64, UsageError> {
    match std::env::var(TOL_ENV) {
        Ok(s) => {
            let t: f64 = s.trim().parse().map_err(|_| UsageError(format!("{TOL_ENV}={s:?} is not a number")))?;
            if t.is_finite() && t >= 0.0 {
                Ok(t)
            } else {
                Err(UsageError(format!("{TOL_ENV} must be a nonnegative number, got {s}")))
            }
        }
        Err(_) => Ok(blaschke_bounds::bounds::DEFAULT_TOL),
    }
}

fn load(path: &Path) -> Result<InstanceFile, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn parse_kinds(list: &str) -> Result<Vec<BoundKind>, UsageError> {
    BoundKind::parse_list(list).map_err(UsageError)
}

fn check_k(k: f64, side: Side) -> Result<(), UsageError> {
    let ok = k.is_finite()
        && match side {
            Side::Outside => k >= 1.0,
            Side::Inside => k > 0.0 && k <= 1.0,
        };
    if ok {
        Ok(())
    } else {
        Err(UsageError(format!("k = {k} is invalid for the {side} family")))
    }
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let file = load(&a.file)?;
    let r = file.to_rational()?;
    let k = a.k.or(file.k).unwrap_or(1.0);
    let zeros = r.zero_data()?.zeros;
    let side = match a.side.or(file.side) {
        Some(s) => s,
        None if check_zero_side(&zeros, Side::Outside, k.max(1.0)).is_ok() => Side::Outside,
        None => Side::Inside,
    };
    let kinds = match &a.kinds {
        Some(list) => parse_kinds(list)?,
        None => BoundKind::for_side(side),
    };
    let mut cfg = SuiteConfig::new(kinds);
    cfg.points = a.points;
    cfg.lambda_sweep = a.lambda_sweep;
    cfg.tolerance = tolerance()?;
    let case = Case { id: 0, rational: r, k, side };
    let mut sink = CsvSink::open(a.csv.as_deref())?;
    let report = run_cases_streaming(std::slice::from_ref(&case), &cfg, |recs| sink.write(recs));
    sink.finish()?;
    if report.summary.has_errors() {
        let first = report.summary.failures.iter().find(|f| f.error).expect("has errors");
        return Err(UsageError(format!("{}: {}", first.check, first.detail)));
    }
    output::print_report(&report, a.json);
    Ok(Outcome::from_pass(report.passed()))
}

fn cmd_fuzz(a: FuzzArgs) -> CmdResult {
    check_k(a.k, a.side)?;
    if a.n_max == 0 {
        return Err(UsageError("--n-max must be at least 1".into()));
    }
    let kinds = match &a.kinds {
        Some(list) => parse_kinds(list)?,
        None => BoundKind::for_side(a.side),
    };
    if let Some(bad) = kinds.iter().find(|k| k.side().is_some_and(|s| s != a.side)) {
        return Err(UsageError(format!("{bad} needs zeros {}, but --side is {}", bad.side().expect("some"), a.side)));
    }
    let mut cfg = SuiteConfig::new(kinds);
    cfg.points = a.points;
    cfg.lambda_sweep = a.lambda_sweep;
    cfg.identities = a.identities;
    cfg.tolerance = tolerance()?;
    cfg.keep_records = a.json;
    cfg.seed = Some(a.seed);
    let specs = family(a.seed, a.count, a.n_max, a.k, a.side);
    let mut sink = CsvSink::open(a.csv.as_deref())?;
    let report = run_suite_streaming(&specs, &cfg, |recs| sink.write(recs));
    sink.finish()?;
    output::print_report(&report, a.json);
    Ok(Outcome::from_pass(report.passed()))
}

fn cmd_sharpness(a: JsonFlag) -> CmdResult {
    let report = sharpness_suite();
    output::print_report(&report, a.json);
    Ok(Outcome::from_pass(report.passed()))
}

fn parse_poly(s: &str) -> Result<Polynomial<f64>, UsageError> {
    let coeffs = s
        .split(',')
        .map(|t| Complex::<f64>::from_str(t.trim()).map_err(|_| UsageError(format!("bad coefficient {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::from_coeffs(coeffs))
}

fn cmd_limit(a: LimitArgs) -> CmdResult {
    let p = parse_poly(&a.poly)?;
    if p.degree() == 0 {
        return Err(UsageError("--poly needs degree at least 1".into()));
    }
    let fam = match a.family.as_deref() {
        None => default_family(&p, a.k)?,
        Some("upper") => LimitFamily::Upper,
        Some("lower") => LimitFamily::Lower,
        Some(other) => return Err(UsageError(format!("unknown family {other:?}, expected upper or lower"))),
    };
    if fam == LimitFamily::Upper {
        check_k(a.k, Side::Outside)?;
    } else {
        check_k(a.k, Side::Inside)?;
    }
    let alphas = a.alphas.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    let table = limit_study(&p, a.k, &alphas, fam)?;
    output::print_limit(&table, a.json);
    Ok(Outcome::from_pass(table.converged()))
}

fn cmd_identities(a: IdentityArgs) -> CmdResult {
    let mut cfg = SuiteConfig::new(Vec::new());
    cfg.identities = true;
    cfg.lambda_sweep = a.lambda_sweep;
    cfg.keep_records = false;
    cfg.seed = Some(a.seed);
    cfg.tolerance = tolerance()?;
    let specs = family(a.seed, a.count, a.n_max.max(1), 1.0, Side::Outside);
    let report = run_suite_streaming(&specs, &cfg, |_| {});
    output::print_report(&report, a.json);
    Ok(Outcome::from_pass(report.passed()))
}

fn cmd_describe(a: DescribeArgs) -> CmdResult {
    let file = load(&a.file)?;
    let r = file.to_rational()?;
    output::print_description(&r, a.json)?;
    Ok(Outcome::Pass)
}

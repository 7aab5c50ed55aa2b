//! The `spacing` command line: one subcommand per experiment, emitting
//! [`OutputRecord`] rows as CSV or JSON.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::estimator::estimate_closed;
use crate::numerics::PrecisionPolicy;
use crate::simulate::{error_curve, fit_min_error, integrate_expected, ErrorCurve, SimConfig};
use crate::spacing_exact::{expected_spacing, spacing_variance, SpacingQuery};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "family,params,n,i,estimator,exact,oracle,simulated_mean,simulated_se,abs_error";

pub const NA: &str = "NA";

/// Runs above these sizes need `--full-scale`.
pub const DESK_MAX_TRIALS: u64 = 10_000_000;
pub const DESK_MAX_N: u32 = 100;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// One output row. Numbers are decimal strings with 17 significant digits;
/// `NA` marks a column that was not requested or has no value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub family: String,
    pub params: String,
    pub n: u32,
    pub i: u32,
    pub estimator: String,
    pub exact: String,
    pub oracle: String,
    pub simulated_mean: String,
    pub simulated_se: String,
    pub abs_error: String,
}

impl OutputRecord {
    fn new(q: &SpacingQuery) -> Result<Self> {
        Ok(OutputRecord {
            family: q.spec().family().keyword().to_string(),
            params: q.spec().params_string(),
            n: q.n(),
            i: q.i(),
            estimator: fmt_num(estimate_closed(q)?.value),
            exact: NA.into(),
            oracle: NA.into(),
            simulated_mean: NA.into(),
            simulated_se: NA.into(),
            abs_error: NA.into(),
        })
    }

    pub fn to_csv_line(&self) -> String {
        [
            self.family.as_str(),
            &self.params,
            &self.n.to_string(),
            &self.i.to_string(),
            &self.estimator,
            &self.exact,
            &self.oracle,
            &self.simulated_mean,
            &self.simulated_se,
            &self.abs_error,
        ]
        .join(",")
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip an f64.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in records {
                s.push_str(&r.to_csv_line());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
    }
}

/// Parses CSV produced by [`render`].
pub fn parse_csv(text: &str) -> Result<Vec<OutputRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Usage("CSV header does not match the record schema".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 10 {
                return Err(Error::Usage(format!("expected 10 fields, got {}: {l}", f.len())));
            }
            let int = |s: &str| s.parse::<u32>().map_err(|e| Error::Usage(format!("bad integer {s}: {e}")));
            Ok(OutputRecord {
                family: f[0].into(),
                params: f[1].into(),
                n: int(f[2])?,
                i: int(f[3])?,
                estimator: f[4].into(),
                exact: f[5].into(),
                oracle: f[6].into(),
                simulated_mean: f[7].into(),
                simulated_se: f[8].into(),
                abs_error: f[9].into(),
            })
        })
        .collect()
}

#[derive(Debug, Parser)]
#[command(name = "spacing", version, about = "Order-statistic spacings: exact values, estimators, oracles and simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form expected spacing (or variance) for uniform, exp, logistic and gumbel.
    Exact(ExactArgs),
    /// Quantile estimator of the expected spacing.
    Estimate(QueryArgs),
    /// Expected spacing by nested quadrature of the spacing density.
    Integrate(IntegrateArgs),
    /// Monte Carlo mean spacings beside the estimator.
    Simulate(SimArgs),
    /// Estimator error against simulated means for every index.
    ErrorCurve(CurveArgs),
    /// Fit of the minimum estimator error against n.
    FitMinError(FitArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(id = "index", required = true, multiple = false)]
pub struct IndexArgs {
    /// Spacing index, 2 <= i <= n.
    #[arg(long, group = "index")]
    pub i: Option<u32>,
    /// Every index 2..=n.
    #[arg(long, group = "index")]
    pub all_i: bool,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Distribution, e.g. "gumbel(0,1)".
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub index: IndexArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Working precision in bits; defaults to SPACING_PRECISION_BITS or 128 + 2n.
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Relative tolerance of the logistic second-moment series.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Report the variance instead of the mean in the exact column.
    #[arg(long)]
    pub variance: bool,
    /// Write exact rationals as p/q.
    #[arg(long)]
    pub rational: bool,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Quadrature tolerance relative to the estimator value.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Allow runs above 10^7 trials or n above 100.
    #[arg(long)]
    pub full_scale: bool,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub dist: String,
    /// Comma-separated sample sizes, at least three distinct.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u32>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct FitReport {
    family: String,
    params: String,
    trials: u64,
    seed: u64,
    slope: f64,
    slope_residual: f64,
    value_coeff: f64,
    location_fraction: f64,
    points: Vec<FitPoint>,
}

#[derive(Debug, Serialize)]
struct FitPoint {
    n: u32,
    argmin_i: u32,
    min_abs_error: f64,
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn parse_dist(s: &str) -> Result<DistributionSpec> {
    s.parse()
}

fn indices(q: &QueryArgs) -> Result<Vec<u32>> {
    if q.n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {}", q.n)));
    }
    match q.index.i {
        Some(i) if (2..=q.n).contains(&i) => Ok(vec![i]),
        Some(i) => Err(Error::Domain(format!("i must lie in [2, {}], got {i}", q.n))),
        None => Ok((2..=q.n).collect()),
    }
}

fn queries(q: &QueryArgs) -> Result<Vec<SpacingQuery>> {
    let spec = parse_dist(&q.dist)?;
    indices(q)?.into_iter().map(|i| SpacingQuery::new(spec, q.n, i)).collect()
}

fn sim_config(spec: DistributionSpec, n: u32, run: &RunArgs) -> Result<SimConfig> {
    if !run.full_scale && (run.trials > DESK_MAX_TRIALS || n > DESK_MAX_N) {
        return Err(Error::Usage(format!(
            "runs above {DESK_MAX_TRIALS} trials or n = {DESK_MAX_N} need --full-scale"
        )));
    }
    let workers = run
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |w| w.get()));
    SimConfig::new(spec, n, run.trials, run.seed, workers)
}

fn curve_records(curve: &ErrorCurve, only: Option<u32>) -> Result<Vec<OutputRecord>> {
    curve
        .points
        .iter()
        .filter(|p| only.is_none_or(|i| p.i == i))
        .map(|p| {
            let q = SpacingQuery::new(curve.spec, curve.n, p.i)?;
            let mut r = OutputRecord::new(&q)?;
            r.simulated_mean = fmt_num(p.simulated_mean);
            r.simulated_se = fmt_num(p.simulated_se);
            r.abs_error = fmt_num(p.abs_error);
            Ok(r)
        })
        .collect()
}

fn cmd_exact(a: &ExactArgs) -> Result<Vec<OutputRecord>> {
    let policy = match a.precision_bits {
        Some(b) => PrecisionPolicy::fixed(b),
        None => PrecisionPolicy::from_env(),
    };
    queries(&a.query)?
        .iter()
        .map(|q| {
            let v = if a.variance {
                spacing_variance(q, &policy, a.tol)?
            } else {
                expected_spacing(q, &policy)?
            };
            let mut r = OutputRecord::new(q)?;
            r.exact = match (&v.rational, a.rational) {
                (Some(p), true) => p.to_string(),
                _ => fmt_num(v.to_f64()),
            };
            Ok(r)
        })
        .collect()
}

fn cmd_estimate(a: &QueryArgs) -> Result<Vec<OutputRecord>> {
    queries(a)?.iter().map(OutputRecord::new).collect()
}

fn cmd_integrate(a: &IntegrateArgs) -> Result<Vec<OutputRecord>> {
    if !(a.tol > 0.0) {
        return Err(Error::Domain(format!("--tol must be positive, got {}", a.tol)));
    }
    queries(&a.query)?
        .iter()
        .map(|q| {
            let scale = estimate_closed(q)?.value;
            let mut r = OutputRecord::new(q)?;
            r.oracle = fmt_num(integrate_expected(q, a.tol * scale)?);
            Ok(r)
        })
        .collect()
}

fn cmd_simulate(a: &SimArgs) -> Result<Vec<OutputRecord>> {
    let spec = parse_dist(&a.query.dist)?;
    indices(&a.query)?;
    let curve = error_curve(&sim_config(spec, a.query.n, &a.run)?)?;
    curve_records(&curve, a.query.index.i)
}

fn cmd_error_curve(a: &CurveArgs) -> Result<Vec<OutputRecord>> {
    let spec = parse_dist(&a.dist)?;
    let curve = error_curve(&sim_config(spec, a.n, &a.run)?)?;
    curve_records(&curve, None)
}

fn cmd_fit_min_error(a: &FitArgs) -> Result<String> {
    let spec = parse_dist(&a.dist)?;
    let curves = a
        .n_list
        .iter()
        .map(|&n| error_curve(&sim_config(spec, n, &a.run)?))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_min_error(&curves)?;
    let report = FitReport {
        family: spec.family().keyword().into(),
        params: spec.params_string(),
        trials: a.run.trials,
        seed: a.run.seed,
        slope: fit.slope,
        slope_residual: fit.slope_residual,
        value_coeff: fit.value_coeff,
        location_fraction: fit.location_fraction,
        points: fit
            .points
            .iter()
            .map(|p| FitPoint { n: p.n, argmin_i: p.argmin_i, min_abs_error: p.min_abs_error })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("cannot write output: {e}"))),
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let (records, output) = match cmd {
        Command::Exact(a) => (cmd_exact(a)?, &a.query.output),
        Command::Estimate(a) => (cmd_estimate(a)?, &a.output),
        Command::Integrate(a) => (cmd_integrate(a)?, &a.query.output),
        Command::Simulate(a) => (cmd_simulate(a)?, &a.query.output),
        Command::ErrorCurve(a) => (cmd_error_curve(a)?, &a.output),
        Command::FitMinError(a) => return emit(&cmd_fit_min_error(a)?, a.out.as_ref(), stdout),
    };
    emit(&render(&records, output.format), output.out.as_ref(), stdout)
}

/// Exit status for a library error: 2 for bad input, 1 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Usage(_) | Error::InvalidDistribution(_) | Error::NoClosedForm(_) => EXIT_USAGE,
        Error::Evaluation { .. } | Error::Accuracy { .. } | Error::Precision { .. } | Error::DegenerateFit(_) => {
            EXIT_NUMERIC
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `stdout` and diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}

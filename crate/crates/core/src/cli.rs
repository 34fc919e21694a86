//! Command-line front end: `optimize`, `i3322` and `classical`.
//!
//! Every run produces a [`RunRecord`] written as JSON or CSV. Exit codes are
//! 0 on success, 2 for usage and parse errors, 3 for numeric failures and
//! size limits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bell::{
    builtin_chsh, builtin_i3322, classical_bound, parse_bell_expression, serialize_bell_expression,
    BellExpression, Projector,
};
use crate::chain::{self, Branch, ChainOptions, ChainResult};
use crate::error::Error;
use crate::scalar::{Field, Scalar};
use crate::seesaw::{run_seesaw, stationarity_residual, EarlyStop, SeesawConfig, SeesawResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Significant digits of every serialized number.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Column order of every CSV summary table.
pub const CSV_COLUMNS: [&str; 8] =
    ["n", "branch", "value", "distance", "iterations", "converged", "sign_change_index", "seed"];

/// Column order of the `--dump` profile table.
pub const PROFILE_COLUMNS: [&str; 5] = ["n", "branch", "i", "c", "lambda"];

/// Residuals are computed for chain rows up to this dimension.
pub const RESIDUAL_MAX_DIM: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "bellsaw", version, about = "Lower bounds on quantum violations of two-outcome Bell inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// See-saw search at a fixed local dimension.
    Optimize(OptimizeArgs),
    /// Chain solutions of I3322 for one dimension or a sweep.
    I3322(ChainArgs),
    /// Exact classical maximum by enumerating deterministic strategies.
    Classical(ClassicalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Inequality file, or one of the built-ins `chsh`, `i3322`.
    #[arg(long)]
    pub ineq: String,
    /// Local Hilbert-space dimension.
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value = "real")]
    pub field: Field,
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    /// Base seed; a random one is drawn and recorded when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-cycle improvement below which a run has converged.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_cycles: usize,
    /// `θ,k,g` or `default` for θ = 1e-4, k = ⌈n/4⌉, g = 50.
    #[arg(long)]
    pub early_stop: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("dims").required(true).args(["dim", "sweep"])))]
pub struct ChainArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    /// Dimension range `a:b` or `a:b:step`, inclusive.
    #[arg(long)]
    pub sweep: Option<String>,
    /// `0`, `-1` or `both`.
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    pub branch: String,
    /// Position of the initial sign change on the `-1` branch.
    #[arg(long)]
    pub split: Option<f64>,
    /// Keep `c_i` at its initial value; repeatable.
    #[arg(long)]
    pub pin: Vec<usize>,
    #[arg(long, default_value_t = chain::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = chain::DEFAULT_MAX_CYCLES)]
    pub max_cycles: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Include the `c` and `λ` profiles.
    #[arg(long)]
    pub dump: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long)]
    pub ineq: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

/// Everything needed to reproduce and audit one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub input: InputDigest,
    pub config: Value,
    pub outputs: Value,
    pub wall_time_s: f64,
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(x) = num.as_f64() {
                *v = json!(round_sig(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Resolves `chsh`, `i3322` or a file path.
pub fn load_inequality(spec: &str) -> CliResult<(BellExpression, InputDigest)> {
    let (expr, bytes) = match spec {
        "chsh" => {
            let e = builtin_chsh();
            let text = serialize_bell_expression(&e);
            (e, text.into_bytes())
        }
        "i3322" => {
            let e = builtin_i3322();
            let text = serialize_bell_expression(&e);
            (e, text.into_bytes())
        }
        path => {
            let bytes = std::fs::read(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            let text = std::str::from_utf8(&bytes)
                .map_err(|_| CliError::Usage(format!("{path}: not valid UTF-8")))?;
            let e = parse_bell_expression(text)
                .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            (e, bytes)
        }
    };
    Ok((expr, InputDigest { source: spec.to_string(), sha256: sha256_hex(&bytes) }))
}

/// Parses `a:b` or `a:b:step`.
pub fn parse_sweep(spec: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid sweep '{spec}', expected a:b or a:b:step"));
    let parts: Vec<usize> = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let (a, b, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, s] => (a, b, s),
        _ => return Err(bad()),
    };
    if step == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).step_by(step).collect())
}

pub fn parse_branches(spec: &str) -> CliResult<Vec<Branch>> {
    match spec {
        "both" => Ok(Branch::BOTH.to_vec()),
        other => other.parse::<Branch>().map(|b| vec![b]).map_err(CliError::Usage),
    }
}

pub fn parse_early_stop(spec: &str, dim: usize) -> CliResult<EarlyStop> {
    if spec == "default" {
        return Ok(EarlyStop::for_dim(dim));
    }
    let bad = || CliError::Usage(format!("invalid early-stop '{spec}', expected θ,k,g"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [t, k, g] = parts[..] else { return Err(bad()) };
    let threshold: f64 = t.parse().map_err(|_| bad())?;
    if !(threshold > 0.0) {
        return Err(bad());
    }
    Ok(EarlyStop {
        threshold,
        count: k.parse().map_err(|_| bad())?,
        grace: g.parse().map_err(|_| bad())?,
    })
}

fn matrix_json<T: Scalar>(p: &Projector<T>) -> Value {
    let m = p.matrix();
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| entry_json(m[(i, j)]))
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    Value::Array(rows)
}

fn entry_json<T: Scalar>(x: T) -> Value {
    let (re, im) = x.parts();
    match T::FIELD {
        Field::Real => json!(re),
        Field::Complex => json!([re, im]),
    }
}

fn optimize_outputs<T: Scalar>(expr: &BellExpression, config: &SeesawConfig) -> CliResult<(f64, Value)> {
    let r: SeesawResult<T> = run_seesaw(expr, config)?;
    let residual = stationarity_residual(expr, &r.alice, &r.bob, &r.state)?;
    let outputs = json!({
        "value": r.value,
        "iterations": r.cycles_used,
        "converged": r.converged,
        "residual": residual,
        "restart_index": r.restart_index,
        "restarts_run": r.restarts_run,
        "restarts_abandoned": r.restarts_abandoned,
        "early_stopped": r.early_stopped,
        "alice": r.alice.iter().map(matrix_json).collect::<Vec<_>>(),
        "bob": r.bob.iter().map(matrix_json).collect::<Vec<_>>(),
        "state": r.state.coeffs().iter().map(|&x| entry_json(x)).collect::<Vec<_>>(),
    });
    Ok((r.value, outputs))
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn csv_header() -> String {
    csv_line(&CSV_COLUMNS.map(String::from))
}

fn opt_string<D: ToString>(x: Option<D>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn render_json(record: &RunRecord) -> String {
    let mut v = serde_json::to_value(record).expect("record serializes");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn cmd_optimize(args: &OptimizeArgs) -> CliResult<(RunRecord, String)> {
    let start = Instant::now();
    let (expr, input) = load_inequality(&args.ineq)?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let mut config = SeesawConfig::new(args.dim).restarts(args.restarts).seed(seed);
    config.tol_value = args.tol;
    config.max_cycles = args.max_cycles;
    config.jobs = args.jobs.max(1);
    config.early_stop = args
        .early_stop
        .as_deref()
        .map(|s| parse_early_stop(s, args.dim))
        .transpose()?;
    config.validate()?;
    let (value, outputs) = match args.field {
        Field::Real => optimize_outputs::<f64>(&expr, &config)?,
        Field::Complex => optimize_outputs::<Complex64>(&expr, &config)?,
    };
    let record = RunRecord {
        command: "optimize".into(),
        input,
        config: json!({
            "dim": args.dim,
            "field": args.field,
            "restarts": args.restarts,
            "seed": seed,
            "tol": args.tol,
            "max_cycles": args.max_cycles,
            "early_stop": config.early_stop.map(|e| json!({
                "threshold": e.threshold, "count": e.count, "grace": e.grace,
            })),
            "jobs": config.jobs,
        }),
        outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = match args.format {
        Format::Json => render_json(&record),
        Format::Csv => {
            let o = &record.outputs;
            let mut s = csv_header();
            s += &csv_line(&[
                args.dim.to_string(),
                String::new(),
                fmt_num(value),
                String::new(),
                o["iterations"].to_string(),
                o["converged"].to_string(),
                String::new(),
                seed.to_string(),
            ]);
            s
        }
    };
    Ok((record, text))
}

fn chain_residual(r: &ChainResult) -> CliResult<Option<f64>> {
    if r.params.n > RESIDUAL_MAX_DIM {
        return Ok(None);
    }
    let report = chain::verify_optimality(&r.params)?;
    Ok(Some(report.max_gain.max(report.state_gain)))
}

fn cmd_i3322(args: &ChainArgs) -> CliResult<(RunRecord, String)> {
    let start = Instant::now();
    let dims = match (&args.dim, &args.sweep) {
        (Some(n), _) => vec![*n],
        (None, Some(s)) => parse_sweep(s)?,
        (None, None) => return Err(CliError::Usage("one of --dim or --sweep is required".into())),
    };
    let branches = parse_branches(&args.branch)?;
    let options = ChainOptions {
        init: None,
        split: args.split,
        pinned: args.pin.clone(),
        tol: args.tol,
        max_cycles: args.max_cycles,
    };
    let results = chain::sweep_results(&dims, &branches, &options, args.jobs.max(1))?;
    let expr = builtin_i3322();
    let input = InputDigest {
        source: "i3322".into(),
        sha256: sha256_hex(serialize_bell_expression(&expr).as_bytes()),
    };

    let mut rows = Vec::with_capacity(results.len());
    for r in &results {
        let mut row = json!({
            "n": r.params.n,
            "branch": r.params.branch.value() as i64,
            "value": r.value,
            "distance": r.distance(),
            "iterations": r.iterations,
            "converged": r.converged,
            "sign_change_index": r.sign_change_index,
            "residual": chain_residual(r)?,
        });
        if args.dump {
            row["c"] = json!(r.params.c);
            row["lambda"] = json!(r.params.lambda);
        }
        rows.push(row);
    }
    let record = RunRecord {
        command: "i3322".into(),
        input,
        config: json!({
            "dims": dims,
            "branches": branches.iter().map(|b| b.value() as i64).collect::<Vec<_>>(),
            "split": args.split,
            "pinned": args.pin,
            "tol": args.tol,
            "max_cycles": args.max_cycles,
            "jobs": args.jobs.max(1),
        }),
        outputs: json!({ "rows": rows }),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = match args.format {
        Format::Json => render_json(&record),
        Format::Csv => {
            let mut s = csv_header();
            for r in &results {
                s += &csv_line(&[
                    r.params.n.to_string(),
                    r.params.branch.to_string(),
                    fmt_num(r.value),
                    fmt_num(r.distance()),
                    r.iterations.to_string(),
                    r.converged.to_string(),
                    opt_string(r.sign_change_index),
                    String::new(),
                ]);
            }
            if args.dump {
                s.push('\n');
                s += &csv_line(&PROFILE_COLUMNS.map(String::from));
                for r in &results {
                    for i in 0..=r.params.n {
                        let lambda = if i == 0 { String::new() } else { fmt_num(r.params.lambda[i - 1]) };
                        s += &csv_line(&[
                            r.params.n.to_string(),
                            r.params.branch.to_string(),
                            i.to_string(),
                            fmt_num(r.params.c[i]),
                            lambda,
                        ]);
                    }
                }
            }
            s
        }
    };
    Ok((record, text))
}

fn cmd_classical(args: &ClassicalArgs) -> CliResult<(RunRecord, String)> {
    let start = Instant::now();
    let (expr, input) = load_inequality(&args.ineq)?;
    let value = classical_bound(&expr)?;
    let record = RunRecord {
        command: "classical".into(),
        input,
        config: json!({ "m_a": expr.m_a(), "m_b": expr.m_b() }),
        outputs: json!({ "value": value }),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = match args.format {
        TextFormat::Text => format!("{}\n", fmt_num(value)),
        TextFormat::Json => render_json(&record),
    };
    Ok((record, text))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}

/// Runs a parsed command, returning its record.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> std::result::Result<RunRecord, CliError> {
    let (record, text, out) = match &cli.command {
        Command::Optimize(a) => {
            let (r, t) = cmd_optimize(a)?;
            (r, t, a.out.as_deref())
        }
        Command::I3322(a) => {
            let (r, t) = cmd_i3322(a)?;
            (r, t, a.out.as_deref())
        }
        Command::Classical(a) => {
            let (r, t) = cmd_classical(a)?;
            (r, t, a.out.as_deref())
        }
    };
    emit(&text, out, stdout)?;
    Ok(record)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

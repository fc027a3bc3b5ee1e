//! Command-line front end: `marcumq integral`, `marcumq detect pd-curve`,
//! `marcumq detect roc`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 convergence or instability
//! failure, 4 I/O failure. Tables go to `--out` (default stdout) as CSV or
//! JSON; diagnostics go to stderr. Every number is rounded to `--precision`
//! significant digits and printed in the shortest form that reads back to the
//! rounded value. Failed cells hold the sentinel `nan`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::detection::{pd_vs_snr_curve, roc_curve};
use crate::fading::{derive_params, FadingFormat};
use crate::integrals::{closed_form, quadrature_oracle, series, IntegralParams};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

#[derive(Debug, Parser)]
#[command(name = "marcumq", version, about = "Marcum-Q integrals and energy detection over eta-mu fading")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the integral of x^(2k-1) Q_m(ax, b) exp(-p x^2) over (0, inf).
    Integral(IntegralArgs),
    /// Energy-detection tables.
    #[command(subcommand)]
    Detect(DetectCommand),
}

#[derive(Debug, Subcommand)]
enum DetectCommand {
    /// Average detection probability against average SNR.
    PdCurve(PdCurveArgs),
    /// Complementary ROC (missed detection against false alarm) at a fixed SNR.
    Roc(RocArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Series,
    Quadrature,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Significant digits of every emitted number.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,
}

#[derive(Debug, Args)]
struct IntegralArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    /// Evaluate only this route; all three by default.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Series truncation bound and quadrature absolute tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FadingArgs {
    #[arg(long)]
    u: f64,
    #[arg(long, allow_negative_numbers = true)]
    eta: f64,
    #[arg(long)]
    mu: f64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    fading_format: u8,
}

#[derive(Debug, Args)]
struct PdCurveArgs {
    #[command(flatten)]
    fading: FadingArgs,
    #[arg(long)]
    pf: f64,
    #[arg(long, allow_negative_numbers = true)]
    snr_db_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    snr_db_stop: f64,
    #[arg(long)]
    snr_db_step: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RocArgs {
    #[command(flatten)]
    fading: FadingArgs,
    #[arg(long, allow_negative_numbers = true)]
    snr_db: f64,
    #[arg(long)]
    pf_start: f64,
    #[arg(long)]
    pf_stop: f64,
    #[arg(long)]
    pf_points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    let (table, output, code) = match &cli.command {
        Command::Integral(args) => integral_table(args, err),
        Command::Detect(DetectCommand::PdCurve(args)) => pd_curve_table(args, err),
        Command::Detect(DetectCommand::Roc(args)) => roc_table(args, err),
    };
    let Some(table) = table else {
        return code;
    };
    let text = table.render(output.format, output.precision as usize);
    if let Err(e) = emit(&output.out, &text, out) {
        let _ = writeln!(err, "error: cannot write {}: {e}", output.out.display());
        return EXIT_IO;
    }
    code
}

fn emit(path: &PathBuf, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(&'static str),
    Failed,
    Empty,
}

impl From<Result<f64>> for Cell {
    fn from(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Cell::Num(v),
            Err(_) => Cell::Failed,
        }
    }
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

/// Rounds to `precision` significant digits.
pub fn round_sig(x: f64, precision: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", precision.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Shortest text that reads back to `round_sig(x, precision)`.
pub fn format_number(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return "nan".to_string();
    }
    serde_json::to_string(&round_sig(x, precision)).unwrap_or_else(|_| "nan".to_string())
}

impl Table {
    fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => format_number(*v, precision),
                            Cell::Int(n) => n.to_string(),
                            Cell::Text(t) => t.to_string(),
                            Cell::Failed => "nan".to_string(),
                            Cell::Empty => String::new(),
                        })
                        .collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (key, c) in self.header.iter().zip(row) {
                            let v = match c {
                                Cell::Num(v) if v.is_finite() => {
                                    serde_json::Number::from_f64(round_sig(*v, precision))
                                        .map_or(Value::from("nan"), Value::Number)
                                }
                                Cell::Int(n) => Value::from(*n),
                                Cell::Text(t) => Value::from(*t),
                                Cell::Num(_) | Cell::Failed => Value::from("nan"),
                                Cell::Empty => Value::Null,
                            };
                            obj.insert((*key).to_string(), v);
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(records)).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

fn integral_table<'a>(args: &'a IntegralArgs, err: &mut dyn Write) -> (Option<Table>, &'a OutputArgs, i32) {
    let output = &args.output;
    let params = match IntegralParams::new(args.a, args.b, args.k, args.m, args.p) {
        Ok(p) => p,
        Err(e) => return (None, output, report(err, &e)),
    };
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        let e = Error::Domain(format!("--tol must be finite and > 0, got {}", args.tol));
        return (None, output, report(err, &e));
    }
    let methods = match args.method {
        Some(m) => vec![m],
        None => vec![Method::Closed, Method::Series, Method::Quadrature],
    };
    let mut rows = Vec::new();
    let mut first_error = None;
    for method in &methods {
        let result = match method {
            Method::Closed => closed_form(&params).map(|v| (v, Cell::Empty, Cell::Empty)),
            Method::Series => {
                series(&params, args.tol).map(|r| (r.value, Cell::Num(r.error_bound), Cell::Int(r.terms_used)))
            }
            Method::Quadrature => quadrature_oracle(&params, args.tol).map(|v| (v, Cell::Num(args.tol), Cell::Empty)),
        };
        match result {
            Ok((value, bound, terms)) => rows.push(vec![Cell::Text(method.name()), Cell::Num(value), bound, terms]),
            Err(e) => {
                let _ = writeln!(err, "warning: {} method failed: {e}", method.name());
                rows.push(vec![Cell::Text(method.name()), Cell::Failed, Cell::Failed, Cell::Empty]);
                first_error.get_or_insert(e);
            }
        }
    }
    let all_failed = rows.iter().all(|r| r[1] == Cell::Failed);
    let table = Table {
        header: &["method", "value", "error_bound", "terms_used"],
        rows,
    };
    match first_error {
        Some(e) if all_failed => (None, output, exit_code(&e)),
        _ => (Some(table), output, EXIT_OK),
    }
}

fn fading_params(f: &FadingArgs) -> Result<crate::fading::EtaMuParams> {
    derive_params(FadingFormat::from_index(f.fading_format)?, f.eta, f.mu)
}

/// start, start + step, … up to stop inclusive.
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) {
        return Err(Error::Domain("SNR grid limits must be finite".into()));
    }
    if start > stop {
        return Err(Error::Domain(format!("empty SNR grid: start {start} > stop {stop}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("SNR step must be finite and > 0, got {step}")));
    }
    let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if n > 1_000_000 {
        return Err(Error::Domain(format!("SNR grid of {n} points is too large")));
    }
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// `points` log-spaced values from start to stop, both included exactly.
pub fn pf_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop < 1.0) {
        return Err(Error::Domain(format!(
            "false-alarm grid must lie in (0, 1), got [{start}, {stop}]"
        )));
    }
    if start > stop {
        return Err(Error::Domain(format!("empty false-alarm grid: start {start} > stop {stop}")));
    }
    if points == 0 || (points == 1 && start != stop) {
        return Err(Error::Domain(format!(
            "--pf-points must be >= 2 for a non-degenerate range, got {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let (lo, hi) = (start.ln(), stop.ln());
    let last = points - 1;
    Ok((0..points)
        .map(|i| match i {
            0 => start,
            i if i == last => stop,
            i => (lo + (hi - lo) * i as f64 / last as f64).exp(),
        })
        .collect())
}

fn pd_curve_table<'a>(args: &'a PdCurveArgs, err: &mut dyn Write) -> (Option<Table>, &'a OutputArgs, i32) {
    let output = &args.output;
    let setup = fading_params(&args.fading).and_then(|p| {
        let grid = snr_grid(args.snr_db_start, args.snr_db_stop, args.snr_db_step)?;
        pd_vs_snr_curve(args.fading.u, args.pf, &p, &grid)
    });
    let curve = match setup {
        Ok(c) => c,
        Err(e) => return (None, output, report(err, &e)),
    };
    for (snr_db, e) in curve.errors() {
        let _ = writeln!(err, "warning: snr_db = {snr_db}: {e}");
    }
    let first_error = curve.errors().next().map(|(_, e)| e.clone());
    let any_ok = curve.rows.iter().any(|r| r.is_ok());
    let rows = curve
        .rows
        .into_iter()
        .map(|r| {
            let diff = r.abs_diff().map_or(Cell::Failed, Cell::Num);
            vec![Cell::Num(r.snr_db), r.pd_analytic.into(), r.pd_oracle.into(), diff]
        })
        .collect();
    let table = Table {
        header: &["snr_db", "pd_analytic", "pd_oracle", "abs_diff"],
        rows,
    };
    match first_error {
        Some(e) if !any_ok => (None, output, exit_code(&e)),
        _ => (Some(table), output, EXIT_OK),
    }
}

fn roc_table<'a>(args: &'a RocArgs, err: &mut dyn Write) -> (Option<Table>, &'a OutputArgs, i32) {
    let output = &args.output;
    let setup = fading_params(&args.fading).and_then(|p| {
        let grid = pf_grid(args.pf_start, args.pf_stop, args.pf_points)?;
        crate::detection::DetectorConfig::for_pf(args.fading.u, grid[0], crate::detection::db_to_linear(args.snr_db))?;
        Ok(roc_curve(args.fading.u, args.snr_db, &p, &grid).into_iter().zip(grid).collect::<Vec<_>>())
    });
    let points = match setup {
        Ok(p) => p,
        Err(e) => return (None, output, report(err, &e)),
    };
    let mut first_error = None;
    let mut any_ok = false;
    let mut rows = Vec::new();
    for (point, pf) in points {
        match point {
            Ok(pt) => {
                any_ok = true;
                rows.push(vec![Cell::Num(pt.pf), Cell::Num(pt.pd), Cell::Num(pt.pm)]);
            }
            Err(e) => {
                let _ = writeln!(err, "warning: pf = {pf}: {e}");
                rows.push(vec![Cell::Num(pf), Cell::Failed, Cell::Failed]);
                first_error.get_or_insert(e);
            }
        }
    }
    let table = Table {
        header: &["pf", "pd", "pm"],
        rows,
    };
    match first_error {
        Some(e) if !any_ok => (None, output, exit_code(&e)),
        _ => (Some(table), output, EXIT_OK),
    }
}

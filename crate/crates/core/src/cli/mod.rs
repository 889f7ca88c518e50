//! Command-line front end: `analyze`, `verify` and `batch`.

mod input;
mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use input::{parse_instance, InstanceSpec};
pub use report::{agreement, AnalysisReport, CoefficientRow, EmpiricalSection, InstanceEcho, RootRow, AGREEMENT_TOL};

use crate::charpoly::DEFAULT_PRECISION_CAP;
use crate::decompose::{analyze, Config, Outcome};
use crate::numerics::{DEFAULT_PRECISION, MIN_PRECISION};
use crate::recurrence::{empirical_ratio, fixed_point_check};

pub const DEFAULT_K_MAX: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-12;
/// Tolerance of the ratio-map fixed-point test of a predicted limit.
pub const FIXED_POINT_TOL: f64 = 1e-20;

#[derive(Parser, Debug)]
#[command(name = "ratio-limit", version, about = "Ratio limits of linear recurrence sequences")]
pub struct Cli {
    /// Starting working precision in bits
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<usize>,
    /// Write reports to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predict the ratio limit of one instance
    Analyze {
        /// Instance file (JSON)
        file: PathBuf,
    },
    /// Predict and cross-check against the iterated sequence
    Verify {
        /// Instance file (JSON)
        file: PathBuf,
        /// Number of terms to iterate [default: 200]
        #[arg(long)]
        k_max: Option<usize>,
        /// Convergence tolerance for the ratio sequence [default: 1e-12]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Verify every record of a newline-delimited catalog
    Batch {
        /// Catalog with one instance object per line
        file: PathBuf,
        /// Number of terms to iterate [default: 200]
        #[arg(long)]
        k_max: Option<usize>,
        /// Convergence tolerance for the ratio sequence [default: 1e-12]
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Settings given on the command line; they override those in the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub precision: Option<usize>,
    pub k_max: Option<usize>,
    pub tol: Option<f64>,
}

/// Analyzes one instance, optionally with the empirical cross-check.
pub fn evaluate(spec: &InstanceSpec, overrides: &Overrides, empirical: bool) -> Result<AnalysisReport, String> {
    let start = Instant::now();
    let precision = overrides.precision.or(spec.precision_bits).unwrap_or(DEFAULT_PRECISION);
    if precision < MIN_PRECISION {
        return Err(crate::Error::PrecisionTooLow(precision).to_string());
    }
    let k_max = overrides.k_max.or(spec.k_max).unwrap_or(DEFAULT_K_MAX);
    let tol = overrides.tol.or(spec.tol).unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("tolerance must be positive, got {tol}"));
    }
    let config = Config {
        precision,
        cap: DEFAULT_PRECISION_CAP.max(precision),
    };
    let inst = &spec.instance;
    let analysis = analyze(inst, &config).map_err(|e| e.to_string())?;
    let section = empirical.then(|| {
        let estimate = empirical_ratio(inst, k_max, tol);
        let fixed_point = match &analysis.verdict.outcome {
            Outcome::LimitExists { value, .. } => Some(fixed_point_check(inst.signature(), value, FIXED_POINT_TOL)),
            _ => None,
        };
        EmpiricalSection {
            k_max,
            tol,
            estimate,
            fixed_point,
        }
    });
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(AnalysisReport::new(inst, analysis, section, elapsed_ms))
}

/// Counts over a catalog.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub limit_exists: usize,
    pub no_limit: usize,
    pub indeterminate: usize,
    pub disagreements: usize,
    pub errors: usize,
}

/// One line of structured batch output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    /// 1-based line number in the catalog.
    pub line: usize,
    // not flattened: buffered content loses arbitrary-precision numbers
    pub result: BatchResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchResult {
    Report(Box<AnalysisReport>),
    Error(String),
}

/// Verifies every nonblank line of a catalog in parallel; results keep the
/// input order.
pub fn run_batch(text: &str, overrides: &Overrides) -> (Vec<BatchRecord>, BatchSummary) {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let records: Vec<BatchRecord> = lines
        .par_iter()
        .map(|&(line, l)| {
            let result = parse_instance(l)
                .and_then(|spec| evaluate(&spec, overrides, true))
                .map_or_else(BatchResult::Error, |r| BatchResult::Report(Box::new(r)));
            BatchRecord { line, result }
        })
        .collect();
    let mut summary = BatchSummary::default();
    for r in &records {
        match &r.result {
            BatchResult::Error(_) => summary.errors += 1,
            BatchResult::Report(rep) => {
                match rep.verdict.outcome {
                    Outcome::LimitExists { .. } => summary.limit_exists += 1,
                    Outcome::NoLimit => summary.no_limit += 1,
                    Outcome::Indeterminate { .. } => summary.indeterminate += 1,
                }
                if rep.agreement == Some(false) {
                    summary.disagreements += 1;
                }
            }
        }
    }
    (records, summary)
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, String> {
    let mut overrides = Overrides {
        precision: cli.precision,
        ..Overrides::default()
    };
    match &cli.command {
        Command::Analyze { file } | Command::Verify { file, .. } => {
            let empirical = matches!(cli.command, Command::Verify { .. });
            if let Command::Verify { k_max, tol, .. } = &cli.command {
                overrides.k_max = *k_max;
                overrides.tol = *tol;
            }
            let text = read(file)?;
            let spec = parse_instance(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let report = evaluate(&spec, &overrides, empirical)?;
            let rendered = match cli.format {
                Format::Text => report.to_text(),
                Format::Structured => structured_line(&report)?,
            };
            emit(cli.out.as_deref(), &rendered)?;
            Ok(report.exit_code())
        }
        Command::Batch { file, k_max, tol } => {
            overrides.k_max = *k_max;
            overrides.tol = *tol;
            let text = read(file)?;
            let (records, summary) = run_batch(&text, &overrides);
            let mut rendered = String::new();
            for r in &records {
                match (&r.result, cli.format) {
                    (_, Format::Structured) => rendered.push_str(&structured_line(r)?),
                    (BatchResult::Report(rep), Format::Text) => {
                        rendered.push_str(&format!("== line {} ==\n{}\n", r.line, rep.to_text()));
                    }
                    (BatchResult::Error(_), Format::Text) => {}
                }
                if let BatchResult::Error(msg) = &r.result {
                    eprintln!("line {}: {msg}", r.line);
                }
            }
            emit(cli.out.as_deref(), &rendered)?;
            match cli.format {
                Format::Text => eprintln!(
                    "limit_exists={} no_limit={} indeterminate={} disagreements={} errors={}",
                    summary.limit_exists, summary.no_limit, summary.indeterminate, summary.disagreements, summary.errors
                ),
                Format::Structured => eprintln!("{}", serde_json::to_string(&summary).map_err(|e| e.to_string())?),
            }
            Ok(if summary.disagreements > 0 {
                3
            } else if summary.errors > 0 {
                1
            } else {
                0
            })
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn structured_line<T: Serialize>(value: &T) -> Result<String, String> {
    let mut s = serde_json::to_string(value).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    let result = match out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            w.write_all(text.as_bytes())?;
            w.flush()
        }),
        None => {
            let mut w = io::stdout().lock();
            w.write_all(text.as_bytes()).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| format!("cannot write report: {e}"))
}

//! Command-line front end for the parametric minimum flow solver.
//!
//! `paraflow solve` reads a network file, writes the exact solution as JSON
//! and optionally a value-function CSV; `paraflow verify` re-checks a
//! saved solution against the static oracle.

pub mod format;
pub mod plot;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use paraflow::{
    solve, solve_with_base_flow, verify, verify_pieces, DynamicNetwork, Error, Rational, ValuePiece,
};

use format::{FlowFile, NetworkFile, ReportDoc, SolutionDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
/// A solver invariant broke; never expected on valid input.
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "paraflow",
    version,
    about = "Parametric minimum flows over time"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the minimum flow value function over [0, Λ].
    Solve(SolveArgs),
    /// Check a saved solution against fixed-λ static minimum flows.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Network file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Solution document; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write "lambda,value" samples here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Evenly spaced CSV points in addition to the breakpoints.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Compare against the static oracle; exit 3 on any mismatch.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Include every flow decrease in the solution document.
    #[arg(long)]
    pub trace: bool,
    /// Start from this base flow instead of computing one.
    #[arg(long)]
    pub feasible_flow: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Network file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Solution document written by `solve`.
    #[arg(long)]
    pub solution: PathBuf,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Random oracle samples per interval, on top of both ends and the midpoint.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure carrying its exit code and a diagnostic for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible => EXIT_INFEASIBLE,
            Error::Input(_) | Error::InvalidNetwork(_) | Error::InvalidBaseFlow(_) => {
                EXIT_INVALID_INPUT
            }
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Verify(a) => run_verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("paraflow: {}", f.message);
            f.code
        }
    }
}

pub fn run_solve(args: &SolveArgs) -> Result<i32, Failure> {
    let net = load_network(&args.input)?;
    let sol = match &args.feasible_flow {
        Some(path) => {
            let file: FlowFile = read_json(path)?;
            let base = file
                .to_flow(&net)
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
            solve_with_base_flow(&net, &base)?
        }
        None => solve(&net)?,
    };

    let mut doc = SolutionDoc::new(&net, &sol, args.trace);
    let mut code = EXIT_OK;
    if args.verify {
        let report = verify(&sol, &net, args.sampling.samples, args.sampling.seed);
        report_mismatches(&report.mismatches);
        if !report.all_match {
            code = EXIT_MISMATCH;
        }
        doc.verification = Some(ReportDoc::from(&report));
    }
    write_json(args.output.as_deref(), &doc)?;
    if let Some(path) = &args.csv {
        write_file(path, &plot::value_csv(&sol, args.grid))?;
    }
    Ok(code)
}

pub fn run_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let net = load_network(&args.input)?;
    let doc: SolutionDoc = read_json(&args.solution)?;
    let pieces = doc.value_pieces();
    let gaps = coverage_problems(&pieces, &net.lambda_max);
    for gap in &gaps {
        eprintln!("paraflow: {gap}");
    }
    let report = verify_pieces(&pieces, &net, args.sampling.samples, args.sampling.seed);
    report_mismatches(&report.mismatches);
    write_json(args.output.as_deref(), &ReportDoc::from(&report))?;
    Ok(if report.all_match && gaps.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

/// Pieces must tile `[0, Λ]` without gaps or overlaps.
fn coverage_problems(pieces: &[ValuePiece], lambda_max: &Rational) -> Vec<String> {
    let mut problems = Vec::new();
    let mut expected = Rational::zero();
    for (k, p) in pieces.iter().enumerate() {
        if p.lambda_lo != expected {
            problems.push(format!(
                "piece {k} starts at λ={}, expected {expected}",
                p.lambda_lo
            ));
        }
        if p.lambda_hi <= p.lambda_lo {
            problems.push(format!("piece {k} is empty"));
        }
        expected = p.lambda_hi.clone();
    }
    if &expected != lambda_max {
        problems.push(format!(
            "pieces end at λ={expected}, expected Λ={lambda_max}"
        ));
    }
    problems
}

fn report_mismatches(mismatches: &[paraflow::Sample]) {
    for s in mismatches {
        let oracle = s
            .oracle
            .as_ref()
            .map_or_else(|| "infeasible".to_string(), Rational::to_string);
        eprintln!(
            "paraflow: mismatch at λ={} (piece {}): solution {}, oracle {oracle}",
            s.lambda, s.piece, s.parametric
        );
    }
}

/// Reads and validates a network file; violations are reported one per line.
pub fn load_network(path: &Path) -> Result<DynamicNetwork, Failure> {
    let file: NetworkFile = read_json(path)?;
    let net = file.to_network();
    let violations = net.validate();
    if violations.is_empty() {
        Ok(net)
    } else {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        Err(Failure::invalid(format!(
            "{}: invalid network:\n{}",
            path.display(),
            lines.join("\n")
        )))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    match path {
        Some(p) => write_file(p, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure {
                code: EXIT_INVALID_INPUT,
                message: format!("stdout: {e}"),
            }),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

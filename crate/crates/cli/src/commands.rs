//! Argument parsing and the six commands.
//!
//! Commands return their standard output as a string together with the exit
//! status, so the binary is a thin wrapper and tests can call them directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use frametensor::frames::{self, frame_bounds, FrameBounds};
use frametensor::numeric::DEFAULT_SIZE_CAP;
use frametensor::tensor::{op_canonical_dual, op_frame_bounds, tensor_frame_capped};
use frametensor::{Error, Frame};
use serde_json::json;
use thiserror::Error;

use crate::format::{self, FormatError, FrameFile};
use crate::verify::{self, CheckRecord, UserInstance};

/// Relative agreement demanded between product bounds and optimal bounds.
const TENSOR_BOUNDS_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "frametensor", version, about = "Frames in finite-dimensional tensor products")]
pub struct Cli {
    /// Seed for random generation and the verification suite.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Output file.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the optimal frame bounds and classification of a frame file.
    Analyze { path: PathBuf },
    /// Write the canonical dual of a frame or operator frame.
    Dual { path: PathBuf },
    /// Write the tensor product of two or more frames.
    Tensor {
        #[arg(num_args = 2.., required = true)]
        paths: Vec<PathBuf>,
    },
    /// Reconstruct a vector from its frame coefficients.
    Reconstruct { frame: PathBuf, vector: PathBuf },
    /// Write a seeded random frame.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        /// Draw a normalized tight frame.
        #[arg(long)]
        tight: bool,
    },
    /// Run the verification suite on random and user-supplied instances.
    Verify {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) | CliError::Usage(_) => 2,
            CliError::CheckFailed(_) => 1,
            CliError::Compute(e) => match e {
                Error::NotAFrame { .. } => 3,
                Error::SizeCap { .. } => 4,
                Error::DimensionMismatch { .. }
                | Error::ShapeMismatch { .. }
                | Error::EmptyFamily
                | Error::ZeroDimension
                | Error::NonFinite { .. }
                | Error::InvalidArgument(_) => 2,
                _ => 1,
            },
        }
    }
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, exit: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(path, cli.format),
        Command::Dual { path } => cmd_dual(path, out, cli.format),
        Command::Tensor { paths } => cmd_tensor(paths, out, cli.format),
        Command::Reconstruct { frame, vector } => cmd_reconstruct(frame, vector, cli.format),
        Command::Random { dim, count, tight } => cmd_random(*dim, *count, *tight, cli.seed, out),
        Command::Verify { trials, paths } => cmd_verify(cli.seed, *trials, paths, out, cli.format),
    }
}

/// Decimal with at most ten places, trailing zeros trimmed to one.
fn fmt_bound(x: f64) -> String {
    let s = format!("{:.10}", x);
    let s = s.trim_end_matches('0');
    let s = if s.ends_with('.') { format!("{s}0") } else { s.to_string() };
    if s == "-0.0" { "0.0".into() } else { s }
}

fn classification(b: &FrameBounds) -> String {
    if !b.is_frame {
        format!("not a frame (lower bound {})", fmt_bound(b.lower))
    } else if b.is_normalized_tight {
        "normalized tight".into()
    } else if b.is_tight {
        "tight".into()
    } else {
        "frame, not tight".into()
    }
}

fn bounds_json(b: &FrameBounds) -> serde_json::Value {
    json!({
        "lower": b.lower,
        "upper": b.upper,
        "is_frame": b.is_frame,
        "is_tight": b.is_tight,
        "is_normalized_tight": b.is_normalized_tight,
    })
}

fn render(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("json renders") + "\n"
}

fn read_frame(path: &Path) -> Result<Frame, CliError> {
    match format::read_file(path)? {
        FrameFile::Frame(f) => Ok(f),
        other => Err(CliError::Usage(format!(
            "{}: expected a frame, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

/// Write to `out` if given, else append the file text to `stdout`.
fn emit(file: &FrameFile, out: Option<&Path>, stdout: &mut String) -> Result<(), CliError> {
    match out {
        Some(p) => format::write_file(p, file)?,
        None => stdout.push_str(&format::to_string(file)),
    }
    Ok(())
}

pub fn cmd_analyze(path: &Path, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let file = format::read_file(path)?;
    let (shape, count, b) = match &file {
        FrameFile::Frame(f) => (format!("dim {}", f.dim()), f.len(), frame_bounds(f)?),
        FrameFile::OperatorFrame(of) => (
            format!("dim_h {}, dim_k {}", of.dim_h(), of.dim_k()),
            of.len(),
            op_frame_bounds(of)?,
        ),
        FrameFile::Vector(_) => {
            return Err(CliError::Usage(format!("{}: cannot analyze a vector", path.display())))
        }
    };
    let stdout = match fmt {
        OutputFormat::Text => format!(
            "{} {}, {} elements\nbounds {} {}, {}\n",
            file.kind(),
            shape,
            count,
            fmt_bound(b.lower),
            fmt_bound(b.upper),
            classification(&b)
        ),
        OutputFormat::Machine => {
            let mut v = bounds_json(&b);
            v["kind"] = json!(file.kind());
            v["count"] = json!(count);
            render(v)
        }
    };
    Ok(Outcome::ok(stdout))
}

pub fn cmd_dual(path: &Path, out: Option<&Path>, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let (dual, b) = match format::read_file(path)? {
        FrameFile::Frame(f) => {
            let d = frames::canonical_dual(&f)?;
            let b = frame_bounds(&d)?;
            (FrameFile::Frame(d), b)
        }
        FrameFile::OperatorFrame(of) => {
            let d = op_canonical_dual(&of)?;
            let b = op_frame_bounds(&d)?;
            (FrameFile::OperatorFrame(d), b)
        }
        FrameFile::Vector(_) => {
            return Err(CliError::Usage(format!("{}: a vector has no dual", path.display())))
        }
    };
    let mut stdout = match fmt {
        OutputFormat::Text => format!("dual bounds {} {}\n", fmt_bound(b.lower), fmt_bound(b.upper)),
        OutputFormat::Machine if out.is_some() => render(bounds_json(&b)),
        OutputFormat::Machine => String::new(),
    };
    emit(&dual, out, &mut stdout)?;
    Ok(Outcome::ok(stdout))
}

pub fn cmd_tensor(paths: &[PathBuf], out: Option<&Path>, fmt: OutputFormat) -> Result<Outcome, CliError> {
    if paths.len() < 2 {
        return Err(CliError::Usage("tensor needs at least two frame files".into()));
    }
    let factors = paths.iter().map(|p| read_frame(p)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Frame> = factors.iter().collect();
    let product = tensor_frame_capped(&refs, DEFAULT_SIZE_CAP)?;
    let mut lo = 1.0;
    let mut hi = 1.0;
    for f in &factors {
        let b = frame_bounds(f)?;
        lo *= b.lower;
        hi *= b.upper;
    }
    let b = frame_bounds(&product)?;
    let mismatch = ((b.lower - lo).abs() / lo.max(1e-300)).max((b.upper - hi).abs() / hi);
    // A product with a non-frame factor has lower bound 0 on both sides.
    let mismatch = if lo == 0.0 { b.lower.abs() / hi.max(1e-300) } else { mismatch };
    let mut stdout = match fmt {
        OutputFormat::Text => format!(
            "product bounds {} {}\noptimal bounds {} {}, {}\n",
            fmt_bound(lo),
            fmt_bound(hi),
            fmt_bound(b.lower),
            fmt_bound(b.upper),
            classification(&b)
        ),
        OutputFormat::Machine if out.is_some() => render(json!({
            "product_lower": lo,
            "product_upper": hi,
            "optimal": bounds_json(&b),
            "mismatch": mismatch,
        })),
        OutputFormat::Machine => String::new(),
    };
    if !(mismatch <= TENSOR_BOUNDS_TOL) {
        return Err(CliError::CheckFailed(format!(
            "{stdout}product and optimal bounds differ by {mismatch:.3e} (tolerance {TENSOR_BOUNDS_TOL:e})"
        )));
    }
    emit(&FrameFile::Frame(product), out, &mut stdout)?;
    Ok(Outcome::ok(stdout))
}

pub fn cmd_reconstruct(frame: &Path, vector: &Path, fmt: OutputFormat) -> Result<Outcome, CliError> {
    let f = read_frame(frame)?;
    let x = match format::read_file(vector)? {
        FrameFile::Vector(x) => x,
        other => {
            return Err(CliError::Usage(format!(
                "{}: expected a vector, found {}",
                vector.display(),
                other.kind()
            )))
        }
    };
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            context: "reconstruct",
            expected: f.dim(),
            found: x.dim(),
        }
        .into());
    }
    let r = frames::reconstruct(&f, &x)?;
    let stdout = match fmt {
        OutputFormat::Text => format!(
            "residual (dual coefficients) {:.3e}\nresidual (frame coefficients) {:.3e}\n",
            r.residual_primal, r.residual_dual
        ),
        OutputFormat::Machine => render(json!({
            "residual_primal": r.residual_primal,
            "residual_dual": r.residual_dual,
        })),
    };
    Ok(Outcome::ok(stdout))
}

pub fn cmd_random(dim: usize, count: usize, tight: bool, seed: u64, out: Option<&Path>) -> Result<Outcome, CliError> {
    if dim == 0 || count == 0 {
        return Err(CliError::Usage("--dim and --count must be positive".into()));
    }
    if tight && count < dim {
        return Err(CliError::Usage(format!(
            "a tight frame in dimension {dim} needs at least {dim} vectors, got {count}"
        )));
    }
    let f = if tight {
        frames::random_tight_frame(dim, count, seed)?
    } else {
        frames::random_frame(dim, count, seed)?
    };
    let mut stdout = String::new();
    emit(&FrameFile::Frame(f), out, &mut stdout)?;
    Ok(Outcome::ok(stdout))
}

fn input_failure(check: &str, instance: usize, description: String) -> CheckRecord {
    CheckRecord {
        check: check.into(),
        instance,
        description,
        residual: f64::INFINITY,
        tolerance: 0.0,
        pass: false,
    }
}

pub fn cmd_verify(
    seed: u64,
    trials: usize,
    paths: &[PathBuf],
    out: Option<&Path>,
    fmt: OutputFormat,
) -> Result<Outcome, CliError> {
    if trials == 0 && paths.is_empty() {
        return Err(CliError::Usage("nothing to verify: --trials 0 and no input files".into()));
    }
    let mut user = Vec::new();
    let mut input_errors = Vec::new();
    for (k, path) in paths.iter().enumerate() {
        let label = path.display().to_string();
        match format::read_file(path) {
            Ok(FrameFile::Frame(frame)) => user.push(UserInstance::Frame { label, frame }),
            Ok(FrameFile::OperatorFrame(frame)) => user.push(UserInstance::OperatorFrame { label, frame }),
            Ok(FrameFile::Vector(_)) => {
                input_errors.push(input_failure("input.kind", k, format!("{label}: a vector is not a frame")))
            }
            Err(e) => input_errors.push(input_failure("input.parse", k, format!("{label}: {e}"))),
        }
    }
    let report = verify::run(seed, trials, &user);
    let bad_input = !input_errors.is_empty();
    let mut records = report.records;
    records.extend(input_errors);
    let report = verify::VerifyReport::from_records(seed, trials, records);

    if let Some(p) = out {
        std::fs::write(p, report.to_json()).map_err(|source| FormatError::Io {
            path: p.display().to_string(),
            source,
        })?;
    }
    let mut stdout = String::new();
    match fmt {
        OutputFormat::Text => stdout.push_str(&report.to_table()),
        OutputFormat::Machine if out.is_none() => stdout.push_str(&report.to_json()),
        OutputFormat::Machine => {
            writeln!(stdout, "{} passed, {} failed", report.passed, report.failed).unwrap()
        }
    }
    let exit = if bad_input {
        2
    } else if report.all_pass() {
        0
    } else {
        1
    };
    Ok(Outcome { stdout, exit })
}

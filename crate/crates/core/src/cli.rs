//! The `odd-atan` command line.
//!
//! ```text
//! odd-atan arctan --t 1/239 --digits 100 [--order 2] [--trace t.csv]
//! odd-atan pi [--formula machin] --digits 1000
//! odd-atan verify-order --t 1 --order 2 --digits 2000
//! odd-atan formulas [--csv]
//! ```
//!
//! Exit status: 0 success, 1 I/O failure, 2 bad arguments or an invalid
//! formula, 3 divergence or step limit, 4 order check failed or too few
//! usable steps. Setting `ODD_ATAN_GUARD_DIGITS` changes the default guard
//! digits; `--guard-digits` overrides both.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{combined_csv, estimate_order, true_error_report, AnalysisError};
use crate::bigreal::{BigReal, DEFAULT_GUARD_DIGITS};
use crate::iterator::{iterate, trace_csv, ArctanArg, IterError, IterationConfig, IterationTrace};
use crate::machin::{compute_pi_with, validate, FormulaRegistry, PiOptions};

pub const GUARD_ENV: &str = "ODD_ATAN_GUARD_DIGITS";

const EXIT_IO: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_DIVERGED: i32 = 3;
const EXIT_ORDER: i32 = 4;

const FORMULA_CHECK_DIGITS: usize = 50;
const ORDER_TOLERANCE: f64 = 0.2;
const REFERENCE_EXTRA_DIGITS: usize = 50;

#[derive(Debug, Parser)]
#[command(
    name = "odd-atan",
    version,
    about = "Arbitrary-precision arctan and pi by odd-order fixed-point iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print arctan(t).
    Arctan(ArctanCmd),
    /// Print pi from a Machin-like formula.
    Pi(PiCmd),
    /// Measure the convergence order and error constant.
    VerifyOrder(VerifyCmd),
    /// List the builtin formulas.
    Formulas(FormulasCmd),
}

fn digits_range(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=10_000_000).contains(&v) {
        Ok(v)
    } else {
        Err("must be between 1 and 10000000".into())
    }
}

#[derive(Debug, Args)]
pub struct Precision {
    /// Significant digits to print.
    #[arg(long, value_parser = digits_range)]
    pub digits: usize,
    /// P; the iteration converges with order 2P + 1.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub order: u32,
    /// Extra working digits carried by every operation.
    #[arg(long = "guard-digits")]
    pub guard_digits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ArctanCmd {
    /// Argument: a decimal such as 0.25 or a fraction such as 1/239.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[command(flatten)]
    pub precision: Precision,
    /// Write the iteration trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Starting value instead of the built-in bootstrap.
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct PiCmd {
    /// Builtin name or expression, e.g. "4*atan(1/5) - atan(1/239)".
    #[arg(long, default_value = "machin", allow_hyphen_values = true)]
    pub formula: String,
    #[command(flatten)]
    pub precision: Precision,
    /// Write per-term trace CSVs; `.q<denominator>` is inserted before the
    /// extension when the formula has several terms.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[arg(long)]
    pub t: String,
    #[command(flatten)]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct FormulasCmd {
    /// Print `name,expression,valid` CSV.
    #[arg(long)]
    pub csv: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<IterError> for Failure {
    fn from(e: IterError) -> Self {
        let code = match e {
            IterError::Diverged { .. } | IterError::MaxStepsExceeded { .. } => EXIT_DIVERGED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure {
            code: EXIT_ORDER,
            message: e.to_string(),
        }
    }
}

/// Runs the command line with the process environment.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_guard = std::env::var(GUARD_ENV).ok();
    run_with_env(args, env_guard.as_deref(), stdout, stderr)
}

/// Like [`run`], with the guard-digit environment value passed explicitly.
pub fn run_with_env<I, T>(
    args: I,
    env_guard: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    let mut out = String::new();
    let result = dispatch(cli.command, env_guard, &mut out);
    // Output is written once, even when the command fails part way.
    if stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return EXIT_IO;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, env_guard: Option<&str>, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Arctan(c) => cmd_arctan(&c, env_guard, out),
        Command::Pi(c) => cmd_pi(&c, env_guard, out),
        Command::VerifyOrder(c) => cmd_verify_order(&c, env_guard, out),
        Command::Formulas(c) => cmd_formulas(&c, out),
    }
}

fn guard_digits(p: &Precision, env_guard: Option<&str>) -> Result<usize, Failure> {
    if let Some(g) = p.guard_digits {
        return Ok(g);
    }
    match env_guard {
        None => Ok(DEFAULT_GUARD_DIGITS),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{GUARD_ENV}={s:?} is not a digit count"))),
    }
}

fn parse_t(s: &str) -> Result<ArctanArg, Failure> {
    s.parse()
        .map_err(|e| Failure::usage(format!("--t {s:?}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_arctan(c: &ArctanCmd, env_guard: Option<&str>, out: &mut String) -> Result<i32, Failure> {
    let t = parse_t(&c.t)?;
    if t.is_zero() {
        return Err(Failure::usage("--t must be nonzero"));
    }
    let guard = guard_digits(&c.precision, env_guard)?;
    let mut cfg =
        IterationConfig::new(t.abs(), c.precision.order, c.precision.digits).with_guard(guard);
    if let Some(s) = &c.seed {
        let seed: BigReal = s
            .parse()
            .map_err(|e| Failure::usage(format!("--seed {s:?}: {e}")))?;
        cfg = cfg.with_seed(seed);
    }
    let trace = iterate(&cfg)?;
    if let Some(path) = &c.trace {
        write_file(path, &trace_csv(&trace))?;
    }
    let value = if t.is_negative() {
        trace.value.neg()
    } else {
        trace.value
    };
    writeln!(out, "{}", value.format_decimal(c.precision.digits)).expect("write to String");
    Ok(0)
}

/// `pi.csv` becomes `pi.q239.csv`; without an extension `.q239` is appended.
pub fn term_trace_path(base: &Path, q: u64) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.q{q}.{}", ext.to_string_lossy()),
        None => format!("{stem}.q{q}"),
    };
    base.with_file_name(name)
}

fn cmd_pi(c: &PiCmd, env_guard: Option<&str>, out: &mut String) -> Result<i32, Failure> {
    let registry = FormulaRegistry::builtin();
    let formula = registry
        .resolve(&c.formula)
        .map_err(|e| Failure::usage(format!("--formula {:?}: {e}", c.formula)))?;
    if !validate(&formula, FORMULA_CHECK_DIGITS)? {
        return Err(Failure::usage(format!("{formula} does not sum to pi/4")));
    }
    let opts = PiOptions {
        guard: guard_digits(&c.precision, env_guard)?,
        concurrent: true,
    };
    let pi = compute_pi_with(&formula, c.precision.order, c.precision.digits, &opts)?;
    if let Some(base) = &c.trace {
        if let [(_, trace)] = pi.traces.as_slice() {
            write_file(base, &trace_csv(trace))?;
        } else {
            for (term, trace) in &pi.traces {
                write_file(&term_trace_path(base, term.denom), &trace_csv(trace))?;
            }
        }
    }
    writeln!(out, "{}", pi.value.format_decimal(c.precision.digits)).expect("write to String");
    Ok(0)
}

fn run_positive(
    t: &ArctanArg,
    order_p: u32,
    digits: usize,
    guard: usize,
) -> Result<IterationTrace, Failure> {
    Ok(iterate(
        &IterationConfig::new(t.clone(), order_p, digits).with_guard(guard),
    )?)
}

fn cmd_verify_order(
    c: &VerifyCmd,
    env_guard: Option<&str>,
    out: &mut String,
) -> Result<i32, Failure> {
    let t = parse_t(&c.t)?;
    if !t.is_positive() {
        return Err(Failure::usage("--t must be positive"));
    }
    let p = &c.precision;
    let guard = guard_digits(p, env_guard)?;
    let trace = run_positive(&t, p.order, p.digits, guard)?;
    let reference = run_positive(&t, p.order, p.digits + REFERENCE_EXTRA_DIGITS, guard)?;
    let deltas = estimate_order(&trace)?;
    let errors = true_error_report(&trace, &reference.value)?;
    out.push_str(&combined_csv(&[&deltas, &errors]));
    if deltas.order_within(ORDER_TOLERANCE) && errors.order_within(ORDER_TOLERANCE) {
        Ok(0)
    } else {
        Err(Failure {
            code: EXIT_ORDER,
            message: format!(
                "order {:.4} (deltas) / {:.4} (true errors) is not within {ORDER_TOLERANCE} of {}",
                deltas.tail_mean_order, errors.tail_mean_order, deltas.theoretical_order
            ),
        })
    }
}

fn cmd_formulas(c: &FormulasCmd, out: &mut String) -> Result<i32, Failure> {
    let registry = FormulaRegistry::builtin();
    let mut rows = Vec::new();
    for f in registry.iter() {
        rows.push((
            f.name().unwrap_or_default().to_string(),
            f.to_string(),
            validate(f, FORMULA_CHECK_DIGITS)?,
        ));
    }
    if c.csv {
        out.push_str("name,expression,valid\n");
        for (name, expr, valid) in &rows {
            writeln!(out, "{name},{expr},{valid}").expect("write to String");
        }
    } else {
        let name_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let expr_w = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        for (name, expr, valid) in &rows {
            let status = if *valid { "valid" } else { "INVALID" };
            writeln!(out, "{name:<name_w$}  {expr:<expr_w$}  {status}").expect("write to String");
        }
    }
    Ok(0)
}

//! `idealstat`: desk-scale statistics of ideals in monogenic number fields.
//!
//! Every subcommand writes a CSV table (first line
//! `# field=<coeffs> command=<name> params=<k=v;...>`) or a JSON document.
//! Options may also come from a `--config` file of `key = value` lines;
//! flags given on the command line win.

mod commands;
mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use report::{Format, Report};

/// Default directory for output files when `--output` is absent.
pub const OUT_DIR_ENV: &str = "IDEALSTAT_OUT_DIR";

/// Largest accepted norm bound.
pub const MAX_X: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "idealstat",
    version,
    about = "Ideal counting, Omega statistics and prime ideal bounds in number fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the ideals of norm <= X with Omega, mu and lambda, or the prime
    /// ideal table with --primes.
    Sieve(commands::SieveArgs),
    /// N(X), L(X), M(X) and pi_K(X) at a single X.
    Count(commands::CountArgs),
    /// Ideal density estimate c_K with the residual check
    /// |N(x) - c x| <= C x^(1-1/d).
    Density(commands::DensityArgs),
    /// A summatory function (count, L, M or pi_K) on dyadic points up to X.
    Summatory(commands::SummatoryArgs),
    /// Distribution of Omega modulo q: residue histogram and the sums
    /// sum e(a Omega / q).
    Equidist(commands::EquidistArgs),
    /// Weyl sums sum e(alpha Omega) on dyadic points up to X.
    Weyl(commands::WeylArgs),
    /// Theorem 1 discrepancy |sum g(Omega + k1) - sum g(Omega + k2)| / N(X).
    Theorem1(commands::Theorem1Args),
    /// Proposition 2 variance estimate on seeded random sets S.
    Prop2(commands::Prop2Args),
    /// Chebyshev-type bounds: prime ideals in (x, alpha x] and pi_K(y).
    Chebyshev(commands::ChebyshevArgs),
    /// Proposition 4 conditions on prime ideals in (b^x, b^(x+1)] and
    /// (b^x, b^(x+eps)].
    Prop4(commands::Prop4Args),
    /// Builds a Richter pair (S1 primes, S2 products of k primes) and checks
    /// conditions (i)-(iii).
    Richter(commands::RichterArgs),
    /// Dirichlet convolution of two arithmetic functions on ideals.
    Convolution(commands::ConvolutionArgs),
    /// Abel summation estimate for sum g(N(m)) against c int g.
    Abel(commands::AbelArgs),
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Defining polynomial, constant term first (`1,0,1` is x^2 + 1)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_coeffs)]
    pub field: Coeffs,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout, or $IDEALSTAT_OUT_DIR/<command>.<ext>)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Seed for randomized set sampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// File of `key = value` lines supplying defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for cached prime ideal tables
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Coeffs(pub Vec<i64>);

fn parse_coeffs(s: &str) -> Result<Coeffs, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Coeffs)
}

/// A norm bound: an integer, or a float literal such as `1e6`, at most
/// [`MAX_X`].
pub(crate) fn parse_norm(s: &str) -> Result<u64, String> {
    let v = match s.parse::<u64>() {
        Ok(v) => v,
        Err(_) => {
            let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
            if !(f >= 1.0) || f.fract() != 0.0 || f > MAX_X as f64 {
                return Err(format!("'{s}' is not an integer in 1..={MAX_X}"));
            }
            f as u64
        }
    };
    if v == 0 || v > MAX_X {
        return Err(format!("X must lie in 1..={MAX_X}"));
    }
    Ok(v)
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(ideal_core::Error),
    Io(std::io::Error),
}

impl From<ideal_core::Error> for CliError {
    fn from(e: ideal_core::Error) -> Self {
        match e {
            ideal_core::Error::InvalidParams(m) => CliError::Usage(m),
            e @ ideal_core::Error::UnknownFunctionId(_) => CliError::Usage(e.to_string()),
            e => CliError::Compute(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() || k == "config" {
            return Err(format!("line {}: bad key", i + 1));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn has_flag(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == long.as_str() || s.starts_with(eq.as_str())
    })
}

/// Inserts config entries as flags right after the subcommand, skipping keys
/// already given on the command line.
fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let cfg =
        parse_config(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))?;
    let Some(sub) = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
    else {
        return Ok(args);
    };
    let sub = sub + 1;
    let mut extra = Vec::new();
    for (k, v) in cfg {
        if has_flag(&args, &k) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => extra.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let mut out = args[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}

fn destination(common: &Common, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = &common.output {
        return Some(p.clone());
    }
    std::env::var_os(OUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| Path::new(&d).join(format!("{command}.{}", format.extension())))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let common = commands::common(&cli.command).clone();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0) as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let report = pool.install(|| commands::dispatch(&cli.command))?;
    let format = common
        .format
        .unwrap_or_else(|| commands::default_format(&cli.command));
    let text = report.render(format);
    match destination(&common, report.command, format) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code: 0 on success, 1 on a computation error, 2 on a usage error.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

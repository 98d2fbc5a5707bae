//! The `quadbinom` command line: grid verification, field inspection, selftest.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::congruence::{CongruenceReport, TheoremId};
use crate::error::{Error, Result};
use crate::grid::{run_grid, Family, GridSpec};
use crate::ntheory::is_fundamental_discriminant;
use crate::quadfield::{CacheRecord, FieldCache, QuadFieldInvariants};
use crate::selftest::run_selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(
    name = "quadbinom",
    version,
    about = "Verify binomial congruences mod p^2 for real quadratic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one congruence over a grid of primes and fields or moduli.
    Verify(VerifyArgs),
    /// Print the unit and class numbers of Q(sqrt(D)).
    FieldInfo(FieldInfoArgs),
    /// Run the built-in invariant suite.
    Selftest(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// JSON-lines file of cached field invariants.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("family").required(true).multiple(false))]
struct VerifyArgs {
    #[arg(long, value_parser = parse_theorem)]
    theorem: TheoremId,
    /// Largest prime visited (inclusive).
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=u32::MAX as u64))]
    p_max: u64,
    #[arg(long, group = "family", allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, group = "family", value_parser = clap::value_parser!(i64).range(5..))]
    d_max: Option<i64>,
    #[arg(long, group = "family", value_parser = clap::value_parser!(i64).range(1..))]
    m: Option<i64>,
    #[arg(long, group = "family", value_parser = clap::value_parser!(i64).range(1..))]
    m_max: Option<i64>,
    /// +1, -1 or both.
    #[arg(long, default_value = "both", allow_hyphen_values = true, value_parser = parse_rho)]
    rho: Rho,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct FieldInfoArgs {
    #[arg(allow_hyphen_values = true)]
    d: i64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho {
    Plus,
    Minus,
    Both,
}

impl Rho {
    fn values(self) -> Vec<i8> {
        match self {
            Rho::Plus => vec![1],
            Rho::Minus => vec![-1],
            Rho::Both => vec![1, -1],
        }
    }
}

fn parse_theorem(s: &str) -> std::result::Result<TheoremId, String> {
    s.parse().map_err(|_| {
        let ids: Vec<&str> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
        format!("expected one of {}", ids.join(", "))
    })
}

fn parse_rho(s: &str) -> std::result::Result<Rho, String> {
    match s {
        "+1" | "1" => Ok(Rho::Plus),
        "-1" => Ok(Rho::Minus),
        "both" => Ok(Rho::Both),
        _ => Err("expected +1, -1 or both".into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    FieldInfo,
    Selftest,
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub grid: Option<GridSpec>,
    pub field: Option<i64>,
    pub format: Format,
    pub cache_path: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> std::result::Result<Self, String> {
        match cli.command {
            Command::Verify(v) => {
                let t = v.theorem;
                let family = if t.uses_discriminant() {
                    match (v.d, v.d_max) {
                        (Some(d), _) => Family::Single(d),
                        (_, Some(max)) => Family::UpTo(max),
                        _ => return Err(format!("{t} takes --d or --d-max")),
                    }
                } else {
                    match (v.m, v.m_max) {
                        (Some(m), _) => Family::Single(m),
                        (_, Some(max)) => Family::UpTo(max),
                        _ => return Err(format!("{t} takes --m or --m-max")),
                    }
                };
                if v.r.is_some() && t != TheoremId::T21 {
                    return Err("--r applies only to t21".into());
                }
                if v.n.is_some() && t != TheoremId::Cor21 {
                    return Err("--n applies only to cor21".into());
                }
                if let (Some(n), Family::Single(m)) = (v.n, family) {
                    if n as i64 > m {
                        return Err(format!("--n {n} exceeds --m {m}"));
                    }
                }
                if !t.uses_rho() && v.rho != Rho::Both {
                    return Err(format!("--rho does not apply to {t}"));
                }
                let mut grid = GridSpec::new(t, family, v.p_max);
                grid.rhos = v.rho.values();
                grid.r = v.r;
                grid.n = v.n;
                Ok(Self {
                    command: CommandKind::Verify,
                    grid: Some(grid),
                    field: None,
                    format: v.common.format,
                    cache_path: v.common.cache,
                })
            }
            Command::FieldInfo(f) => Ok(Self {
                command: CommandKind::FieldInfo,
                grid: None,
                field: Some(f.d),
                format: f.common.format,
                cache_path: f.common.cache,
            }),
            Command::Selftest(c) => Ok(Self {
                command: CommandKind::Selftest,
                grid: None,
                field: None,
                format: c.format,
                cache_path: c.cache,
            }),
        }
    }
}

/// Parse `args` (program name first) into a validated config, or the text
/// and exit code to show instead.
pub fn parse_args<I, T>(args: I) -> std::result::Result<RunConfig, (String, i32)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
            _ => EXIT_USAGE,
        };
        let mut text = e.render().to_string();
        if code == EXIT_USAGE && !text.contains("Usage:") {
            text = format!("{text}\n{}\n", usage());
        }
        (text, code)
    })?;
    RunConfig::from_cli(cli).map_err(|msg| (format!("error: {msg}\n\n{}\n", usage()), EXIT_USAGE))
}

fn usage() -> String {
    use clap::CommandFactory;
    Cli::command().render_usage().to_string()
}

fn params_text(r: &CongruenceReport) -> String {
    let order = ["d", "m", "p", "rho", "r", "n"];
    order
        .iter()
        .filter_map(|k| r.param(k).map(|v| format!("{k}={v}")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_text(r: &CongruenceReport) -> String {
    format!(
        "{:<9} {:<28} {:>20} {:>20} {:>20}  {}",
        r.theorem.as_str(),
        params_text(r),
        r.lhs.value(),
        r.rhs.value(),
        r.modulus,
        if r.pass { "PASS" } else { "FAIL" }
    )
}

fn field_text(f: &QuadFieldInvariants) -> String {
    let primes = if f.odd_primes.is_empty() {
        "-".to_string()
    } else {
        f.odd_primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "d={} a={} b={} norm={:+} h_narrow={} h={} alpha={} primes={}",
        f.d, f.a, f.b, f.norm, f.h_narrow, f.h, f.alpha, primes
    )
}

fn open_cache(path: &Option<PathBuf>) -> Result<FieldCache> {
    match path {
        Some(p) => FieldCache::open(p),
        None => Ok(FieldCache::in_memory()),
    }
}

fn exec_verify(
    spec: &GridSpec,
    format: Format,
    cache: &FieldCache,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let outcome = run_grid(spec, cache)?;
    if format == Format::Text {
        writeln!(
            out,
            "{:<9} {:<28} {:>20} {:>20} {:>20}  result",
            "theorem", "params", "lhs", "rhs", "modulus"
        )?;
    }
    for r in &outcome.reports {
        match format {
            Format::Text => writeln!(out, "{}", report_text(r))?,
            Format::Jsonl => writeln!(out, "{}", r.to_json())?,
        }
    }
    writeln!(
        err,
        "total={} pass={} fail={} skip={}",
        outcome.reports.len(),
        outcome.passed(),
        outcome.failed(),
        outcome.skipped
    )?;
    Ok(if outcome.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn exec_field_info(d: i64, format: Format, cache: &FieldCache, out: &mut dyn Write) -> Result<i32> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let f = cache.get(d)?;
    match format {
        Format::Text => writeln!(out, "{}", field_text(&f))?,
        Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&CacheRecord::from(&f))?)?,
    }
    Ok(EXIT_OK)
}

fn exec_selftest(
    format: Format,
    cache: &FieldCache,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let outcomes = run_selftest(cache);
    for o in &outcomes {
        match format {
            Format::Text => {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                if o.detail.is_empty() {
                    writeln!(out, "{tag} {}", o.name)?;
                } else {
                    writeln!(out, "{tag} {}: {}", o.name, o.detail)?;
                }
            }
            Format::Jsonl => {
                let line = serde_json::json!({
                    "check": o.name,
                    "pass": o.passed,
                    "detail": o.detail,
                });
                writeln!(out, "{line}")?;
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    writeln!(
        err,
        "total={} pass={} fail={} skip=0",
        outcomes.len(),
        passed,
        outcomes.len() - passed
    )?;
    Ok(if passed == outcomes.len() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

/// Execute a validated config. Errors that stem from the arguments
/// (inadmissible `d`, bad parameters) map to exit code 2.
pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = open_cache(&config.cache_path).and_then(|cache| {
        let code = match config.command {
            CommandKind::Verify => exec_verify(
                config.grid.as_ref().expect("verify has a grid"),
                config.format,
                &cache,
                out,
                err,
            )?,
            CommandKind::FieldInfo => exec_field_info(
                config.field.expect("field-info has d"),
                config.format,
                &cache,
                out,
            )?,
            CommandKind::Selftest => exec_selftest(config.format, &cache, out, err)?,
        };
        cache.persist()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BadParams(_) | Error::NotFundamental(_) => {
                    let _ = writeln!(err, "\n{}", usage());
                    EXIT_USAGE
                }
                _ => EXIT_FAIL,
            }
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(args) {
        Ok(config) => execute(&config, out, err),
        Err((text, code)) => {
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            code
        }
    }
}

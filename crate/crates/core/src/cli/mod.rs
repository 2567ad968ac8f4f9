//! Command-line front end.
//!
//! Each subcommand builds an [`OutputRecord`]; [`run`] renders it to stdout
//! and maps the outcome to an exit code: 0 ok, 1 a verify check failed,
//! 2 usage or internal error.

mod record;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use record::{decode_cell, parse_csv_rows, Format, OutputRecord, RecordKind, Value, FLOAT_DECIMALS};

use crate::appendix::{check_combinatorial_identities, check_integral_closed_forms};
use crate::copula::{
    default_grid, estimate_bracket, kappa_estimate, verify_order_theorems, CopulaModel, McConfig, Transform,
    ONE_SIDED_SIGMA,
};
use crate::product_order::{
    bracket_lower_tail_small_k, bracket_margin, check_monotonicity, check_reflection, kappa_from_bracket,
    kappa_lower_tail, kappa_lower_tail_limit, kappa_product_order, reflect_subset, SubsetK, CLOSED_FORM_CAP,
};
use crate::{Error, Result};

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "KENDALL_ORDER_SEED";
pub const DEFAULT_SEED: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kendall-order",
    version,
    about = "Kendall's tau of copulas and their order transforms"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact rational values for the product copula.
    Exact(ExactArgs),
    /// Lower-tail tau table for 2 <= k <= d <= d-max.
    Table(TableArgs),
    /// Monte Carlo estimate of a bracket [C, C] or [C_T, C_T].
    Mc(McArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// kappa[Pi_T] in dimension d.
    KappaOrder,
    /// Bracket and tau of the K-margin of Pi_T, checked against b(K).
    Margin,
    /// tau of the {1..k} margin of Pi_T in dimension d.
    LowerTail,
    /// Limit of the {1..k} lower-tail tau as d grows.
    Limit,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma separated 1-based indices, e.g. 1,2,3,5.
    #[arg(long = "K")]
    pub subset: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 5)]
    pub d_max: usize,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// e.g. product:5, M:3, W, D, shuffleM:A, mix:0.5*M+0.5*W
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "none", value_parser = ["none", "order"])]
    pub transform: String,
    /// Restrict to the K-margin, e.g. 1,2,3,5.
    #[arg(long = "K")]
    pub subset: Option<String>,
    /// Worker threads. Never changes the result.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Integrals,
    Reflection,
    Monotonicity,
    OrderTheorems,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Largest n for identities (default 30) and integrals (default 8).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Largest d for reflection (default 6) and monotonicity (default 10).
    #[arg(long)]
    pub d_max: Option<usize>,
    /// Random (y, z) pairs per n for the identities suite.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value = "product:4")]
    pub model: String,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Standard errors allowed in one-sided checks.
    #[arg(long, default_value_t = ONE_SIDED_SIGMA)]
    pub sigma: f64,
    #[arg(long, default_value_t = 19)]
    pub grid_points: usize,
}

fn require<T: Copy>(value: Option<T>, flag: &str, which: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(format!("--{flag} is required for --which {which}")))
}

/// `945 * r` as an integer, if it is one.
fn over_945(r: &BigRational) -> Option<BigInt> {
    let scaled = r * BigRational::from_integer(BigInt::from(945));
    scaled.is_integer().then(|| scaled.to_integer())
}

fn with_945(mut rec: OutputRecord, key: &str, r: &BigRational) -> OutputRecord {
    if let Some(n) = over_945(r) {
        let n: i64 = n.try_into().expect("945 * tau fits in i64");
        rec.insert(key, Value::int(n));
    }
    rec
}

pub fn cmd_exact(args: &ExactArgs) -> Result<OutputRecord> {
    let rec = OutputRecord::new(RecordKind::Exact);
    match args.which {
        Which::KappaOrder => {
            let d = require(args.d, "d", "kappa-order")?;
            let kappa = kappa_product_order(d)?;
            let two = BigRational::from_integer(BigInt::from(2));
            // invert kappa = (2^d B - 1) / (2^(d-1) - 1)
            let half = two.pow(d as i32 - 1);
            let bracket = ((&half - BigRational::one()) * &kappa + BigRational::one()) / (half * two);
            Ok(with_945(
                rec.with("which", "kappa-order")
                    .with("d", d)
                    .with("kappa", &kappa)
                    .with("bracket", bracket),
                "kappa_945",
                &kappa,
            ))
        }
        Which::Margin => {
            let d = require(args.d, "d", "margin")?;
            let spec = args
                .subset
                .as_deref()
                .ok_or_else(|| Error::Parse("--K is required for --which margin".into()))?;
            let k = SubsetK::parse(d, spec)?;
            let bracket = bracket_margin(&k)?;
            let mirrored = reflect_subset(&k);
            let mirrored_bracket = bracket_margin(&mirrored)?;
            if mirrored_bracket != bracket {
                return Err(Error::Internal(format!(
                    "reflection failed: [{k}] = {bracket} but [{mirrored}] = {mirrored_bracket}"
                )));
            }
            let kappa = kappa_from_bracket(&bracket, k.len())?;
            Ok(rec
                .with("which", "margin")
                .with("d", d)
                .with("K", k.to_string())
                .with("bracket", &bracket)
                .with("kappa", kappa)
                .with("reflected_K", mirrored.to_string())
                .with("reflected_bracket", mirrored_bracket)
                .with("reflection_holds", true))
        }
        Which::LowerTail => {
            let d = require(args.d, "d", "lower-tail")?;
            let k = require(args.k, "k", "lower-tail")?;
            let kappa = kappa_lower_tail(d, k)?;
            Ok(with_945(
                rec.with("which", "lower-tail")
                    .with("d", d)
                    .with("k", k)
                    .with("bracket", bracket_lower_tail_small_k(d, k)?)
                    .with("kappa", &kappa),
                "kappa_945",
                &kappa,
            ))
        }
        Which::Limit => {
            let k = require(args.k, "k", "limit")?;
            Ok(rec
                .with("which", "limit")
                .with("k", k)
                .with("limit", kappa_lower_tail_limit(k)?))
        }
    }
}

pub fn cmd_table(d_max: usize) -> Result<OutputRecord> {
    if !(2..=CLOSED_FORM_CAP).contains(&d_max) {
        return Err(Error::OutOfRange {
            what: "d_max",
            value: d_max as i64,
            range: format!("2..={CLOSED_FORM_CAP}"),
        });
    }
    let mut rows = Vec::new();
    for d in 2..=d_max {
        for k in 2..=d {
            let kappa = kappa_lower_tail(d, k)?;
            let row = with_945(
                OutputRecord::new(RecordKind::Table)
                    .with("d", d)
                    .with("k", k)
                    .with("kappa", &kappa),
                "kappa_945",
                &kappa,
            );
            rows.push(Value::Map(row.payload));
        }
    }
    Ok(OutputRecord::new(RecordKind::Table)
        .with("d_max", d_max)
        .with("rows", Value::List(rows)))
}

fn mc_config(n: u64, seed: u64, threads: Option<usize>) -> McConfig {
    let cfg = McConfig::new(n, seed);
    match threads {
        Some(t) => cfg.with_threads(t),
        None => cfg,
    }
}

pub fn cmd_mc(args: &McArgs) -> Result<OutputRecord> {
    let model: CopulaModel = args.model.parse()?;
    let transform: Transform = args.transform.parse()?;
    let subset = args
        .subset
        .as_deref()
        .map(|s| SubsetK::parse(model.dimension(), s))
        .transpose()?;
    let cfg = mc_config(args.n, args.seed, args.threads);
    let est = estimate_bracket(&model, &cfg, transform, subset.as_ref())?;
    let m = subset.as_ref().map_or(model.dimension(), SubsetK::len);
    let (kappa, kappa_se) = kappa_estimate(&est, m);
    let mut rec = OutputRecord::new(RecordKind::Estimate)
        .with("model", model.to_string())
        .with("transform", transform.as_str())
        .with("n", est.n)
        .with("seed", est.seed)
        .with("value", Value::float(est.value))
        .with("std_error", Value::float(est.std_error))
        .with("kappa", Value::float(kappa))
        .with("kappa_std_error", Value::float(kappa_se));
    if let Some(k) = &subset {
        rec.insert("K", k.to_string());
    }
    Ok(rec)
}

/// Runs a verification suite. The record lists every check; the caller
/// decides the exit code from its `passed` field.
pub fn cmd_verify(args: &VerifyArgs) -> Result<OutputRecord> {
    let report = match args.suite {
        Suite::Identities => check_combinatorial_identities(args.n_max.unwrap_or(30), args.trials, args.seed)?,
        Suite::Integrals => check_integral_closed_forms(args.n_max.unwrap_or(8))?,
        Suite::Reflection => check_reflection(args.d_max.unwrap_or(6))?,
        Suite::Monotonicity => check_monotonicity(args.d_max.unwrap_or(10))?,
        Suite::OrderTheorems => {
            if !(args.sigma.is_finite() && args.sigma >= 0.0) {
                return Err(Error::Domain(format!(
                    "sigma must be a non-negative number, got {}",
                    args.sigma
                )));
            }
            let model: CopulaModel = args.model.parse()?;
            let cfg = mc_config(args.n, args.seed, args.threads);
            verify_order_theorems(&model, &cfg, &default_grid(args.grid_points), args.sigma)?
        }
    };
    Ok(OutputRecord::from_report(&report))
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<OutputRecord> {
    match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Table(a) => cmd_table(a.d_max),
        Command::Mc(a) => cmd_mc(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Exit code for a successfully built record.
pub fn exit_code(rec: &OutputRecord) -> i32 {
    match (rec.kind, rec.get("passed").and_then(Value::as_bool)) {
        (RecordKind::Verify, Some(false)) => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    }
}

/// Parses `argv`, runs the command, writes the record to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let rendered = execute(&cli).and_then(|rec| Ok((rec.render(cli.format)?, exit_code(&rec))));
    match rendered {
        Ok((text, code)) => {
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_ERROR;
            }
            if code != EXIT_OK {
                let _ = writeln!(err, "verification failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

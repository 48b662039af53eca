//! Batch front end: identity sweeps, probability tables and oracle fixtures.
//!
//! Exit codes: 0 when everything requested passed, 1 when an identity check
//! failed, 2 on configuration errors. Sweeps print JSON lines, curves print CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::identities::{
    verify_colored, verify_gessel_chain, verify_multi, verify_single, ColoredExponent, Form, IdentityReport,
};
use crate::oracle::{self, default_n_max, enumerate_partitions, Partition};
use crate::plancherel::{
    joint_cdf, lambda2_crosscheck, poissonized_moment_auto, row_cdf, tail_probe, JointQuery, PoissonizedModel, Regime,
};
use crate::symbol::{Symbol, SymbolDescriptor};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "PFRED_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "pfred",
    version,
    about = "Fredholm determinant identities and Plancherel row statistics"
)]
pub struct Cli {
    /// Worker threads (default: PFRED_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate both sides of a determinant identity over a parameter grid.
    Verify(VerifyArgs),
    /// Row distributions, joint CDFs, moments and tails.
    Plancherel(PlancherelArgs),
    /// Exact combinatorial values.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityKind {
    Single,
    Multi,
    Colored,
    Gessel,
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    S,
    R,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExponentArg {
    Base,
    Dilated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub identity: IdentityKind,
    /// Symbol descriptor JSON (single, multi, colored).
    #[arg(long)]
    pub symbol: Option<String>,
    /// Range `a..b`, list `a,b,c` or a single integer. For `multi`, the breakpoints.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Comma-separated weights; `re` or `re+imi`. For `multi`, one per breakpoint.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Comma-separated `t` values (gessel, lambda2).
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, value_enum, default_value = "s")]
    pub form: FormArg,
    /// Color count for `colored`.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, value_enum, default_value = "base")]
    pub exponent: ExponentArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct PlancherelArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Joint CDF of the first rows; thresholds via `--a`.
    #[arg(long)]
    pub joint: bool,
    /// Thresholds `a_1,...,a_k` on `lambda_l - l`; `inf` allowed as a prefix.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Emit `E[xi_k^a]` for the given power instead of a CDF table.
    #[arg(long)]
    pub moment: Option<u32>,
    /// Emit a tail table over `--n`.
    #[arg(long, value_enum)]
    pub tail: Option<RegimeArg>,
    /// Superimpose this many independent copies.
    #[arg(long, default_value_t = 1)]
    pub colors: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub output: Output,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Upper,
    Lower,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Exact `Prob^Plan_N(pred)` as `num/den`.
    #[arg(long)]
    pub plancherel: bool,
    /// Poissonized probability at this `t`.
    #[arg(long)]
    pub poissonized: Option<f64>,
    #[arg(long = "N")]
    pub size: Option<usize>,
    /// Predicate such as `l1<=2` or `l1<=4&&l2<=3`.
    #[arg(long)]
    pub pred: Option<String>,
    /// Number of standard tableaux of a shape such as `2,1`.
    #[arg(long)]
    pub dim: Option<String>,
    /// Emit the standard fixture set.
    #[arg(long)]
    pub fixtures: bool,
}

/// Parse `a..b` (inclusive), `a,b,c`, or a single integer.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let text = text.trim();
    let bad = |e: std::num::ParseIntError| Error::InvalidParameter(format!("{text:?}: {e}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: i64 = a.trim().parse().map_err(bad)?;
        let b: i64 = b.trim().parse().map_err(bad)?;
        if b < a {
            return Err(Error::InvalidParameter(format!("empty range {text:?}")));
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|p| p.trim().parse::<i64>().map_err(bad)).collect()
}

/// Parse `0.5`, `-0.5`, `0.5+0.1i` or `0.5-0.1i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("bad complex number {t:?}"));
    if let Some(body) = t.strip_suffix('i') {
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .last()
            .map(|(i, _)| i);
        let (re, im) = match split {
            Some(i) => (
                body[..i].parse::<f64>().map_err(|_| bad())?,
                body[i..].parse::<f64>().map_err(|_| bad())?,
            ),
            None => (0.0, body.parse::<f64>().map_err(|_| bad())?),
        };
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

fn parse_list<T>(text: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    text.split(',').map(|p| f(p.trim())).collect()
}

fn parse_f64(text: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("bad number {text:?}")))
}

/// A conjunction of row constraints such as `l1<=4&&l2<3`.
pub fn parse_predicate(text: &str) -> Result<impl Fn(&Partition) -> bool> {
    let mut clauses = Vec::new();
    for clause in text.split("&&") {
        let clause = clause.trim();
        let rest = clause
            .strip_prefix('l')
            .ok_or_else(|| Error::InvalidParameter(format!("clause {clause:?} must start with l<row>")))?;
        let op_at = rest
            .find(|c: char| "<>=".contains(c))
            .ok_or_else(|| Error::InvalidParameter(format!("clause {clause:?} has no comparison")))?;
        let row: usize = rest[..op_at]
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad row in {clause:?}")))?;
        if row == 0 {
            return Err(Error::InvalidParameter("rows are 1-based".into()));
        }
        let tail = &rest[op_at..];
        let (op, value) = ["<=", ">=", "==", "<", ">"]
            .iter()
            .find_map(|op| tail.strip_prefix(op).map(|v| (*op, v)))
            .ok_or_else(|| Error::InvalidParameter(format!("bad comparison in {clause:?}")))?;
        let value: i64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad bound in {clause:?}")))?;
        clauses.push((row, op, value));
    }
    Ok(move |l: &Partition| {
        clauses.iter().all(|&(row, op, v)| {
            let x = l.row(row) as i64;
            match op {
                "<=" => x <= v,
                ">=" => x >= v,
                "==" => x == v,
                "<" => x < v,
                _ => x > v,
            }
        })
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-14..=1e-2).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tol must lie in [1e-14, 1e-2], got {tol}"
        )))
    }
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

fn symbol_arg(v: &Option<String>) -> Result<Symbol> {
    Symbol::from_descriptor(&SymbolDescriptor::from_json(require(v, "symbol")?)?)
}

enum Outcome {
    /// All checks passed or a table was produced.
    Ok,
    Failed,
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    check_tol(args.tol)?;
    let reports: Vec<IdentityReport> = match args.identity {
        IdentityKind::Single | IdentityKind::Colored => {
            let sym = symbol_arg(&args.symbol)?;
            let ns = parse_int_list(require(&args.n, "n")?)?;
            let ss = parse_list(require(&args.s, "s")?, parse_complex)?;
            let forms: &[Form] = &match args.form {
                FormArg::S => vec![Form::S],
                FormArg::R => vec![Form::R],
                FormArg::Both => vec![Form::S, Form::R],
            };
            let exponent = match args.exponent {
                ExponentArg::Base => ColoredExponent::Base,
                ExponentArg::Dilated => ColoredExponent::Dilated,
            };
            let grid: Vec<(i64, Complex64, Form)> = ns
                .iter()
                .flat_map(|&n| ss.iter().flat_map(move |&s| forms.iter().map(move |&f| (n, s, f))))
                .collect();
            grid.par_iter()
                .map(|&(n, s, form)| match args.identity {
                    IdentityKind::Single => verify_single(&sym, n, s, form, args.tol),
                    _ => verify_colored(&sym, args.m, n, s, form, exponent, args.tol),
                })
                .collect::<Result<Vec<_>>>()?
        }
        IdentityKind::Multi => {
            let sym = symbol_arg(&args.symbol)?;
            let ns = parse_int_list(require(&args.n, "n")?)?;
            let ss = parse_list(require(&args.s, "s")?, parse_complex)?;
            vec![verify_multi(&sym, &ns, &ss, args.tol)?]
        }
        IdentityKind::Gessel | IdentityKind::Lambda2 => {
            let ts = parse_list(require(&args.t, "t")?, parse_f64)?;
            let ns = parse_int_list(require(&args.n, "n")?)?;
            let grid: Vec<(f64, i64)> = ts.iter().flat_map(|&t| ns.iter().map(move |&n| (t, n))).collect();
            grid.par_iter()
                .map(|&(t, n)| match args.identity {
                    IdentityKind::Gessel => verify_gessel_chain(t, n, args.tol),
                    _ => lambda2_crosscheck(&PoissonizedModel::new(t)?, n, args.tol),
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    for r in &reports {
        writeln!(out, "{}", r.to_json_line()).map_err(io_err)?;
    }
    Ok(if reports.iter().all(|r| r.pass) {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidParameter(format!("write failed: {e}"))
}

fn parse_threshold(text: &str) -> Result<Option<i64>> {
    match text.trim() {
        "inf" | "infinity" => Ok(None),
        v => v
            .parse::<i64>()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("bad threshold {v:?}"))),
    }
}

fn plancherel(args: &PlancherelArgs, out: &mut dyn Write) -> Result<Outcome> {
    check_tol(args.tol)?;
    let model = PoissonizedModel::colored(args.t, args.colors)?;
    if args.joint {
        let a = parse_list(require(&args.a, "a")?, parse_threshold)?;
        let q = JointQuery::new(a.clone())?;
        let p = joint_cdf(&model, &q, args.tol)?;
        let a_json: Vec<serde_json::Value> = a.iter().map(|v| v.map_or(json!("inf"), |x| json!(x))).collect();
        writeln!(out, "{}", json!({"t": args.t, "a": a_json, "probability": p})).map_err(io_err)?;
        return Ok(Outcome::Ok);
    }
    if let Some(power) = args.moment {
        let value = poissonized_moment_auto(&model, args.k, power)?;
        writeln!(
            out,
            "{}",
            json!({"t": args.t, "k": args.k, "a": power, "moment": value})
        )
        .map_err(io_err)?;
        return Ok(Outcome::Ok);
    }
    let ns = parse_int_list(require(&args.n, "n")?)?;
    if let Some(regime) = args.tail {
        let regime = match regime {
            RegimeArg::Upper => Regime::Upper,
            RegimeArg::Lower => Regime::Lower,
        };
        let samples: Vec<(i64, f64)> = ns.iter().map(|&n| (n, args.t)).collect();
        let table = tail_probe(args.k, regime, &samples)?;
        match args.output {
            Output::Csv => {
                writeln!(out, "n,x,tail,underflow").map_err(io_err)?;
                for r in &table.rows {
                    writeln!(out, "{},{},{:e},{}", r.n, r.x, r.tail, r.underflow).map_err(io_err)?;
                }
            }
            Output::Json => {
                writeln!(out, "{}", serde_json::to_string(&table).expect("table serializes")).map_err(io_err)?
            }
        }
        return Ok(Outcome::Ok);
    }
    let values = ns
        .par_iter()
        .map(|&n| row_cdf(&model, args.k, n, args.tol))
        .collect::<Result<Vec<_>>>()?;
    match args.output {
        Output::Csv => {
            writeln!(out, "n,cdf").map_err(io_err)?;
            for (n, v) in ns.iter().zip(&values) {
                writeln!(out, "{n},{v}").map_err(io_err)?;
            }
        }
        Output::Json => {
            for (n, v) in ns.iter().zip(&values) {
                writeln!(out, "{}", json!({"t": args.t, "k": args.k, "n": n, "cdf": v})).map_err(io_err)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn oracle_cmd(args: &OracleArgs, out: &mut dyn Write) -> Result<Outcome> {
    if let Some(shape) = &args.dim {
        let lam = Partition::parse(shape)?;
        writeln!(out, "{}", oracle::dim_syt(&lam)).map_err(io_err)?;
        return Ok(Outcome::Ok);
    }
    if args.fixtures {
        for line in fixture_lines()? {
            writeln!(out, "{line}").map_err(io_err)?;
        }
        return Ok(Outcome::Ok);
    }
    if let Some(t) = args.poissonized {
        let pred = parse_predicate(require(&args.pred, "pred")?)?;
        let n_max = args.size.unwrap_or_else(|| default_n_max(t));
        let r = oracle::poissonized_prob(t, &pred, n_max)?;
        writeln!(
            out,
            "{}",
            json!({"t": t, "n_max": n_max, "value": r.value, "tail_bound": r.tail_bound})
        )
        .map_err(io_err)?;
        return Ok(Outcome::Ok);
    }
    let size = args
        .size
        .ok_or_else(|| Error::InvalidParameter("--N is required".into()))?;
    if args.plancherel {
        let pred = parse_predicate(require(&args.pred, "pred")?)?;
        let p = oracle::plancherel_prob(size, &pred)?;
        writeln!(out, "{}/{}", p.numer(), p.denom()).map_err(io_err)?;
        return Ok(Outcome::Ok);
    }
    for lam in enumerate_partitions(size)? {
        let d = oracle::dim_syt(&lam);
        writeln!(
            out,
            "{}",
            json!({"N": size, "parts": lam.parts(), "dim": d.to_string()})
        )
        .map_err(io_err)?;
    }
    Ok(Outcome::Ok)
}

/// Exact Plancherel row CDFs for `N <= 12`, `k <= 3`, as `num/den` strings.
pub fn fixture_lines() -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for size in 0..=12usize {
        for k in 1..=3usize {
            for n in 0..=size as u32 {
                let p = oracle::row_cdf_exact(size, k, n)?;
                lines.push(
                    json!({"kind": "plancherel_row_cdf", "N": size, "k": k, "n": n,
                           "value": format!("{}/{}", p.numer(), p.denom())})
                    .to_string(),
                );
            }
        }
    }
    Ok(lines)
}

fn thread_count(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(None),
    }
}

/// Run with explicit arguments and streams; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match execute(&cli, stdout) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    let threads = thread_count(cli)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut buf = Vec::new();
    let outcome = pool.install(|| match &cli.command {
        Command::Verify(a) => verify(a, &mut buf),
        Command::Plancherel(a) => plancherel(a, &mut buf),
        Command::Oracle(a) => oracle_cmd(a, &mut buf),
    })?;
    match &cli.out {
        Some(path) => {
            let mut file =
                File::create(path).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
            file.write_all(&buf).map_err(io_err)?;
        }
        None => stdout.write_all(&buf).map_err(io_err)?,
    }
    Ok(outcome)
}

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails or a check does not
//! pass, 2 for usage errors and unreadable or malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::algnum::{eval_str, format_approx, AlgError, AlgebraicNumber};
use crate::euclid::{execute_script, parse_script, verify_certificate, Certificate};
use crate::hilbertlab::{
    decay_bound, format_report_line, lindemann_reduce, normalize_instance, report_json, verify_range, HilbertInstance,
};
use crate::par::Mode;
use crate::poly::{MultiPoly, UniPoly};
use crate::symfun::{decompose_elementary, eval_on_roots};

pub const PREC_ENV: &str = "CIRCULUS_PREC_BITS";
pub const DEFAULT_PREC: u32 = 256;
pub const MIN_PREC: u32 = 64;
pub const DEFAULT_NODES: usize = 64;
pub const DEFAULT_KMAX: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Settings shared by all subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub prec_bits: u32,
    pub quadrature_nodes: usize,
    pub kmax: usize,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config { prec_bits: DEFAULT_PREC, quadrature_nodes: DEFAULT_NODES, kmax: DEFAULT_KMAX, format: Format::Text }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "circulus",
    version,
    about = "Symmetric polynomials, algebraic numbers, constructions and Hilbert's integrals"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Working precision in bits (default 256, or $CIRCULUS_PREC_BITS).
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetric polynomials in x1, x2, ...
    #[command(subcommand)]
    Sym(SymCmd),
    /// Evaluate an expression over the rationals with + - * / ^ and sqrt().
    Alg {
        expr: String,
        /// Decimal digits of the printed approximation.
        #[arg(long, default_value_t = 30)]
        digits: usize,
    },
    /// Ruler-and-compass scripts and their certificates.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Hilbert's integrals for a concrete instance.
    #[command(subcommand)]
    Hilbert(HilbertCmd),
}

#[derive(Subcommand, Debug)]
enum SymCmd {
    /// Write a symmetric polynomial in the elementary symmetric polynomials.
    Decompose { poly: String },
    /// Evaluate a symmetric polynomial on the roots of f, scaled to an integer.
    Eval {
        #[arg(long)]
        p: String,
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Execute a script and emit its certificate.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate, optionally against its script.
    Verify {
        cert: PathBuf,
        #[arg(long)]
        script: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RangeArgs {
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: usize,
    /// Gauss-Legendre nodes for S_k (raised automatically for high degree).
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    /// Write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Run the k values one after another.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum HilbertCmd {
    /// Run all checks for k = 0..=kmax.
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        a: BigInt,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Reduce Π(1 + e^x) over the roots of Q to an instance, then verify it.
    Lindemann {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        range: RangeArgs,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn failed(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

type Outcome = Result<i32, Failure>;

/// Runs with `$CIRCULUS_PREC_BITS` taken from the process environment.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(PREC_ENV).ok();
    run_with_env(args, env.as_deref(), out, err)
}

/// Runs with an explicit value for the precision environment variable.
pub fn run_with_env<I, S>(args: I, env_prec: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = config(&cli, env_prec).and_then(|cfg| dispatch(cli.command, &cfg, out));
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn config(cli: &Cli, env_prec: Option<&str>) -> Result<Config, Failure> {
    let prec = match (cli.prec, env_prec) {
        (Some(p), _) => p,
        (None, Some(v)) => v.trim().parse().map_err(|_| usage(format!("{PREC_ENV}={v:?} is not a bit count")))?,
        (None, None) => DEFAULT_PREC,
    };
    if prec < MIN_PREC {
        return Err(usage(format!("precision must be at least {MIN_PREC} bits, got {prec}")));
    }
    Ok(Config { prec_bits: prec, format: cli.format, ..Config::default() })
}

fn dispatch(cmd: Command, cfg: &Config, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Sym(SymCmd::Decompose { poly }) => sym_decompose(&poly, cfg, out),
        Command::Sym(SymCmd::Eval { p, f }) => sym_eval(&p, &f, cfg, out),
        Command::Alg { expr, digits } => alg(&expr, digits, cfg, out),
        Command::Construct(ConstructCmd::Run { file, out: path }) => construct_run(&file, path.as_deref(), cfg, out),
        Command::Construct(ConstructCmd::Verify { cert, script }) => {
            construct_verify(&cert, script.as_deref(), cfg, out)
        }
        Command::Hilbert(HilbertCmd::Verify { poly, a, range }) => {
            let p = UniPoly::parse(&poly).map_err(usage)?;
            let inst = normalize_instance(&p, &a, cfg.prec_bits).map_err(usage)?;
            hilbert_verify(&inst, &range, cfg, out, None)
        }
        Command::Hilbert(HilbertCmd::Lindemann { poly, range }) => {
            let q = UniPoly::parse(&poly).map_err(usage)?;
            let l = lindemann_reduce(&q, cfg.prec_bits, mode(&range)).map_err(failed)?;
            let header = json!({
                "Q": q.to_compact_string("X"),
                "P_hat": l.p_hat.to_compact_string("X"),
                "P": l.instance.p.to_compact_string("X"),
                "a": l.instance.a.to_string(),
            });
            if cfg.format == Format::Text {
                writeln!(out, "Q = {}", q.to_compact_string("X")).map_err(io)?;
                writeln!(out, "P_hat = {}", l.p_hat.to_compact_string("X")).map_err(io)?;
                writeln!(out, "P = {}, a = {}", l.instance.p.to_compact_string("X"), l.instance.a).map_err(io)?;
            }
            hilbert_verify(&l.instance, &range, cfg, out, Some(header))
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    failed(format!("write failed: {e}"))
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value")).map_err(io)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| failed(format!("cannot write {}: {e}", path.display())))
}

fn sym_decompose(poly: &str, cfg: &Config, out: &mut dyn Write) -> Outcome {
    let p = MultiPoly::parse(poly, None).map_err(usage)?;
    let d = decompose_elementary(&p).map_err(failed)?;
    match cfg.format {
        Format::Text => writeln!(out, "{d}").map_err(io)?,
        Format::Json => {
            let terms: Vec<_> = d.terms.iter().map(|(c, e)| json!({ "coeff": c.to_string(), "sigma": e })).collect();
            emit_json(out, &json!({ "n_vars": d.n_vars, "text": d.to_string(), "terms": terms }))?;
        }
    }
    Ok(0)
}

fn sym_eval(p: &str, f: &str, cfg: &Config, out: &mut dyn Write) -> Outcome {
    let f = UniPoly::parse(f).map_err(usage)?;
    let n = f.degree().filter(|&n| n > 0).ok_or_else(|| usage("f must have degree at least 1"))?;
    let p = MultiPoly::parse(p, Some(n)).map_err(usage)?;
    let v = eval_on_roots(&p, &f).map_err(failed)?;
    match cfg.format {
        Format::Text => writeln!(out, "{v}").map_err(io)?,
        Format::Json => emit_json(out, &json!({ "value": v.to_string(), "deg_p": p.total_degree().unwrap_or(0) }))?,
    }
    Ok(0)
}

fn alg(expr: &str, digits: usize, cfg: &Config, out: &mut dyn Write) -> Outcome {
    let v = eval_str(expr).map_err(|e| match e {
        AlgError::Parse(_) | AlgError::Unsupported(_) => usage(e),
        other => failed(other),
    })?;
    let v = v.refine_prec(cfg.prec_bits).map_err(failed)?;
    let approx = format_approx(v.approx(), digits);
    match cfg.format {
        Format::Text => {
            writeln!(out, "annihilator: {}", v.ann().to_compact_string("x")).map_err(io)?;
            writeln!(out, "approx: {approx}").map_err(io)?;
            writeln!(out, "degree: {}", v.degree()).map_err(io)?;
        }
        Format::Json => {
            let payload = v.to_payload().map_err(failed)?;
            emit_json(
                out,
                &json!({
                    "annihilator": v.ann().to_compact_string("x"),
                    "approx": approx,
                    "degree": v.degree(),
                    "payload": payload,
                }),
            )?;
        }
    }
    Ok(0)
}

fn construct_run(file: &Path, path: Option<&Path>, cfg: &Config, out: &mut dyn Write) -> Outcome {
    let text = read(file)?;
    let script = parse_script(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let ex = execute_script(&script, cfg.prec_bits).map_err(|e| failed(format!("{}: {e}", file.display())))?;
    let json = ex.certificate.to_json();
    if let Some(p) = path {
        write_file(p, &format!("{json}\n"))?;
    }
    match cfg.format {
        Format::Text => {
            for (name, p) in &ex.points {
                writeln!(out, "{name}: x = {}", coord(&p.x)).map_err(io)?;
                writeln!(out, "{:w$}  y = {}", "", coord(&p.y), w = name.len()).map_err(io)?;
            }
            writeln!(out, "script_hash: {}", ex.certificate.script_hash).map_err(io)?;
        }
        Format::Json => writeln!(out, "{json}").map_err(io)?,
    }
    Ok(0)
}

fn coord(a: &AlgebraicNumber) -> String {
    match a.as_rational() {
        Some(q) => q.to_string(),
        None => format!("{a:.20}"),
    }
}

fn construct_verify(cert: &Path, script: Option<&Path>, cfg: &Config, out: &mut dyn Write) -> Outcome {
    let text = read(cert)?;
    let cert: Certificate =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: not a certificate: {e}", cert.display())))?;
    let script = script.map(read).transpose()?;
    let rep = verify_certificate(&cert, script.as_deref());
    let passed = rep.passed();
    match cfg.format {
        Format::Text => {
            for (name, ok) in &rep.checks {
                writeln!(out, "{name}: {}", if *ok { "pass" } else { "FAIL" }).map_err(io)?;
            }
            writeln!(out, "{}", if passed { "certificate valid" } else { "certificate INVALID" }).map_err(io)?;
        }
        Format::Json => {
            let checks: serde_json::Map<String, serde_json::Value> =
                rep.checks.iter().map(|(n, ok)| (n.clone(), json!(if *ok { "pass" } else { "fail" }))).collect();
            emit_json(out, &json!({ "checks": checks, "passed": passed }))?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn mode(range: &RangeArgs) -> Mode {
    if range.sequential {
        Mode::Sequential
    } else {
        Mode::Parallel
    }
}

fn hilbert_verify(
    inst: &HilbertInstance,
    range: &RangeArgs,
    cfg: &Config,
    out: &mut dyn Write,
    header: Option<serde_json::Value>,
) -> Outcome {
    let results = verify_range(inst, range.kmax, range.nodes, mode(range));
    let decay = decay_bound(inst);
    let report = report_json(inst, range.nodes, &results, &decay);
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if let Some(h) = header {
        value["lindemann"] = h;
    }
    let pretty = serde_json::to_string_pretty(&value).expect("json value");
    if let Some(p) = &range.json {
        write_file(p, &format!("{pretty}\n"))?;
    }
    match cfg.format {
        Format::Text => {
            writeln!(
                out,
                "instance P = {}, a = {}, C = {}, prec = {}",
                inst.p.to_compact_string("X"),
                inst.a,
                inst.c_constant(),
                inst.prec
            )
            .map_err(io)?;
            if inst.stripped > 0 {
                writeln!(out, "stripped {} zero root(s)", inst.stripped).map_err(io)?;
            }
            if inst.clustered {
                writeln!(out, "warning: roots cluster closer than 2^-{}", inst.prec / 4).map_err(io)?;
            }
            writeln!(out, "a + sum e^s = {}", format_approx(&inst.exp_sum(), 20)).map_err(io)?;
            for r in &results {
                match r {
                    Ok(r) => writeln!(out, "{}", format_report_line(r)).map_err(io)?,
                    Err(e) => writeln!(out, "error: {e}").map_err(io)?,
                }
            }
            writeln!(out, "decay U={:.6e} V={:.6e} k0={}", decay.u, decay.v, decay.k0).map_err(io)?;
            writeln!(out, "{}", if report.passed { "all checks passed" } else { "CHECKS FAILED" }).map_err(io)?;
        }
        Format::Json => writeln!(out, "{pretty}").map_err(io)?,
    }
    Ok(if report.passed { 0 } else { 1 })
}

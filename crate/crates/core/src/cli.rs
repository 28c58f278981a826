//! The `qlab` command line: argument parsing, command dispatch and report output.
//!
//! [`run`] does everything except touching the process: it returns the exit code and
//! the bytes meant for stdout, so tests can drive it directly.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::congruence::{
    check_ag_conjecture, ClaimRecord, ClaimSet, CongruenceClaim, Lab, ScanHit, Target, DEFAULT_NMAX, MIN_SUPPORT,
};
use crate::error::{Error, Result};
use crate::expr::{parse, Evaluator};
use crate::partitions::Oracle;
use crate::qproducts::{dsome_gf_closed, dsome_gf_lambert, some_gf};
use crate::registry::{Corpus, CORPUS_ENV, DEFAULT_PRECISION};
use crate::report::{Expectation, Status, VerificationReport};
use crate::ring::Ring;
use crate::series::PRECISION_CAP;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const FAILURE: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValuesMode {
    Brute,
    Lambert,
    Closed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Statistic {
    #[value(name = "DSOME", alias = "dsome")]
    #[serde(rename = "DSOME")]
    Dsome,
    #[value(name = "SOME", alias = "some")]
    #[serde(rename = "SOME")]
    Some,
}

#[derive(Debug, Parser)]
#[command(name = "qlab", version, about = "Truncated q-series laboratory for SOME/DSOME and their congruences")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Truncation order N (coefficients 0..N-1).
    #[arg(short = 'N', long = "precision", global = true)]
    pub precision: Option<usize>,
    /// Work modulo M.
    #[arg(long = "mod", global = true, value_name = "M")]
    pub modulus: Option<u64>,
    /// Largest n for progressions in `check` and `scan`.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Identity corpus file; falls back to $QLAB_CORPUS, then the built-in corpus.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Largest series length any computation may request.
    #[arg(long, global = true, default_value_t = PRECISION_CAP)]
    pub cap: usize,
    /// Include wall times in reports (output is then not byte-stable).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SOME(n) or DSOME(n) for n in FROM..=TO.
    Values {
        #[arg(value_enum)]
        target: Statistic,
        from: usize,
        to: usize,
        #[arg(value_enum, default_value_t = ValuesMode::Lambert)]
        mode: ValuesMode,
    },
    /// Coefficients 0..N-1 of an expression.
    Expand {
        expr: String,
        /// Same as -N.
        n: Option<usize>,
    },
    /// Run identity records whose id matches FILTER (`*` wildcards).
    Verify {
        filter: Option<String>,
        /// Every record (same as the filter `*`).
        #[arg(long)]
        all: bool,
    },
    /// Check congruence claims given as text or as claim files.
    Check {
        /// Claim text such as `DSOME[4n] == 0 mod 4`, or a path to a claim file.
        claims: Vec<String>,
        /// Include the built-in claim set.
        #[arg(long)]
        builtin: bool,
        /// Check `24 lambda = 1 (mod 5^alpha)` => SOME(lambda) = 0 (mod 5^alpha), with --nmax bounding lambda.
        #[arg(long, value_name = "ALPHA")]
        ag: Vec<u32>,
    },
    /// Search for progressions A n + B that vanish modulo M.
    Scan {
        /// DSOME, SOME, or `{expr}`.
        target: String,
        /// Single step A.
        #[arg(long, conflicts_with = "steps")]
        step: Option<usize>,
        /// Step range `LO..HI` (inclusive).
        #[arg(long)]
        steps: Option<String>,
        /// Moduli to try, comma separated; defaults to --mod.
        #[arg(long, value_delimiter = ',')]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = MIN_SUPPORT)]
        min_support: usize,
    },
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::Parse { .. } | Error::Corpus { .. } => exit::PARSE,
        Error::ResourceLimit(_) => exit::RESOURCE,
        Error::CrossCheckMismatch { .. } => exit::FAILURE,
        _ => exit::OTHER,
    }
}

/// Exit code for a batch of reports: errors first, then unexpected outcomes.
pub fn reports_code(reports: &[VerificationReport]) -> i32 {
    let mut code = exit::OK;
    for r in reports {
        let c = match &r.status {
            Status::Error { kind, .. } if kind == "ParseError" || kind == "CorpusError" => exit::PARSE,
            Status::Error { kind, .. } if kind == "ResourceLimit" => exit::RESOURCE,
            _ if r.as_expected() => exit::OK,
            _ => exit::FAILURE,
        };
        // parse beats resource beats failure
        if code == exit::OK || (c != exit::OK && c < code) {
            code = c;
        }
    }
    code
}

struct Produced {
    code: i32,
    config: Value,
    results: Value,
    csv: Vec<Vec<String>>,
    csv_header: Vec<&'static str>,
    text: String,
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let rendered = e.render().to_string();
            return if code == exit::OK {
                Outcome { code, stdout: rendered.into_bytes(), stderr: String::new() }
            } else {
                Outcome { code, stdout: Vec::new(), stderr: rendered }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let fail = |e: Error| Outcome { code: exit_code(&e), stdout: Vec::new(), stderr: format!("error: {e}\n") };
    if cli.global.threads == 0 {
        return fail(Error::InvalidArgument("--threads must be at least 1".into()));
    }
    if cli.global.cap == 0 || cli.global.cap > PRECISION_CAP {
        return fail(Error::InvalidArgument(format!("--cap must be between 1 and {PRECISION_CAP}")));
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => return fail(Error::InvalidArgument(e.to_string())),
    };
    let produced = match pool.install(|| dispatch(cli)) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let body = match render(cli, &produced) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    match &cli.global.out {
        Some(path) => match std::fs::File::create(path).and_then(|mut f| f.write_all(&body)) {
            Ok(()) => Outcome { code: produced.code, stdout: Vec::new(), stderr: String::new() },
            Err(e) => fail(Error::Io(format!("{}: {e}", path.display()))),
        },
        None => Outcome { code: produced.code, stdout: body, stderr: String::new() },
    }
}

fn render(cli: &Cli, p: &Produced) -> Result<Vec<u8>> {
    match cli.global.format {
        Format::Json => {
            let doc = json!({ "tool_version": TOOL_VERSION, "config": p.config, "results": p.results });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(&p.csv_header).map_err(io)?;
            for row in &p.csv {
                w.write_record(row).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
        Format::Text => Ok(p.text.clone().into_bytes()),
    }
}

fn base_config(cli: &Cli, command: &str) -> serde_json::Map<String, Value> {
    let g = &cli.global;
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("precision".into(), json!(g.precision));
    m.insert("modulus".into(), json!(g.modulus));
    m.insert("nmax".into(), json!(g.nmax));
    m.insert("threads".into(), json!(g.threads));
    m.insert("format".into(), json!(g.format));
    m.insert("cap".into(), json!(g.cap));
    m
}

fn ring_of(cli: &Cli) -> Result<Ring> {
    match cli.global.modulus {
        Some(m) => Ring::modular(m),
        None => Ok(Ring::ExactRational),
    }
}

fn within_cap(cli: &Cli, len: usize, what: &str) -> Result<()> {
    if len > cli.global.cap {
        return Err(Error::ResourceLimit(format!("{what} needs {len} terms, cap is {}", cli.global.cap)));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Produced> {
    match &cli.command {
        Command::Values { target, from, to, mode } => cmd_values(cli, *target, *from, *to, *mode),
        Command::Expand { expr, n } => cmd_expand(cli, expr, *n),
        Command::Verify { filter, all } => cmd_verify(cli, filter.as_deref(), *all),
        Command::Check { claims, builtin, ag } => cmd_check(cli, claims, *builtin, ag),
        Command::Scan { target, step, steps, moduli, min_support } => {
            cmd_scan(cli, target, *step, steps.as_deref(), moduli, *min_support)
        }
    }
}

fn table(config: serde_json::Map<String, Value>, rows: Vec<(usize, String)>, extra_text: &str) -> Produced {
    let results = Value::Array(rows.iter().map(|(n, v)| json!({ "n": n, "value": v })).collect());
    let mut text: String = rows.iter().map(|(n, v)| format!("{n} {v}\n")).collect();
    text.push_str(extra_text);
    Produced {
        code: exit::OK,
        config: Value::Object(config),
        results,
        csv: rows.into_iter().map(|(n, v)| vec![n.to_string(), v]).collect(),
        csv_header: vec!["n", "value"],
        text,
    }
}

fn reduce(v: i64, ring: Ring) -> String {
    match ring.modulus() {
        Some(m) => v.rem_euclid(m as i64).to_string(),
        None => v.to_string(),
    }
}

fn cmd_values(cli: &Cli, target: Statistic, from: usize, to: usize, mode: ValuesMode) -> Result<Produced> {
    if from > to {
        return Err(Error::InvalidArgument(format!("empty range {from}..={to}")));
    }
    let ring = ring_of(cli)?;
    let len = to.checked_add(1).ok_or_else(|| Error::ResourceLimit("range end overflows".into()))?;
    within_cap(cli, len, "values")?;
    let brute = || -> Result<Vec<String>> {
        let oracle = Oracle::default();
        (from..=to)
            .map(|n| {
                let v = match target {
                    Statistic::Dsome => oracle.dsome(n)?,
                    Statistic::Some => oracle.some(n)?,
                };
                Ok(reduce(v, ring))
            })
            .collect()
    };
    let lambert = || -> Result<Vec<String>> {
        let s = match target {
            Statistic::Dsome => dsome_gf_lambert(len, ring)?,
            Statistic::Some => some_gf(len, ring)?,
        };
        Ok((from..=to).map(|n| s.coeff(n).to_string()).collect())
    };
    let closed = || -> Result<Vec<String>> {
        if target != Statistic::Dsome {
            return Err(Error::InvalidArgument("the closed form is only available for DSOME".into()));
        }
        let s = dsome_gf_closed(len)?;
        let s = match ring.modulus() {
            Some(m) => s.reduce_mod(m)?,
            None => s,
        };
        Ok((from..=to).map(|n| s.coeff(n).to_string()).collect())
    };
    let (values, extra) = match mode {
        ValuesMode::Brute => (brute()?, String::new()),
        ValuesMode::Lambert => (lambert()?, String::new()),
        ValuesMode::Closed => (closed()?, String::new()),
        ValuesMode::All => {
            let mut sources = vec![("brute", brute()?), ("lambert", lambert()?)];
            if target == Statistic::Dsome {
                sources.push(("closed", closed()?));
            }
            let (name0, first) = &sources[0];
            for (name, other) in &sources[1..] {
                if let Some(i) = (0..first.len()).find(|&i| first[i] != other[i]) {
                    return Err(Error::CrossCheckMismatch {
                        n: from + i,
                        detail: format!("{name0} gives {}, {name} gives {}", first[i], other[i]),
                    });
                }
            }
            (sources.swap_remove(0).1, "consistent\n".to_string())
        }
    };
    let mut config = base_config(cli, "values");
    config.insert("target".into(), json!(target));
    config.insert("from".into(), json!(from));
    config.insert("to".into(), json!(to));
    config.insert("mode".into(), json!(mode));
    if mode == ValuesMode::All {
        config.insert("consistent".into(), json!(true));
    }
    Ok(table(config, (from..=to).zip(values).collect(), &extra))
}

fn cmd_expand(cli: &Cli, text: &str, n: Option<usize>) -> Result<Produced> {
    let n = n.or(cli.global.precision).unwrap_or(DEFAULT_PRECISION);
    within_cap(cli, n, "expand")?;
    let e = parse(text)?;
    let s = Evaluator::new(ring_of(cli)?).eval(&e, n)?;
    let mut config = base_config(cli, "expand");
    config.insert("precision".into(), json!(n));
    config.insert("expression".into(), json!(text));
    Ok(table(config, (0..n).map(|i| (i, s.coeff(i).to_string())).collect(), ""))
}

fn strip_times(cli: &Cli, reports: &mut [VerificationReport]) {
    if !cli.global.timings {
        for r in reports {
            r.elapsed = None;
        }
    }
}

fn status_text(r: &VerificationReport) -> String {
    let mut s = match &r.status {
        Status::Holds => "Holds".to_string(),
        Status::FailsAt { index, lhs, rhs } => format!("FailsAt {index}: {lhs} vs {rhs}"),
        Status::Error { kind, message } => format!("Error {kind}: {message}"),
    };
    if r.expected == Expectation::Fails {
        s.push_str(" (expected to fail)");
    }
    s
}

fn reports_produced(config: serde_json::Map<String, Value>, reports: Vec<VerificationReport>) -> Result<Produced> {
    let code = reports_code(&reports);
    let results = serde_json::to_value(&reports).map_err(|e| Error::Io(e.to_string()))?;
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let text = reports.iter().map(|r| format!("{:width$}  N={}  {}\n", r.id, r.precision, status_text(r))).collect();
    let csv = reports
        .iter()
        .map(|r| {
            let (fi, l, rr) = match &r.status {
                Status::FailsAt { index, lhs, rhs } => (index.to_string(), lhs.clone(), rhs.clone()),
                _ => Default::default(),
            };
            let expected = match r.expected {
                Expectation::Holds => "holds",
                Expectation::Fails => "fails",
            };
            vec![r.id.clone(), r.precision.to_string(), r.status.name().to_string(), fi, l, rr, expected.to_string()]
        })
        .collect();
    Ok(Produced {
        code,
        config: Value::Object(config),
        results,
        csv,
        csv_header: vec!["id", "precision", "status", "fail_index", "lhs_coeff", "rhs_coeff", "expected"],
        text,
    })
}

fn corpus_path(cli: &Cli) -> Option<PathBuf> {
    cli.global.corpus.clone().or_else(|| std::env::var_os(CORPUS_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

fn cmd_verify(cli: &Cli, filter: Option<&str>, all: bool) -> Result<Produced> {
    let path = corpus_path(cli);
    let corpus = match &path {
        Some(p) => Corpus::load(p)?,
        None => Corpus::builtin(),
    };
    let pattern = match (filter, all) {
        (_, true) | (None, false) => "*",
        (Some(f), false) => f,
    };
    let chosen = corpus.filter(pattern);
    if chosen.is_empty() {
        return Err(Error::UnknownIdentity(pattern.to_string()));
    }
    if let Some(n) = cli.global.precision {
        within_cap(cli, n, "verify")?;
    }
    let mut reports = chosen.verify_all(cli.global.precision, cli.global.threads > 1);
    strip_times(cli, &mut reports);
    let mut config = base_config(cli, "verify");
    config.insert("filter".into(), json!(pattern));
    config.insert("corpus".into(), json!(path.map(|p| p.display().to_string()).unwrap_or_else(|| "builtin".into())));
    if cli.global.precision.is_none() {
        config.insert("precision".into(), json!(DEFAULT_PRECISION));
    }
    reports_produced(config, reports)
}

fn claim_cap(cli: &Cli, claim: &CongruenceClaim, n_max: usize) -> Result<()> {
    for p in claim.progressions() {
        let top = p.index(n_max).ok_or_else(|| Error::ResourceLimit("claim index overflows".into()))?;
        within_cap(cli, top + 1, &claim.to_string())?;
    }
    Ok(())
}

fn cmd_check(cli: &Cli, inputs: &[String], builtin: bool, ag: &[u32]) -> Result<Produced> {
    let mut records: Vec<ClaimRecord> = Vec::new();
    if builtin {
        records.extend(ClaimSet::builtin().records().iter().cloned());
    }
    for input in inputs {
        let path = std::path::Path::new(input);
        if path.is_file() {
            records.extend(ClaimSet::load(path)?.records().iter().cloned());
        } else {
            let claim = CongruenceClaim::parse(input)?;
            records.push(ClaimRecord {
                id: input.trim().to_string(),
                claim,
                anchor: String::new(),
                expected: Expectation::Holds,
                n_max: None,
                line: 0,
            });
        }
    }
    if records.is_empty() && ag.is_empty() {
        return Err(Error::InvalidArgument("nothing to check: give claims, --builtin or --ag".into()));
    }
    for r in &records {
        claim_cap(cli, &r.claim, cli.global.nmax.or(r.n_max).unwrap_or(DEFAULT_NMAX))?;
    }
    let lab = Lab::new();
    let set_reports = {
        use rayon::prelude::*;
        let n = cli.global.nmax;
        if cli.global.threads > 1 {
            records.par_iter().map(|r| r.check(&lab, n)).collect::<Vec<_>>()
        } else {
            records.iter().map(|r| r.check(&lab, n)).collect()
        }
    };
    let mut reports = set_reports;
    let lambda_max = cli.global.nmax.unwrap_or(5000);
    for &alpha in ag {
        within_cap(cli, lambda_max + 1, "the SOME class check")?;
        reports.push(check_ag_conjecture(&lab, alpha, lambda_max)?);
    }
    strip_times(cli, &mut reports);
    let mut config = base_config(cli, "check");
    if !ag.is_empty() {
        config.insert("ag_alpha".into(), json!(ag));
        config.insert("lambda_max".into(), json!(lambda_max));
    }
    reports_produced(config, reports)
}

fn parse_steps(step: Option<usize>, steps: Option<&str>) -> Result<(usize, usize)> {
    match (step, steps) {
        (Some(a), _) => Ok((a, a)),
        (None, Some(range)) => {
            let bad = || Error::InvalidArgument(format!("step range `{range}` is not LO..HI"));
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
        }
        (None, None) => Err(Error::InvalidArgument("scan needs --step or --steps".into())),
    }
}

fn hit_json(h: &ScanHit) -> Value {
    json!({
        "progression": h.prog.to_string(),
        "step": h.prog.step,
        "residue": h.prog.residue,
        "modulus": h.modulus,
        "verified_up_to": h.verified_up_to,
        "support": h.support,
        "witness_free": h.witness_free,
    })
}

fn cmd_scan(
    cli: &Cli,
    target: &str,
    step: Option<usize>,
    steps: Option<&str>,
    moduli: &[u64],
    min_support: usize,
) -> Result<Produced> {
    let target = Target::parse(target)?;
    let (a_lo, a_hi) = parse_steps(step, steps)?;
    let mut ms = moduli.to_vec();
    if ms.is_empty() {
        ms.extend(cli.global.modulus);
    }
    if ms.is_empty() {
        return Err(Error::InvalidArgument("scan needs --mod or --moduli".into()));
    }
    let n_max = cli.global.nmax.unwrap_or(DEFAULT_NMAX);
    let need = a_hi.checked_mul(2 * n_max + 1).and_then(|x| x.checked_add(1));
    within_cap(cli, need.unwrap_or(usize::MAX), "scan")?;
    let hits = Lab::new().scan(&target, (a_lo, a_hi), &ms, n_max, min_support)?;
    let mut config = base_config(cli, "scan");
    config.insert("target".into(), json!(target.key()));
    config.insert("steps".into(), json!([a_lo, a_hi]));
    config.insert("moduli".into(), json!(ms));
    config.insert("nmax".into(), json!(n_max));
    config.insert("min_support".into(), json!(min_support));
    let text = hits
        .iter()
        .map(|h| {
            format!(
                "{}[{}] == 0 mod {}  support={} verified_up_to={}{}\n",
                target.key(),
                h.prog,
                h.modulus,
                h.support,
                h.verified_up_to,
                if h.witness_free { "" } else { " unconfirmed" }
            )
        })
        .collect();
    let csv = hits
        .iter()
        .map(|h| {
            vec![
                h.prog.step.to_string(),
                h.prog.residue.to_string(),
                h.modulus.to_string(),
                h.verified_up_to.to_string(),
                h.support.to_string(),
                h.witness_free.to_string(),
            ]
        })
        .collect();
    Ok(Produced {
        code: exit::OK,
        config: Value::Object(config),
        results: Value::Array(hits.iter().map(hit_json).collect()),
        csv,
        csv_header: vec!["step", "residue", "modulus", "verified_up_to", "support", "witness_free"],
        text,
    })
}

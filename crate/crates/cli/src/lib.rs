//! Command-line front end: every subcommand prints one JSON report with a
//! `verdict` field and exits 0 (positive), 1 (negative), 2 (inconclusive or
//! bounded) or 3 (input error).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mahler::automata::{kernel_system_with_order, scalar_equation_search, Dfao, DfaoJson};
use mahler::exact::ball::RealBall;
use mahler::exact::matrix::Matrix;
use mahler::exact::parse::{parse_polynomial, parse_rational_function};
use mahler::exact::poly::vars;
use mahler::exact::series::TruncatedSeries;
use mahler::exact::upoly::RealAlgebraic;
use mahler::exact::{format_point, parse_point, parse_rational, Rational};
use mahler::lattice::IVec;
use mahler::probe::{digits_to_bits, independence_report, BundleEntry};
use mahler::purity::{build_schedule, diagonal_schedule, log_relation_probe, monomial_basis, relation_matrix, relation_matrix_rf, zero_orbit_scan};
use mahler::system::admissible::{check_admissible_pair, verify_admissibility, AdmissibilityOptions, AdmissibilityReport, Verdict};
use mahler::system::eval::{evaluate_values_with_depth, iterate_at};
use mahler::system::identity::verify_functional_identity;
use mahler::system::load::{load_system, series_from_json, system_from_json, system_to_json, transform_from_json, LoadedSystem, SystemJson, TransformJson};
use mahler::system::regular::{check_regular, verify_regularity, Regularity};
use mahler::system::scalar::{scalar_to_system, ScalarEquationJson, ScalarMahlerEquation};
use mahler::transform::MonomialTransform;
use mahler::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BOUNDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Envelope shared by every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema_version: String,
    pub command: String,
    pub verdict: String,
    pub exit_code: i32,
    pub result: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorObject {
    pub kind: String,
    pub message: String,
}

#[derive(Parser, Debug)]
#[command(name = "mahler", version, about = "Exact and rigorous tools for linear Mahler systems")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class M, limit zero and T-independence for a pair (T, alpha).
    CheckAdmissible(AdmissibleArgs),
    /// Regularity certificate for a system at a point.
    CheckRegular(RegularArgs),
    /// The iterate A_k(z), optionally evaluated at a point.
    Iterate(IterateArgs),
    /// Rigorous values of the components at a point.
    Eval(EvalArgs),
    /// Mahler system of the generating function of a DFAO.
    FromDfa(DfaArgs),
    /// Search for or convert a scalar Mahler equation.
    ScalarEq(ScalarArgs),
    /// Relation matrix R(B) for a block-diagonal B.
    RelationMatrix(RelationArgs),
    /// Iteration schedule k_l for a family of transforms.
    Schedule(ScheduleArgs),
    /// Zeros of g along a scheduled orbit.
    ZeroScan(ZeroScanArgs),
    /// Bounded integer-relation search among Mahler values.
    Probe(ProbeArgs),
    /// Series check of the functional equation.
    VerifyIdentity(IdentityArgs),
}

#[derive(Args, Debug)]
pub struct AdmissibleArgs {
    /// Transform as a file or inline JSON `{"size", "rows"}`.
    #[arg(long)]
    pub transform: String,
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub k_max: u64,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub b_max: u64,
    /// Replay the certificates of a saved report instead of searching.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegularArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub point: String,
    /// Orbit points to check exactly beyond the tail index.
    #[arg(long, default_value_t = 0)]
    pub k_exact: u64,
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IterateArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub k: u64,
    /// Evaluate A_k exactly at this point instead of printing A_k(z).
    #[arg(long)]
    pub point: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..))]
    pub precision: u32,
    /// Decimal digits printed for the ball endpoints.
    #[arg(long)]
    pub digits: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DfaArgs {
    /// DFAO file or inline JSON.
    #[arg(long, conflicts_with = "builtin")]
    pub dfa: Option<String>,
    /// One of thue-morse, powers-of-two, baum-sweet, period-doubling, constant.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Number of exact coefficients attached to the system.
    #[arg(long, default_value_t = 512)]
    pub order: u64,
}

#[derive(Args, Debug)]
pub struct ScalarArgs {
    /// Series (coefficient list or series object) to search an equation for.
    #[arg(long)]
    pub series: Option<String>,
    /// Search on the sequence of a DFAO instead.
    #[arg(long)]
    pub dfa: Option<String>,
    #[arg(long)]
    pub builtin: Option<String>,
    /// Convert this equation `{"q", "coeffs", "inhomogeneous"}` to a system.
    #[arg(long)]
    pub equation: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = 3)]
    pub m_max: usize,
    #[arg(long, default_value_t = 3)]
    pub d_max: usize,
    /// Equations used for the nullspace; verification runs to 2N.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    /// `{"blocks", "degrees", "matrix", "vars"?}`.
    #[arg(long)]
    pub input: String,
}

#[derive(Args, Debug)]
pub struct ScheduleArgs {
    /// List of transforms (file or inline JSON).
    #[arg(long, conflicts_with = "rhos")]
    pub transforms: Option<String>,
    /// Integer spectral radii, e.g. "2,3" (1x1 transforms).
    #[arg(long)]
    pub rhos: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub l: u64,
    /// Integer basis of V^perp as JSON, e.g. "[[2,1]]".
    #[arg(long)]
    pub v_basis: Option<String>,
    /// Precision of the logarithm relation probe.
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    #[arg(long, default_value = "1e6")]
    pub height: String,
    /// Print only k_L instead of every entry.
    #[arg(long)]
    pub last_only: bool,
}

#[derive(Args, Debug)]
pub struct ZeroScanArgs {
    /// Polynomial in the concatenated coordinates.
    #[arg(long)]
    pub g: String,
    /// Variable names, comma separated (default z1, z2, ...).
    #[arg(long)]
    pub vars: Option<String>,
    #[arg(long, conflicts_with = "rhos")]
    pub transforms: Option<String>,
    #[arg(long)]
    pub rhos: Option<String>,
    /// Points per transform separated by ';', e.g. "1/2;1/3".
    #[arg(long)]
    pub points: String,
    /// `diagonal` (k_l = (l, ..., l)) or `floor` (componentwise floors).
    #[arg(long, default_value = "diagonal")]
    pub schedule: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub l: u64,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// `{"entries": [{"system", "point", "components"?}]}`; a system may be
    /// a path relative to the bundle file.
    #[arg(long)]
    pub bundle: String,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: u32,
    #[arg(long, default_value = "1e15")]
    pub height: String,
    #[arg(long, default_value_t = 256, conflicts_with = "digits", value_parser = clap::value_parser!(u32).range(2..))]
    pub precision: u32,
    /// Precision in decimal digits.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: Option<u32>,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long)]
    pub system: String,
    /// Residual is computed below this total degree (default: the
    /// smallest series order).
    #[arg(long)]
    pub order: Option<u64>,
}

/// Exit code and JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

fn envelope(command: &str, verdict: &str, code: i32, result: Value) -> Outcome {
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "verdict": verdict,
        "exit_code": code,
        "result": result,
    });
    Outcome { code, report }
}

fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn error_outcome(command: &str, e: &Error) -> Outcome {
    // semi-decidable conditions are inconclusive rather than input errors
    let (verdict, code) = match e {
        Error::NotRegular(_) | Error::PrecisionUnreachable(_) | Error::AmbiguousFloor(_) | Error::DivergenceRisk(_) => ("Inconclusive", EXIT_BOUNDED),
        _ => ("InputError", EXIT_INPUT),
    };
    let obj = ErrorObject { kind: error_kind(e), message: e.to_string() };
    envelope(command, verdict, code, json!({ "error": obj }))
}

/// Parses arguments and runs the command; never panics on bad input.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let obj = ErrorObject { kind: "Usage".into(), message: e.to_string() };
            return envelope("", "InputError", EXIT_INPUT, json!({ "error": obj }));
        }
    };
    execute(&cli.command)
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckAdmissible(_) => "check-admissible",
        Command::CheckRegular(_) => "check-regular",
        Command::Iterate(_) => "iterate",
        Command::Eval(_) => "eval",
        Command::FromDfa(_) => "from-dfa",
        Command::ScalarEq(_) => "scalar-eq",
        Command::RelationMatrix(_) => "relation-matrix",
        Command::Schedule(_) => "schedule",
        Command::ZeroScan(_) => "zero-scan",
        Command::Probe(_) => "probe",
        Command::VerifyIdentity(_) => "verify-identity",
    }
}

pub fn execute(c: &Command) -> Outcome {
    let name = command_name(c);
    let r = match c {
        Command::CheckAdmissible(a) => check_admissible(a),
        Command::CheckRegular(a) => check_regular_cmd(a),
        Command::Iterate(a) => iterate(a),
        Command::Eval(a) => eval(a),
        Command::FromDfa(a) => from_dfa(a),
        Command::ScalarEq(a) => scalar_eq(a),
        Command::RelationMatrix(a) => relation(a),
        Command::Schedule(a) => schedule(a),
        Command::ZeroScan(a) => zero_scan(a),
        Command::Probe(a) => probe(a),
        Command::VerifyIdentity(a) => identity(a),
    };
    match r {
        Ok((verdict, code, result)) => envelope(name, &verdict, code, result),
        Err(e) => error_outcome(name, &e),
    }
}

type CmdResult = Result<(String, i32, Value)>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Inline JSON if the argument starts with `{` or `[`, else a file path.
fn read_arg(s: &str) -> Result<(String, Option<PathBuf>)> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok((s.to_string(), None));
    }
    let text = std::fs::read_to_string(s).map_err(|e| Error::Parse(format!("cannot read `{s}`: {e}")))?;
    Ok((text, Some(PathBuf::from(s))))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn read_transform(s: &str) -> Result<MonomialTransform> {
    let (text, _) = read_arg(s)?;
    let v: Value = parse_json(&text, "transform")?;
    transform_value(&v)
}

fn transform_value(v: &Value) -> Result<MonomialTransform> {
    if v.is_array() {
        let rows: Vec<Vec<u64>> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("transform rows: {e}")))?;
        return MonomialTransform::from_u64(&rows);
    }
    let t: TransformJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("transform: {e}")))?;
    transform_from_json(&t)
}

fn read_transforms(transforms: Option<&str>, rhos: Option<&str>) -> Result<Vec<MonomialTransform>> {
    match (transforms, rhos) {
        (Some(t), _) => {
            let (text, _) = read_arg(t)?;
            let v: Value = parse_json(&text, "transforms")?;
            let items = v.as_array().ok_or_else(|| Error::Parse("expected a list of transforms".into()))?;
            items.iter().map(transform_value).collect()
        }
        (None, Some(r)) => r
            .split(',')
            .map(|x| x.trim().parse::<u64>().map(|n| MonomialTransform::scalar(1, n)).map_err(|_| Error::Parse(format!("spectral radius `{x}` is not a positive integer"))))
            .collect(),
        (None, None) => Err(Error::Invalid("give --transforms or --rhos".into())),
    }
}

fn read_system(s: &str) -> Result<LoadedSystem> {
    let (text, _) = read_arg(s)?;
    load_system(&text)
}

fn read_series_of(l: &LoadedSystem) -> Result<Vec<TruncatedSeries>> {
    l.series.clone().ok_or_else(|| Error::Invalid("the system file carries no \"series\"".into()))
}

/// `1e15`, `10^15` or a plain integer.
pub fn parse_height(s: &str) -> Result<BigInt> {
    let bad = || Error::Parse(format!("height `{s}` is not a positive integer"));
    let t = s.trim();
    let h = if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: BigInt = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        m * BigInt::from(10u32).pow(e)
    } else if let Some((b, e)) = t.split_once('^') {
        let b: BigInt = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        b.pow(e)
    } else {
        t.parse().map_err(|_| bad())?
    };
    if h <= BigInt::from(0) {
        return Err(bad());
    }
    Ok(h)
}

fn read_report<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Report<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read `{}`: {e}", path.display())))?;
    parse_json(&text, "saved report")
}

fn replayed(ok: bool, what: &str, replay_of: &str) -> CmdResult {
    let (v, code) = if ok { ("Verified", EXIT_POSITIVE) } else { ("Rejected", EXIT_NEGATIVE) };
    Ok((v.into(), code, json!({ "replay_of": replay_of, "checked": what, "certificates_valid": ok })))
}

fn check_admissible(a: &AdmissibleArgs) -> CmdResult {
    let t = read_transform(&a.transform)?;
    let alpha = parse_point(&a.point)?;
    if let Some(path) = &a.verify {
        let saved: Report<AdmissibilityReport> = read_report(path)?;
        let ok = verify_admissibility(&t, &alpha, &saved.result)?;
        return replayed(ok, "class M conditions, limit-zero witness, T-dependence witness", &saved.verdict);
    }
    let opts = AdmissibilityOptions { k_max: a.k_max, b_max: a.b_max, ..Default::default() };
    let r = check_admissible_pair(&t, &alpha, &opts)?;
    let (v, code) = match &r.verdict {
        Verdict::Admissible => ("Admissible", EXIT_POSITIVE),
        Verdict::NotAdmissible { .. } => ("NotAdmissible", EXIT_NEGATIVE),
        Verdict::AdmissibleUpToBound { .. } => ("AdmissibleUpToBound", EXIT_BOUNDED),
        Verdict::Inconclusive { .. } => ("Inconclusive", EXIT_BOUNDED),
    };
    Ok((v.into(), code, to_value(&r)))
}

fn check_regular_cmd(a: &RegularArgs) -> CmdResult {
    let l = read_system(&a.system)?;
    let alpha = parse_point(&a.point)?;
    if let Some(path) = &a.verify {
        let saved: Report<Regularity> = read_report(path)?;
        let ok = verify_regularity(&l.system, &alpha, &saved.result)?;
        return replayed(ok, "tail inequalities, polydisc entry, exact orbit points", &saved.verdict);
    }
    let r = check_regular(&l.system, &alpha, a.k_exact)?;
    let (v, code) = match &r {
        Regularity::Certificate(_) => ("Regular", EXIT_POSITIVE),
        Regularity::CounterexampleAt { .. } => ("NotRegular", EXIT_NEGATIVE),
        Regularity::Inconclusive { .. } => ("Inconclusive", EXIT_BOUNDED),
    };
    Ok((v.into(), code, to_value(&r)))
}

fn iterate(a: &IterateArgs) -> CmdResult {
    let l = read_system(&a.system)?;
    let rows: Vec<Vec<String>> = match &a.point {
        Some(p) => iterate_at(&l.system, &parse_point(p)?, a.k)?.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        None => l.system.iterate(a.k)?.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
    };
    Ok((
        "Computed".into(),
        EXIT_POSITIVE,
        json!({ "k": a.k, "vars": l.system.vars().to_vec(), "components": l.system.components(), "point": a.point, "matrix": rows }),
    ))
}

fn ball_json(b: &RealBall, digits: usize) -> Value {
    let (lo, hi) = b.endpoints_decimal(digits);
    json!({ "lo": lo, "hi": hi, "radius_log2": b.radius().log2_ceil() })
}

fn eval(a: &EvalArgs) -> CmdResult {
    let l = read_system(&a.system)?;
    let alpha = parse_point(&a.point)?;
    let regularity = check_regular(&l.system, &alpha, 0)?;
    if let Regularity::CounterexampleAt { .. } = regularity {
        return Ok(("NotRegular".into(), EXIT_NEGATIVE, json!({ "regularity": regularity })));
    }
    let series = read_series_of(&l)?;
    let (vals, depth) = evaluate_values_with_depth(&l.system, &alpha, &series, a.precision)?;
    let digits = a.digits.unwrap_or(((a.precision as f64) * std::f64::consts::LOG10_2) as usize);
    let values: Vec<Value> = l
        .system
        .components()
        .iter()
        .zip(&vals)
        .map(|(c, b)| {
            let mut v = ball_json(b, digits);
            v["component"] = json!(c);
            v
        })
        .collect();
    Ok((
        "Evaluated".into(),
        EXIT_POSITIVE,
        json!({ "point": format_point(&alpha), "precision_bits": a.precision, "depth": depth, "values": values, "regularity": regularity }),
    ))
}

fn read_dfa(dfa: Option<&str>, builtin: Option<&str>) -> Result<Dfao> {
    match (dfa, builtin) {
        (Some(d), _) => {
            let (text, _) = read_arg(d)?;
            let j: DfaoJson = parse_json(&text, "DFAO")?;
            Dfao::from_json(&j)
        }
        (None, Some(b)) => Dfao::builtin(b).ok_or_else(|| Error::Invalid(format!("unknown built-in `{b}`; known: {}", Dfao::BUILTINS.join(", ")))),
        (None, None) => Err(Error::Invalid("give --dfa or --builtin".into())),
    }
}

fn from_dfa(a: &DfaArgs) -> CmdResult {
    let d = read_dfa(a.dfa.as_deref(), a.builtin.as_deref())?;
    if a.order < 2 {
        return Err(Error::Invalid("order must be at least 2".into()));
    }
    let k = kernel_system_with_order(&d, a.order)?;
    let system = system_to_json(&k.system, Some(&k.series))?;
    Ok(("Derived".into(), EXIT_POSITIVE, json!({ "dfa": d.to_json(), "kernel": k.summary(), "system": system })))
}

fn scalar_eq(a: &ScalarArgs) -> CmdResult {
    if let Some(e) = &a.equation {
        let (text, _) = read_arg(e)?;
        let j: ScalarEquationJson = parse_json(&text, "scalar equation")?;
        let eq = ScalarMahlerEquation::from_json(&j)?;
        let s = scalar_to_system(&eq)?;
        return Ok(("Converted".into(), EXIT_POSITIVE, json!({ "equation": eq.to_json(), "system": system_to_json(&s, None)? })));
    }
    let z = vars(&["z"]);
    let series = if let Some(s) = &a.series {
        let (text, _) = read_arg(s)?;
        let v: Value = parse_json(&text, "series")?;
        series_from_json(&v, &z, None)?
    } else {
        let d = read_dfa(a.dfa.as_deref(), a.builtin.as_deref())?;
        let n = a.n.unwrap_or((a.m_max + 1) * (a.d_max + 1) + 16);
        TruncatedSeries::univariate(&z, &d.terms_from(d.initial(), 2 * n), None)?
    };
    let n = a.n.unwrap_or((series.order() / 2) as usize);
    let found = scalar_equation_search(&series, a.q, a.m_max, a.d_max, n)?;
    let params = json!({ "q": a.q, "m_max": a.m_max, "d_max": a.d_max, "n": n, "verified_to": 2 * n });
    match found {
        Some(eq) => Ok((
            "Found".into(),
            EXIT_POSITIVE,
            json!({ "search": params, "equation": eq.to_json(), "note": "a Mahler equation satisfied to the verified order; minimality is not certified" }),
        )),
        None => Ok(("NotFound".into(), EXIT_BOUNDED, json!({ "search": params }))),
    }
}

#[derive(Deserialize)]
struct RelationInput {
    blocks: Vec<usize>,
    degrees: Vec<u32>,
    matrix: Vec<Vec<String>>,
    #[serde(default)]
    vars: Option<Vec<String>>,
}

fn relation(a: &RelationArgs) -> CmdResult {
    let (text, _) = read_arg(&a.input)?;
    let inp: RelationInput = parse_json(&text, "relation-matrix input")?;
    let idx = monomial_basis(&inp.blocks, &inp.degrees)?;
    let rows: Vec<Vec<String>> = match &inp.vars {
        Some(v) => {
            let v = vars(v);
            let m = inp.matrix.iter().map(|r| r.iter().map(|s| parse_rational_function(s, &v)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            let r = relation_matrix_rf(&Matrix::from_rows(m)?, &idx)?;
            r.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        }
        None => {
            let m = inp.matrix.iter().map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            let r = relation_matrix(&Matrix::<Rational>::from_rows(m)?, &idx)?;
            r.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        }
    };
    Ok(("Computed".into(), EXIT_POSITIVE, json!({ "index": idx, "matrix": rows })))
}

fn parse_basis(s: &str) -> Result<Vec<IVec>> {
    let v: Vec<Vec<i64>> = parse_json(s, "v-basis")?;
    Ok(v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

fn schedule(a: &ScheduleArgs) -> CmdResult {
    let ts = read_transforms(a.transforms.as_deref(), a.rhos.as_deref())?;
    let basis = a.v_basis.as_deref().map(parse_basis).transpose()?;
    let s = build_schedule(&ts, a.l, basis.as_deref())?;
    let height = parse_height(&a.height)?;
    let radii: Vec<RealAlgebraic> = ts.iter().map(|t| t.spectral_radius()).collect();
    let warning = if radii.len() >= 2 {
        match log_relation_probe(&radii, a.precision, &height) {
            Ok(Some(r)) if basis.is_some() => json!({ "candidate": r }),
            Ok(Some(r)) => json!({ "candidate": r, "note": "numerical candidate relation among 1/log rho_i; consider supplying --v-basis" }),
            Ok(None) => json!(null),
            Err(e) => json!({ "skipped": e.to_string() }),
        }
    } else {
        json!(null)
    };
    let (v, code) = if s.verified { ("Verified", EXIT_POSITIVE) } else { ("Unverified", EXIT_BOUNDED) };
    let mut body = to_value(&s);
    if a.last_only {
        body["entries"] = json!({ "l": a.l, "k_l": s.entries.last() });
    }
    body["log_relation_probe"] = warning;
    Ok((v.into(), code, body))
}

fn zero_scan(a: &ZeroScanArgs) -> CmdResult {
    let ts = read_transforms(a.transforms.as_deref(), a.rhos.as_deref())?;
    let alphas: Vec<Vec<Rational>> = a.points.split(';').map(parse_point).collect::<Result<_>>()?;
    let dim: usize = alphas.iter().map(Vec::len).sum();
    let names: Vec<String> = match &a.vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => (1..=dim).map(|i| format!("z{i}")).collect(),
    };
    let g = parse_polynomial(&a.g, &vars(&names))?;
    let sched = match a.schedule.as_str() {
        "diagonal" => diagonal_schedule(ts.len(), a.l),
        "floor" => build_schedule(&ts, a.l, None)?.entries,
        other => return Err(Error::Invalid(format!("unknown schedule `{other}`; use diagonal or floor"))),
    };
    let scan = zero_orbit_scan(&g, &ts, &alphas, &sched, a.l)?;
    let (v, code) = if scan.undecided.is_empty() { ("Scanned", EXIT_POSITIVE) } else { ("Undecided", EXIT_BOUNDED) };
    let mut body = to_value(&scan);
    body["g"] = json!(g.to_string());
    body["schedule"] = json!(a.schedule);
    body["note"] = json!("gap statistics describe this window only");
    Ok((v.into(), code, body))
}

#[derive(Deserialize)]
struct BundleJson {
    entries: Vec<BundleEntryJson>,
}

#[derive(Deserialize)]
struct BundleEntryJson {
    system: Value,
    point: String,
    #[serde(default)]
    components: Option<Vec<String>>,
}

fn read_bundle(s: &str) -> Result<Vec<BundleEntry>> {
    let (text, path) = read_arg(s)?;
    let b: BundleJson = parse_json(&text, "bundle")?;
    let base = path.as_ref().and_then(|p| p.parent().map(Path::to_path_buf)).unwrap_or_default();
    b.entries
        .iter()
        .map(|e| {
            let loaded = match &e.system {
                Value::String(p) => {
                    let full = base.join(p);
                    let text = std::fs::read_to_string(&full).map_err(|err| Error::Parse(format!("cannot read `{}`: {err}", full.display())))?;
                    load_system(&text)?
                }
                v => {
                    let j: SystemJson = serde_json::from_value(v.clone()).map_err(|err| Error::Parse(format!("bundle system: {err}")))?;
                    system_from_json(&j)?
                }
            };
            let series = read_series_of(&loaded)?;
            Ok(BundleEntry { system: loaded.system, series, point: parse_point(&e.point)?, components: e.components.clone() })
        })
        .collect()
}

fn probe(a: &ProbeArgs) -> CmdResult {
    let bundle = read_bundle(&a.bundle)?;
    let height = parse_height(&a.height)?;
    let bits = a.digits.map(digits_to_bits).unwrap_or(a.precision);
    let r = independence_report(&bundle, a.degree, &height, bits)?;
    let (v, code) = if r.probe_result.is_candidate() { ("CandidateRelation", EXIT_POSITIVE) } else { ("NoRelationFound", EXIT_BOUNDED) };
    Ok((v.into(), code, to_value(&r)))
}

fn identity(a: &IdentityArgs) -> CmdResult {
    let l = read_system(&a.system)?;
    let series = read_series_of(&l)?;
    let order = a.order.unwrap_or_else(|| series.iter().map(|f| f.order()).min().unwrap_or(0));
    let r = verify_functional_identity(&l.system, &series, order)?;
    let (v, code) = if r.vanishes { ("Vanishes", EXIT_POSITIVE) } else { ("ResidualNonzero", EXIT_NEGATIVE) };
    Ok((v.into(), code, to_value(&r)))
}

/// Pretty JSON followed by a newline.
pub fn render(o: &Outcome) -> String {
    let mut s = serde_json::to_string_pretty(&o.report).expect("json");
    s.push('\n');
    s
}

pub fn output_path<I, S>(args: I) -> Option<PathBuf>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).ok().and_then(|c| c.output)
}

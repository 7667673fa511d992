//! Command-line front end: argument parsing, dispatch and output formats.

mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arrangement::{default_vars, ArrangementInput, Multiarrangement};
use crate::charpoly::{
    hilbert_numerator, local_data, local_global_from, psi, psi_flat_identity_from, CharPoly, Policy, PsiPolynomial,
};
use crate::derivations::{graded_dimension, rank2_exponents, ziegler_check, DerivationEntry, PDerivation};
use crate::error::Error;
use crate::freeness::{certify_nonfree, check_factorization, gmp, lmp, FreenessVerdict};
use crate::kernel::{BiPoly, MultiPoly, Scalar};
use crate::lattice::build_lattice;

pub use suite::{published_examples, SuiteRow};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Flats by rank with Moebius values mu(V, X)
    Lattice,
    /// Graded dimensions of D^p, or the stabilized Hilbert numerator
    Hilbert {
        #[arg(long = "p", default_value_t = 1)]
        p: usize,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Exponents and a basis of a multiarrangement in at most two variables
    Exponents,
    /// Characteristic and Poincare polynomials
    Chi,
    /// The polynomial psi(t, q) as a coefficient grid
    Psi,
    /// Local mixed product LMP(k)
    Lmp {
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Global mixed products of an exponent tuple
    Gmp {
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<i64>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Non-freeness certificate
    CheckFree,
    /// Saito's criterion and the factorization of chi for a supplied basis
    VerifyBasis { file: PathBuf },
    /// Identity checks over the intersection lattice
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Every published example with a pass/fail table
    #[command(name = "paper-suite")]
    PublishedExamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum VerifyCheck {
    /// Local-global formula for every (X, p) and the psi identity at every flat
    LocalGlobal,
}

#[derive(Clone, Debug, PartialEq, Eq, Parser)]
#[command(name = "multiarr", version, about = "Exact derivation-module invariants of hyperplane multiarrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Defining polynomial, e.g. "x^3y^3(x-y)(x+y)"
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Comma-separated variable names
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// JSON arrangement file
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    max_horizon: Option<u32>,
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Worker threads (default: MULTIARR_THREADS, else all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

/// Where the arrangement comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    None,
    Poly { poly: String, vars: Option<Vec<String>> },
    File(PathBuf),
}

/// A complete description of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub source: Source,
    pub policy: Policy,
    pub format: Format,
    pub threads: Option<usize>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec { command, source: Source::None, policy: Policy::default(), format: Format::Text, threads: None }
    }

    pub fn poly(mut self, poly: &str, vars: &[&str]) -> Self {
        self.source = Source::Poly { poly: poly.into(), vars: Some(vars.iter().map(|v| v.to_string()).collect()) };
        self
    }

    pub fn json(mut self) -> Self {
        self.format = Format::Json;
        self
    }

    pub fn threads(mut self, n: usize) -> Self {
        self.threads = Some(n);
        self
    }

    /// Parses command-line arguments (including the program name).
    pub fn from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let source = match (cli.poly, cli.input) {
            (Some(_), Some(_)) => {
                return Err(clap::Error::raw(
                    clap::error::ErrorKind::ArgumentConflict,
                    "pass either --poly or --input, not both\n",
                ))
            }
            (Some(poly), None) => Source::Poly { poly, vars: cli.vars },
            (None, Some(path)) => Source::File(path),
            (None, None) => Source::None,
        };
        Ok(JobSpec {
            command: cli.command,
            source,
            policy: Policy { window: cli.window, max_horizon: cli.max_horizon },
            format: cli.format,
            threads: cli.threads,
        })
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::Lattice => "lattice",
            Command::Hilbert { .. } => "hilbert",
            Command::Exponents => "exponents",
            Command::Chi => "chi",
            Command::Psi => "psi",
            Command::Lmp { .. } => "lmp",
            Command::Gmp { .. } => "gmp",
            Command::CheckFree => "check-free",
            Command::VerifyBasis { .. } => "verify-basis",
            Command::Verify { check: VerifyCheck::LocalGlobal } => "verify local-global",
            Command::PublishedExamples => "paper-suite",
        }
    }
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    result: Value,
    witness: Value,
    text: String,
    code: i32,
}

impl Report {
    fn new(result: Value, witness: Value, text: String) -> Self {
        Report { result, witness, text, code: 0 }
    }
}

/// Runs a job inside a pool of the requested size.
pub fn run(job: &JobSpec) -> Outcome {
    let threads =
        job.threads.or_else(|| std::env::var("MULTIARR_THREADS").ok().and_then(|s| s.parse().ok())).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| run_in_pool(job)),
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}\n", e) },
    }
}

/// Parses `args` and runs the job; the entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match JobSpec::from_args(args) {
        Ok(job) => run(&job),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

fn run_in_pool(job: &JobSpec) -> Outcome {
    let (input, report) = match load_input(job) {
        Ok(input) => {
            let report = dispatch(job, &input);
            (input.echo, report)
        }
        Err(e) => (Value::Null, Err(e)),
    };
    match (report, job.format) {
        (Ok(r), Format::Text) => Outcome { code: r.code, stdout: r.text, stderr: String::new() },
        (Ok(r), Format::Json) => {
            let v = json!({ "command": job.name(), "input": input, "result": r.result, "witness": r.witness });
            Outcome { code: r.code, stdout: pretty(&v), stderr: String::new() }
        }
        (Err(e), Format::Text) => {
            Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {}\n", e) }
        }
        (Err(e), Format::Json) => {
            let v = json!({
                "command": job.name(),
                "input": input,
                "result": Value::Null,
                "witness": Value::Null,
                "error": e.to_string(),
            });
            Outcome { code: e.exit_code(), stdout: pretty(&v), stderr: String::new() }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

struct Input {
    arrangement: Option<(Multiarrangement, Vec<String>)>,
    echo: Value,
}

/// Variables used by `poly` when they are a prefix-closed subset of `x, y, z, w`.
fn infer_vars(poly: &str) -> Result<Vec<String>, Error> {
    let mut dim = 0;
    for (pos, ch) in poly.char_indices() {
        if ch.is_alphabetic() {
            match "xyzw".find(ch) {
                Some(i) => dim = dim.max(i + 1),
                None => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("cannot infer variables from `{}`; pass --vars", ch),
                    });
                }
            }
        }
    }
    if dim == 0 {
        return Err(Error::Invalid("no variables in the polynomial; pass --vars".into()));
    }
    Ok(default_vars(dim))
}

fn load_input(job: &JobSpec) -> Result<Input, Error> {
    let needs_arrangement =
        !matches!(job.command, Command::Gmp { .. } | Command::PublishedExamples | Command::VerifyBasis { .. });
    let parsed = match &job.source {
        Source::None => None,
        Source::Poly { poly, vars } => {
            let vars = match vars {
                Some(v) => v.clone(),
                None => infer_vars(poly)?,
            };
            let a = Multiarrangement::parse(poly, &vars)?;
            Some((a, vars.clone(), json!({ "poly": poly, "vars": vars })))
        }
        Source::File(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {}", path.display(), e)))?;
            let input = ArrangementInput::from_json(&text)?;
            let a = input.build()?;
            let vars = input.vars()?;
            Some((a, vars, serde_json::to_value(&input).expect("input serializes")))
        }
    };
    match (parsed, &job.command) {
        (None, Command::Gmp { exponents, .. }) => {
            Ok(Input { arrangement: None, echo: json!({ "exponents": exponents }) })
        }
        (None, Command::VerifyBasis { file }) => Ok(Input { arrangement: None, echo: json!({ "file": file }) }),
        (None, _) if needs_arrangement => {
            Err(Error::Invalid("an arrangement is required: pass --poly or --input".into()))
        }
        (None, _) => Ok(Input { arrangement: None, echo: Value::Null }),
        (Some((a, vars, echo)), _) => Ok(Input { arrangement: Some((a, vars)), echo }),
    }
}

fn dispatch(job: &JobSpec, input: &Input) -> Result<Report, Error> {
    let arrangement = || input.arrangement.as_ref().map(|(a, v)| (a, v.as_slice())).expect("checked in load_input");
    match &job.command {
        Command::Lattice => {
            let (a, vars) = arrangement();
            lattice_report(a, vars)
        }
        Command::Hilbert { p, max_degree } => hilbert_report(arrangement().0, *p, *max_degree, job.policy),
        Command::Exponents => {
            let (a, vars) = arrangement();
            exponents_report(a, vars)
        }
        Command::Chi => chi_report(arrangement().0, job.policy),
        Command::Psi => psi_report(arrangement().0, job.policy),
        Command::Lmp { rank } => lmp_report(arrangement().0, *rank),
        Command::Gmp { exponents, rank } => gmp_report(exponents, *rank),
        Command::CheckFree => {
            let v = certify_nonfree(arrangement().0, job.policy)?;
            Ok(verdict_report(&v))
        }
        Command::VerifyBasis { file } => verify_basis_report(file, input.arrangement.as_ref(), job.policy),
        Command::Verify { check: VerifyCheck::LocalGlobal } => local_global_report(arrangement().0, job.policy),
        Command::PublishedExamples => {
            let rows = published_examples();
            let passed = rows.iter().filter(|r| r.pass).count();
            let mut text = String::new();
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                text += &format!(
                    "{:<w$}  {}  expected {}, got {}\n",
                    r.name,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.expected,
                    r.got,
                    w = width
                );
            }
            text += &format!("{}/{} passed\n", passed, rows.len());
            let mut report =
                Report::new(json!({ "rows": rows, "passed": passed, "total": rows.len() }), Value::Null, text);
            if passed < rows.len() {
                report.code = 1;
            }
            Ok(report)
        }
    }
}

fn scalar_json(c: &Scalar) -> Value {
    match c.is_integer().then(|| c.to_integer().to_i64()).flatten() {
        Some(n) => json!(n),
        None => json!(c.to_string()),
    }
}

fn form_strings(a: &Multiarrangement, vars: &[String]) -> Vec<String> {
    a.hyperplanes().iter().map(|(f, _)| f.display_with(vars)).collect()
}

fn lattice_report(a: &Multiarrangement, vars: &[String]) -> Result<Report, Error> {
    let l = build_lattice(a);
    let bottom = l.rank_indices(0)[0];
    let forms = form_strings(a, vars);
    let mut text = String::from("hyperplanes:\n");
    let mut hs = Vec::new();
    for (i, ((_, m), f)) in a.hyperplanes().iter().zip(&forms).enumerate() {
        text += &format!("  H{}: {} (m = {})\n", i, f, m);
        hs.push(json!({ "index": i, "form": f, "mult": m }));
    }
    let mut flats = Vec::new();
    for k in 0..=a.dim() {
        let idx = l.rank_indices(k);
        if idx.is_empty() {
            continue;
        }
        text += &format!("rank {}: {} flat(s)\n", k, idx.len());
        for x in idx {
            let f = l.flat(x);
            let mu = l.mobius(bottom, x)?;
            let names: Vec<String> = f.hyperplanes.iter().map(|h| format!("H{}", h)).collect();
            text += &format!("  {{{}}}  mu = {}\n", names.join(", "), mu);
            flats.push(json!({ "hyperplanes": f.hyperplanes, "rank": f.rank, "mobius": mu }));
        }
    }
    let counts: Vec<usize> = (0..=a.dim()).map(|k| l.rank_count(k)).collect();
    Ok(Report::new(json!({ "hyperplanes": hs, "flats": flats, "rank_counts": counts }), Value::Null, text))
}

fn hilbert_report(a: &Multiarrangement, p: usize, max_degree: Option<u32>, policy: Policy) -> Result<Report, Error> {
    match max_degree {
        Some(top) => {
            let dims = (0..=top).map(|d| graded_dimension(a, p, d)).collect::<Result<Vec<_>, _>>()?;
            let mut text = format!("dim D^{}_d\n", p);
            for (d, k) in dims.iter().enumerate() {
                text += &format!("{:>4}  {}\n", d, k);
            }
            Ok(Report::new(json!({ "p": p, "dims": dims }), Value::Null, text))
        }
        None => {
            let s = hilbert_numerator(a, p, policy)?;
            let num = s.numerator_poly().display_var("q").to_string();
            let text = format!(
                "H(D^{}, q) = ({}) / (1 - q)^{}\nstabilized with window {} by degree {}\ndims: {:?}\n",
                p, num, s.ell, s.window, s.horizon, s.dims
            );
            let result = json!({ "p": p, "numerator": num, "numerator_coeffs": s.numerator, "ell": s.ell });
            let witness = json!({ "dims": s.dims, "window": s.window, "horizon": s.horizon });
            Ok(Report::new(result, witness, text))
        }
    }
}

fn basis_json(basis: &[PDerivation], vars: &[String]) -> Value {
    json!(basis.iter().map(|t| t.entries(vars)).collect::<Vec<_>>())
}

fn exponents_report(a: &Multiarrangement, vars: &[String]) -> Result<Report, Error> {
    let (exps, basis): (Vec<u32>, Vec<PDerivation>) = match a.dim() {
        1 => {
            let m = a.total_multiplicity();
            (vec![m], vec![PDerivation::coordinate(MultiPoly::var(1, 0).pow(m), 0)])
        }
        2 => {
            let e = rank2_exponents(a)?;
            (vec![e.d1, e.d2], e.basis.to_vec())
        }
        n => return Err(Error::Invalid(format!("exponents needs at most two variables, got {}", n))),
    };
    let c = ziegler_check(a, &basis)?;
    let mut text = format!("exponents: ({})\n", exps.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
    for (i, t) in basis.iter().enumerate() {
        text += &format!("theta{} = {}\n", i + 1, t.display_with(vars));
    }
    text += &format!("det = {} * Q\n", c);
    let result = json!({ "exponents": exps, "saito_scalar": scalar_json(&c) });
    Ok(Report::new(result, json!({ "basis": basis_json(&basis, vars) }), text))
}

fn psi_witness(p: &PsiPolynomial) -> Value {
    let stabilization: Vec<Value> =
        p.series.iter().map(|s| json!({ "p": s.p, "window": s.window, "horizon": s.horizon })).collect();
    json!({ "numerators": p.numerators, "stabilization": stabilization, "widened_retries": p.retries })
}

fn widened_note(p: &PsiPolynomial) -> String {
    match p.retries {
        0 => String::new(),
        n => format!("note: the stabilization policy was widened {} time(s) beyond the defaults\n", n),
    }
}

fn chi_report(a: &Multiarrangement, policy: Policy) -> Result<Report, Error> {
    let p = psi(a, policy)?;
    let cp = CharPoly::from_psi(&p.poly, a.dim())?;
    let text = format!("chi = {}\npi = {}\nC = {:?}\n{}", cp.chi, cp.pi, cp.c, widened_note(&p));
    let result = json!({ "chi": cp.chi.to_string(), "pi": cp.pi.to_string(), "C": cp.c });
    Ok(Report::new(result, psi_witness(&p), text))
}

fn grid(psi: &BiPoly) -> Vec<Vec<Value>> {
    let (tn, qn) = (psi.t_degree().map_or(0, |d| d + 1), psi.q_degree().map_or(0, |d| d + 1));
    (0..tn).map(|i| (0..qn).map(|j| scalar_json(&psi.coeff(i, j))).collect()).collect()
}

fn psi_report(a: &Multiarrangement, policy: Policy) -> Result<Report, Error> {
    let p = psi(a, policy)?;
    let g = grid(&p.poly);
    let cells: Vec<Vec<String>> =
        g.iter().map(|row| row.iter().map(|v| v.to_string().trim_matches('"').to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.len()).chain(std::iter::once(4)).max().unwrap_or(4);
    let mut text = format!("psi = {}\n", p.poly);
    if let Some(row) = cells.first() {
        text += &format!("{:>5}", "");
        for j in 0..row.len() {
            text += &format!(" {:>w$}", format!("q^{}", j), w = width);
        }
        text.push('\n');
    }
    for (i, row) in cells.iter().enumerate() {
        text += &format!("{:>5}", format!("t^{}", i));
        for c in row {
            text += &format!(" {:>w$}", c, w = width);
        }
        text.push('\n');
    }
    text += &widened_note(&p);
    let result = json!({ "psi": p.poly.to_string(), "grid": g });
    Ok(Report::new(result, psi_witness(&p), text))
}

fn lmp_report(a: &Multiarrangement, k: usize) -> Result<Report, Error> {
    let r = lmp(a, k, None)?;
    let mut text = format!("LMP({}) = {}\n", r.k, r.value);
    for f in &r.flats {
        text += &format!("  {:?}: exponents {:?}, product {} ({})\n", f.flat, f.exponents, f.product, f.evidence);
    }
    Ok(Report::new(json!({ "k": r.k, "value": r.value }), json!({ "flats": r.flats }), text))
}

fn gmp_report(exponents: &[i64], rank: Option<usize>) -> Result<Report, Error> {
    let ks: Vec<usize> = match rank {
        Some(k) => vec![k],
        None => (1..=exponents.len()).collect(),
    };
    let values = ks.iter().map(|&k| gmp(exponents, k).map(|v| (k, v))).collect::<Result<Vec<_>, _>>()?;
    let text: String = values.iter().map(|(k, v)| format!("GMP({}) = {}\n", k, v)).collect();
    let result = json!({
        "exponents": exponents,
        "values": values.iter().map(|(k, v)| json!({ "k": k, "value": v })).collect::<Vec<_>>(),
    });
    Ok(Report::new(result, Value::Null, text))
}

fn verdict_report(v: &FreenessVerdict) -> Report {
    let witness = match v {
        FreenessVerdict::NotFree { witness } => serde_json::to_value(witness).expect("witness serializes"),
        _ => Value::Null,
    };
    let result = serde_json::to_value(v).expect("verdict serializes");
    Report::new(result, witness, format!("{}\n", v))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BasisFile {
    Bare(Vec<Vec<DerivationEntry>>),
    WithArrangement { arrangement: ArrangementInput, basis: Vec<Vec<DerivationEntry>> },
}

fn verify_basis_report(
    file: &PathBuf,
    given: Option<&(Multiarrangement, Vec<String>)>,
    policy: Policy,
) -> Result<Report, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Invalid(format!("{}: {}", file.display(), e)))?;
    let parsed: BasisFile = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("basis JSON: {}", e)))?;
    let (a, vars, entries) = match (parsed, given) {
        (BasisFile::WithArrangement { arrangement, basis }, _) => (arrangement.build()?, arrangement.vars()?, basis),
        (BasisFile::Bare(basis), Some((a, vars))) => (a.clone(), vars.clone(), basis),
        (BasisFile::Bare(_), None) => {
            return Err(Error::Invalid("the basis file has no arrangement: pass --poly or --input".into()))
        }
    };
    let basis = entries.iter().map(|e| PDerivation::from_entries(e, &vars)).collect::<Result<Vec<_>, _>>()?;
    if basis.iter().any(|t| t.dim() != a.dim()) {
        return Err(Error::Invalid("derivations and arrangement live in different dimensions".into()));
    }
    Ok(verdict_report(&check_factorization(&a, &basis, policy)?))
}

fn local_global_report(a: &Multiarrangement, policy: Policy) -> Result<Report, Error> {
    let data = local_data(a, policy)?;
    let lg = local_global_from(&data);
    let ids: Vec<_> = (0..data.lattice.len()).map(|x| psi_flat_identity_from(&data, x)).collect();
    let ids_pass = ids.iter().all(|f| f.pass);
    let mut text = String::from("local-global C_p(X) = sum of C_p(Y) over Y <= X of rank p\n");
    for e in &lg.entries {
        text += &format!(
            "  {:?} rank {} p = {}: {} vs {}  {}\n",
            e.flat,
            e.rank,
            e.p,
            e.local,
            e.sum,
            if e.pass { "ok" } else { "FAIL" }
        );
    }
    text += "psi identity at each flat\n";
    for f in &ids {
        text += &format!("  {:?}: {} vs {}  {}\n", f.flat, f.lhs, f.rhs, if f.pass { "ok" } else { "FAIL" });
    }
    let all = lg.all_pass && ids_pass;
    text += &format!("{}\n", if all { "all checks pass" } else { "some checks FAIL" });
    let result = json!({
        "all_pass": all,
        "local_global_pass": lg.all_pass,
        "flat_identity_pass": ids_pass,
        "checks": lg.entries.len() + ids.len(),
    });
    let witness = json!({
        "local_global": lg.entries,
        "flat_identities": ids.iter().map(|f| json!({
            "flat": f.flat, "lhs": f.lhs.to_string(), "rhs": f.rhs.to_string(), "pass": f.pass,
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new(result, witness, text))
}

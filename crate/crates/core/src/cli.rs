//! Batch command-line front end.
//!
//! Every subcommand writes one file (or stdout). CSV files open with `#`
//! comment lines holding the command and its resolved configuration as JSON;
//! JSON files carry the same object under `"config"`. Floats in CSV use 17
//! significant digits, so identical configurations give byte-identical files.
//!
//! Polynomial lists are `;`-separated. Each polynomial is a `+`-joined list
//! of monomials `c*x^k`, `c*x`, `x^k`, `x` or `c`, with coefficients written
//! as their digits `0..q−1`, e.g. `x;x+1` or `1+2*x^2`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or input error,
//! 3 budget exceeded.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::field::FieldSpec;
use crate::genmat::{row_length, scrambled, scrambler_matrix, tse_check, Construction, SeqDef};
use crate::numtheory::digit_count;
use crate::paircorr::{ppc_convergence, ppc_curve, CountMode, ExactCloud, FloatCloud, PpcCurve, TorusCloud};
use crate::poly::parse_poly_list;
use crate::sequences::{truncate_point, DigitalSeq, SeqSource};
use crate::witness::{
    digital_witness_params, digital_witness_verify, halton_k_search, halton_witness_params, halton_witness_verify,
    near_integer_search, DEFAULT_DIGITAL_BUDGET, DEFAULT_HALTON_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qmc-ppc", version, about = "Digital and Halton sequences, pair correlations and witnesses")]
struct Cli {
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Write the first N points as CSV.
    Generate(GenerateArgs),
    /// F_N(s) on an s-grid as CSV.
    Paircorr(PaircorrArgs),
    /// F_N(s) for several N as CSV.
    Converge(ConvergeArgs),
    /// Rank check of the (t, e, d) property and row lengths, as JSON.
    CheckTse(CheckTseArgs),
    /// Generating matrices as JSON.
    Matrices(MatricesArgs),
    /// Digital-sequence witness report as JSON.
    WitnessDigital(WitnessDigitalArgs),
    /// Halton witness report as JSON.
    WitnessHalton(WitnessHaltonArgs),
    /// Exponent-vector search for Halton witnesses, as JSON.
    SearchK(SearchKArgs),
    /// Multiples n with every n·α_j near an integer, as JSON.
    SearchNearInteger(SearchNearArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Niederreiter,
    Cbc,
}

impl From<Method> for Construction {
    fn from(m: Method) -> Self {
        match m {
            Method::Niederreiter => Construction::Niederreiter,
            Method::Cbc => Construction::ColumnByColumn,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct DigitalArgs {
    /// Field order q (a prime power).
    #[arg(long)]
    q: u64,
    /// Polynomials q_1;…;q_d.
    #[arg(long)]
    polys: String,
    #[arg(long, value_enum, default_value = "niederreiter")]
    method: Method,
}

impl DigitalArgs {
    fn def(&self) -> Result<SeqDef, CliError> {
        let field = FieldSpec::of_order(self.q)?;
        let polys = parse_poly_list(&field, &self.polys)?;
        Ok(SeqDef::new(&field, polys, self.method.into())?)
    }
}

#[derive(Debug, Args, Serialize)]
struct SourceArgs {
    /// Digital sequence over F_q (needs --polys).
    #[arg(long, requires = "polys")]
    q: Option<u64>,
    #[arg(long, requires = "q")]
    polys: Option<String>,
    #[arg(long, value_enum, default_value = "niederreiter")]
    method: Method,
    /// Multiply the generating matrices by the scrambler S.
    #[arg(long)]
    scrambled: bool,
    /// Halton sequence in the given comma-separated bases.
    #[arg(long, value_delimiter = ',')]
    halton: Option<Vec<u32>>,
    /// Van der Corput sequence (base from --base).
    #[arg(long)]
    vdc: bool,
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Kronecker sequence ({n α_1}, …) for comma-separated α.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kronecker: Option<Vec<f64>>,
    /// I.i.d. uniform points in this dimension (needs --seed).
    #[arg(long, requires = "seed")]
    random: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl SourceArgs {
    /// The source able to supply `count` points.
    fn source(&self, count: usize) -> Result<SeqSource, CliError> {
        let chosen = [self.q.is_some(), self.halton.is_some(), self.vdc, self.kronecker.is_some(), self.random.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if chosen != 1 {
            return Err(CliError::Usage(
                "choose exactly one of --q/--polys, --halton, --vdc, --kronecker, --random".into(),
            ));
        }
        if let (Some(q), Some(polys)) = (self.q, &self.polys) {
            let def = DigitalArgs { q, polys: polys.clone(), method: self.method }.def()?;
            let size = digit_count(count.saturating_sub(1) as u128, def.field().q()).max(1);
            let mut mats = def.matrices(size)?;
            if self.scrambled {
                mats = scrambled(&mats, &scrambler_matrix(&def, size))?;
            }
            return Ok(SeqSource::Digital { seq: DigitalSeq::new(mats)? });
        }
        if self.scrambled {
            return Err(CliError::Usage("--scrambled applies to digital sequences only".into()));
        }
        if let Some(bases) = &self.halton {
            return Ok(SeqSource::halton(bases.clone())?);
        }
        if self.vdc {
            return Ok(SeqSource::van_der_corput(self.base)?);
        }
        if let Some(alpha) = &self.kronecker {
            return Ok(SeqSource::Kronecker { alpha: alpha.clone() });
        }
        let dim = self.random.expect("one source chosen");
        let seed = self.seed.ok_or_else(|| CliError::Usage("--random needs --seed".into()))?;
        if dim == 0 {
            return Err(CliError::Usage("--random needs a positive dimension".into()));
        }
        Ok(SeqSource::Random { dim, seed })
    }
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Truncate every coordinate to this many digits.
    #[arg(long)]
    prec: Option<usize>,
    /// Write doubles instead of exact fractions.
    #[arg(long)]
    float: bool,
}

#[derive(Debug, Args, Serialize)]
struct PaircorrArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    n: usize,
    /// s values: `lo:step:hi` or a comma-separated list.
    #[arg(long)]
    s: String,
    /// Use the O(N²) reference counter.
    #[arg(long)]
    naive: bool,
}

#[derive(Debug, Args, Serialize)]
struct ConvergeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Increasing comma-separated N values.
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long)]
    s: String,
    #[arg(long)]
    naive: bool,
}

#[derive(Debug, Args, Serialize)]
struct CheckTseArgs {
    #[command(flatten)]
    digital: DigitalArgs,
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long = "m-max", default_value_t = 10)]
    m_max: usize,
    /// Check C·S instead of C.
    #[arg(long)]
    scrambled: bool,
    /// Also report row lengths L_f for f = 1..=F.
    #[arg(long = "row-lengths", default_value_t = 0)]
    row_lengths: usize,
}

#[derive(Debug, Args, Serialize)]
struct MatricesArgs {
    #[command(flatten)]
    digital: DigitalArgs,
    /// Slice size.
    #[arg(long, default_value_t = 8)]
    size: usize,
    #[arg(long)]
    scrambled: bool,
}

#[derive(Debug, Args, Serialize)]
struct WitnessDigitalArgs {
    #[command(flatten)]
    digital: DigitalArgs,
    /// A power of the characteristic.
    #[arg(long)]
    u: u64,
    /// Default: midpoint of the admissible range.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DIGITAL_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args, Serialize)]
struct WitnessHaltonArgs {
    #[arg(long, value_delimiter = ',')]
    bases: Vec<u32>,
    #[arg(long)]
    u: u32,
    /// Exponent vector k_1,…,k_d.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_HALTON_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args, Serialize)]
struct SearchKArgs {
    #[arg(long, value_delimiter = ',')]
    bases: Vec<u32>,
    #[arg(long)]
    u: u32,
    #[arg(long = "k1-max")]
    k1_max: u64,
}

#[derive(Debug, Args, Serialize)]
struct SearchNearArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alphas: Vec<f64>,
    #[arg(long)]
    eps: f64,
    #[arg(long = "n-max")]
    n_max: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(String),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Parses `lo:step:hi` (inclusive, decimal-exact steps) or `a,b,c`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let bad = || format!("invalid grid `{text}`");
    match parts.len() {
        1 => text
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect(),
        3 => {
            let places = parts.iter().map(|p| p.split_once('.').map_or(0, |(_, f)| f.len())).max().unwrap_or(0);
            if places > 15 {
                return Err(bad());
            }
            let scale = 10f64.powi(places as i32);
            let scaled: Vec<i64> = parts
                .iter()
                .map(|p| p.parse::<f64>().map(|x| (x * scale).round() as i64).map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            let (lo, step, hi) = (scaled[0], scaled[1], scaled[2]);
            if step <= 0 || hi < lo {
                return Err(bad());
            }
            Ok((0..=(hi - lo) / step).map(|i| (lo + i * step) as f64 / scale).collect())
        }
        _ => Err(bad()),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Output {
    inner: Box<dyn Write>,
}

impl Output {
    fn open(path: &Option<PathBuf>) -> Result<Output, CliError> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Output { inner })
    }

    fn csv_header(&mut self, command: &str, config: &Value) -> Result<(), CliError> {
        writeln!(self.inner, "# qmc-ppc {command}")?;
        writeln!(self.inner, "# config: {}", serde_json::to_string(config)?)?;
        Ok(())
    }

    fn json(&mut self, value: &Value) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut self.inner, value)?;
        writeln!(self.inner)?;
        Ok(())
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.inner, "{text}")?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush()?;
        Ok(())
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Generate(_) => "generate",
        Command::Paircorr(_) => "paircorr",
        Command::Converge(_) => "converge",
        Command::CheckTse(_) => "check-tse",
        Command::Matrices(_) => "matrices",
        Command::WitnessDigital(_) => "witness-digital",
        Command::WitnessHalton(_) => "witness-halton",
        Command::SearchK(_) => "search-k",
        Command::SearchNearInteger(_) => "search-near-integer",
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: {msg}");
            EXIT_BUDGET
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let name = command_name(&cli.command);
    let config = json!({ "command": name, "args": serde_json::to_value(&cli.command)? });
    let mut out = Output::open(&cli.out)?;
    let code = match &cli.command {
        Command::Generate(a) => generate(a, &config, &mut out)?,
        Command::Paircorr(a) => paircorr(a, &config, &mut out)?,
        Command::Converge(a) => converge(a, &config, &mut out)?,
        Command::CheckTse(a) => check_tse(a, &config, &mut out)?,
        Command::Matrices(a) => matrices(a, &config, &mut out)?,
        Command::WitnessDigital(a) => witness_digital(a, &config, &mut out)?,
        Command::WitnessHalton(a) => witness_halton(a, &config, &mut out)?,
        Command::SearchK(a) => {
            let res = halton_k_search(&a.bases, a.u, a.k1_max)?;
            out.json(&json!({ "config": config, "result": res }))?;
            EXIT_OK
        }
        Command::SearchNearInteger(a) => {
            let hits = near_integer_search(&a.alphas, a.eps, a.n_max)?;
            out.json(&json!({ "config": config, "hits": hits }))?;
            EXIT_OK
        }
    };
    out.finish()?;
    Ok(code)
}

fn generate(a: &GenerateArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let src = a.source.source(a.n)?;
    out.csv_header("generate", config)?;
    let header: Vec<String> = std::iter::once("n".to_string())
        .chain((1..=src.dim()).map(|j| format!("x{j}")))
        .collect();
    out.line(&header.join(","))?;
    if src.is_exact() {
        for (n, p) in src.exact_points(a.n)?.iter().enumerate() {
            let p = match a.prec {
                Some(m) => truncate_point(p, m)?,
                None => p.clone(),
            };
            let cells: Vec<String> = if a.float {
                p.to_f64().into_iter().map(fmt_f64).collect()
            } else {
                p.coords()
                    .iter()
                    .map(|c| Ok(format!("{}/{}^{}", c.numerator()?, c.base(), c.precision())))
                    .collect::<Result<_, Error>>()?
            };
            out.line(&format!("{n},{}", cells.join(",")))?;
        }
    } else {
        if a.prec.is_some() {
            return Err(CliError::Usage("--prec needs an exact source".into()));
        }
        let d = src.dim();
        for (n, p) in src.float_points(a.n)?.chunks(d).enumerate() {
            let cells: Vec<String> = p.iter().copied().map(fmt_f64).collect();
            out.line(&format!("{n},{}", cells.join(",")))?;
        }
    }
    Ok(EXIT_OK)
}

fn mode(naive: bool) -> CountMode {
    if naive {
        CountMode::Naive
    } else {
        CountMode::Grid
    }
}

/// Exact counting when the source is exact and every radius is a
/// representable rational; double-precision counting otherwise.
fn curve_for(src: &SeqSource, n: usize, s_grid: &[f64], naive: bool) -> Result<PpcCurve, CliError> {
    if src.is_exact() {
        let cloud = ExactCloud::new(&src.exact_points(n)?)?;
        if s_grid.iter().all(|&s| cloud.radius_at(s).is_ok()) {
            return Ok(ppc_curve(&cloud, s_grid, mode(naive))?);
        }
        return Ok(ppc_curve(&cloud.to_float(), s_grid, mode(naive))?);
    }
    let cloud = FloatCloud::new(src.dim(), src.float_points(n)?)?;
    Ok(ppc_curve(&cloud, s_grid, mode(naive))?)
}

fn paircorr(a: &PaircorrArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let s_grid = parse_grid(&a.s).map_err(CliError::Usage)?;
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let src = a.source.source(a.n)?;
    let curve = curve_for(&src, a.n, &s_grid, a.naive)?;
    out.csv_header("paircorr", config)?;
    out.line("N,s,count,F,target")?;
    for e in &curve.entries {
        out.line(&format!("{},{},{},{},{}", curve.n, fmt_f64(e.s), e.count, fmt_f64(e.f), fmt_f64(e.target)))?;
    }
    Ok(EXIT_OK)
}

fn converge(a: &ConvergeArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let s_grid = parse_grid(&a.s).map_err(CliError::Usage)?;
    let max_n = *a.n_list.last().ok_or_else(|| CliError::Usage("--n-list is empty".into()))?;
    let src = a.source.source(max_n)?;
    let rows = ppc_convergence(&src, &a.n_list, &s_grid, mode(a.naive))?;
    out.csv_header("converge", config)?;
    out.line("N,s,count,F,target,abs_err")?;
    for r in rows {
        out.line(&format!(
            "{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.s),
            r.count,
            fmt_f64(r.f),
            fmt_f64(r.target),
            fmt_f64(r.abs_err)
        ))?;
    }
    Ok(EXIT_OK)
}

fn check_tse(a: &CheckTseArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let def = a.digital.def()?;
    let size = a.m_max.max(2 * def.dim() * a.row_lengths + 2).max(1);
    let mut mats = def.matrices(size)?;
    if a.scrambled {
        mats = scrambled(&mats, &scrambler_matrix(&def, size))?;
    }
    let cert = tse_check(&mats, def.degrees(), a.t, a.m_max)?;
    let mut lengths = Vec::new();
    for f in 1..=a.row_lengths {
        let value = match row_length(&mats, f) {
            Ok(len) => json!(len),
            Err(Error::Inconclusive(_)) => json!("inconclusive"),
            Err(e) => return Err(e.into()),
        };
        lengths.push(json!({ "f": f, "L_f": value }));
    }
    out.json(&json!({
        "config": config,
        "passed": cert.is_none(),
        "certificate": cert,
        "row_lengths": lengths,
    }))?;
    Ok(if cert.is_none() { EXIT_OK } else { EXIT_FAILED })
}

fn matrices(a: &MatricesArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    if a.size == 0 {
        return Err(CliError::Usage("--size must be positive".into()));
    }
    let def = a.digital.def()?;
    let mut mats = def.matrices(a.size)?;
    let scrambler = scrambler_matrix(&def, a.size);
    if a.scrambled {
        mats = scrambled(&mats, &scrambler)?;
    }
    let records: Vec<_> = mats.iter().map(|m| m.to_record()).collect();
    out.json(&json!({
        "config": config,
        "matrices": records,
        "scrambler": scrambler.to_record(),
    }))?;
    Ok(EXIT_OK)
}

fn witness_digital(a: &WitnessDigitalArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let def = a.digital.def()?;
    let params = digital_witness_params(&def, a.u, a.eps)?;
    if !params.feasible {
        out.json(&json!({ "config": config, "params": params, "verdict": false }))?;
        eprintln!("error: infeasible witness (eps must lie in ({}, {}))", params.eps_min, params.eps_max);
        return Ok(EXIT_FAILED);
    }
    let report = digital_witness_verify(&params, &def, a.budget)?;
    let ok = report.verdict && report.structural_ok;
    let mut value = serde_json::to_value(&report)?;
    value["config"] = config.clone();
    value["params"] = serde_json::to_value(&params)?;
    out.json(&value)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn witness_halton(a: &WitnessHaltonArgs, config: &Value, out: &mut Output) -> Result<i32, CliError> {
    let params = halton_witness_params(&a.bases, a.u, &a.k)?;
    let report = halton_witness_verify(&params, a.budget)?;
    let mut value = serde_json::to_value(&report)?;
    value["config"] = config.clone();
    value["params"] = serde_json::to_value(&params)?;
    out.json(&value)?;
    Ok(if report.structural_ok { EXIT_OK } else { EXIT_FAILED })
}

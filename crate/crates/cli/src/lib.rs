//! Command-line front end for smplab.
//!
//! Every command writes its result to stdout and diagnostics to stderr. Exit
//! status is 0 on success, 1 when the input violates a precondition of the
//! requested operation, and 2 on I/O or parse errors.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use smplab_core::constructions::{counterexample_family, realize_from_tuple, symmetrize, verify_example, Polygon};
use smplab_core::fricke::{evaluate, fricke_poly};
use smplab_core::jsr::{brute_force, certify_with, CertifyOptions, Norm, DEFAULT_MAX_LEN};
use smplab_core::regions::{monte_carlo_regions, RegionCounts};
use smplab_core::reproduce::{run_criterion, RegionRuns, CRITERIA};
use smplab_core::sampling::Distribution;
use smplab_core::sturmian::{lyapunov_irrational, lyapunov_rational, maximize_sturmian};
use smplab_core::words::{christoffel, christoffel_tree, signature};
use smplab_core::{classify, classify_tuple, BinaryWord, FiveTuple, MatrixPair, Rational64, RegionFlags};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Significant digits of every printed float.
pub const SIG_DIGITS: usize = 15;

const MONTECARLO_HELP: &str = "\
CSV columns (one header row, one data row):
  seed, dist        the generator seed and entry distribution
  samples           number of pairs drawn
  cross, mix, neg, copar, anti, complex_s, reducible
                    pairs whose flag for that region is definitely true
  indeterminate     pairs with at least one flag within tol of a boundary
  union4            pairs definitely in cross, mix, neg or copar
  cross_and_mix, cross_and_neg, copar_and_cross
                    pairwise overlaps
  outside           pairs outside the union, irreducible, fully decided
  union_fraction    union4 / samples";

#[derive(Debug, Parser)]
#[command(
    name = "smplab",
    version,
    about = "Spectrum-maximizing products of pairs of real 2x2 matrices"
)]
pub struct Cli {
    /// Worker threads for the parallel searches [default: all cores]
    #[arg(long, global = true, env = "SMPLAB_THREADS")]
    pub threads: Option<usize>,

    /// Output format; csv is available for classify and montecarlo
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct PairInput {
    /// JSON file holding {"A": [[a11,a12],[a21,a22]], "B": ...}, or one
    /// such object per line; "-" reads stdin
    #[arg(long)]
    pub pair: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region membership flags and margins
    Classify {
        /// JSON pair file (or NDJSON batch)
        #[arg(long, conflicts_with = "tuple", required_unless_present = "tuple")]
        pair: Option<PathBuf>,
        /// Inline five-tuple tr A, tr B, tr AB, det A, det B
        #[arg(long, allow_hyphen_values = true)]
        tuple: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Brute-force JSR bounds over words up to a length
    Jsr {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        /// "euclid", or "polygon:FILE" with FILE a JSON list of half-polygon vertices
        #[arg(long, default_value = "euclid")]
        norm: String,
    },
    /// SMP candidate, certified where a region theorem applies
    Smp {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// Maximize the Lyapunov exponent over Sturmian slopes (co-parallel pairs)
    Sturmian {
        #[command(flatten)]
        input: PairInput,
        /// Stern-Brocot resolution as 1/N
        #[arg(long, default_value = "1/1024")]
        resolution: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Lyapunov exponent of the Sturmian measure of one slope
    Lyap {
        #[command(flatten)]
        input: PairInput,
        /// Slope as p/q (exact) or a decimal (continued-fraction estimate)
        #[arg(long)]
        gamma: String,
        /// Convergents used for a decimal slope
        #[arg(long, default_value_t = 30)]
        depth: usize,
    },
    /// Trace polynomial of a word in x, y, z, u, v
    Fricke {
        #[arg(long)]
        word: String,
        /// Evaluate at x,y,z,u,v instead of printing the polynomial
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Christoffel word of slope p/q, or the Christoffel tree
    Christoffel {
        #[arg(long, required_unless_present = "depth", requires = "q")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        q: Option<u64>,
        /// List the tree down to this depth instead
        #[arg(long, conflicts_with_all = ["p", "q"])]
        depth: Option<usize>,
    },
    /// Signature m,k,l of a primitive word
    Signature {
        #[arg(long)]
        word: String,
    },
    /// Invariant-polygon family (A_n, B_n) with its polygon
    Example {
        #[arg(long)]
        n: usize,
        /// Also verify norms, SMP and uniqueness by exhaustive search
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// A matrix pair with the given five-tuple
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
    },
    /// Simultaneously conjugate a pair to symmetric matrices
    Symmetrize {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Region counts over random pairs with iid entries
    #[command(after_help = MONTECARLO_HELP)]
    Montecarlo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// normal or uniform01
        #[arg(long, default_value = "normal")]
        dist: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run the acceptance checks and print a pass/fail table
    Reproduce {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the criteria without running them
        #[arg(long)]
        list: bool,
        /// Run only these criteria (comma-separated ids)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// The input is well formed but the operation's precondition fails.
    Precondition(String),
    /// Unreadable file, malformed JSON or number, unsupported format.
    Input(String),
    /// Every step ran but some acceptance criterion failed.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) | CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Precondition(m) | CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<smplab_core::Error> for CliError {
    fn from(e: smplab_core::Error) -> Self {
        use smplab_core::Error as E;
        match e {
            E::Parse(_) | E::InvalidLetter(_) | E::UnknownDistribution(_) => CliError::Input(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Rounds to [`SIG_DIGITS`] significant digits. Reprinting a rounded value
/// gives the same digits, so printed output is a fixed point of parse/print.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Applies [`round_sig`] to every float in a JSON tree.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        serde_json::Number::from_f64(round_sig(x)).map_or_else(|| x.to_string(), |n| n.to_string())
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Input(e.to_string()))?;
    round_json(&mut v);
    Ok(v.to_string())
}

fn read_source(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// Parses one pair document, or newline-delimited pairs.
pub fn parse_pairs(text: &str) -> CliResult<Vec<MatrixPair>> {
    if let Ok(p) = serde_json::from_str::<MatrixPair>(text) {
        return Ok(vec![p]);
    }
    let pairs = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<MatrixPair>(l).map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if pairs.is_empty() {
        return Err(CliError::Input("no matrix pair in input".into()));
    }
    Ok(pairs)
}

fn load_pairs(path: &Path) -> CliResult<Vec<MatrixPair>> {
    let pairs = parse_pairs(&read_source(path)?)?;
    if pairs.iter().any(|p| !p.is_finite()) {
        return Err(smplab_core::Error::NonFinite.into());
    }
    Ok(pairs)
}

/// `p/q` as an exact rational.
pub fn parse_ratio(s: &str) -> CliResult<Rational64> {
    let bad = || CliError::Input(format!("expected a fraction p/q, got {s:?}"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let p: i64 = p.trim().parse().map_err(|_| bad())?;
    let q: i64 = q.trim().parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(p, q))
}

fn parse_norm(s: &str) -> CliResult<Norm> {
    match s.split_once(':') {
        None if s == "euclid" => Ok(Norm::Euclid),
        Some(("polygon", path)) => {
            let half: Vec<[f64; 2]> = serde_json::from_str(&read_source(Path::new(path))?)
                .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            Ok(Norm::Polygon(Polygon::new(half)?))
        }
        _ => Err(CliError::Input(format!(
            "unknown norm {s:?} (expected euclid or polygon:FILE)"
        ))),
    }
}

fn json_only(format: Option<Format>, command: &str) -> CliResult<()> {
    match format {
        Some(Format::Csv) => Err(CliError::Input(format!("{command} has no csv output"))),
        _ => Ok(()),
    }
}

/// Runs each pair through `f` and prints one JSON document per line.
fn per_pair<T, F>(out: &mut dyn Write, path: &Path, mut f: F) -> CliResult<()>
where
    T: Serialize,
    F: FnMut(&MatrixPair) -> CliResult<T>,
{
    for p in load_pairs(path)? {
        writeln!(out, "{}", to_json(&f(&p)?)?)?;
    }
    Ok(())
}

const FLAG_COLUMNS: [&str; 7] = [
    "in_cross",
    "in_mix",
    "in_neg",
    "in_copar",
    "in_anti",
    "in_complexS",
    "reducible",
];

fn flags_csv(out: &mut dyn Write, rows: &[RegionFlags]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(
        FLAG_COLUMNS
            .iter()
            .chain(&["commutator", "det_a", "det_b", "disc_a", "disc_b", "trace_window"]),
    )?;
    for f in rows {
        let mut rec: Vec<String> = f
            .flags()
            .iter()
            .map(|fl| match fl {
                smplab_core::Flag::True => "true".into(),
                smplab_core::Flag::False => "false".into(),
                smplab_core::Flag::Indeterminate => "indeterminate".into(),
            })
            .collect();
        let m = &f.margins;
        rec.extend(
            [m.commutator, m.det_a, m.det_b, m.disc_a, m.disc_b, m.trace_window]
                .iter()
                .map(|&x| format_number(x)),
        );
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SmpOutput {
    #[serde(flatten)]
    candidate: smplab_core::jsr::SmpCandidate,
    jsr: Option<f64>,
    lower: f64,
    upper: f64,
    tied: Vec<BinaryWord>,
    regions: RegionFlags,
}

/// Applies the thread cap; the global pool can be set only once per process.
pub fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

/// Executes a parsed command line, writing results to `out` and progress to `err`.
pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let format = cli.format;
    match &cli.command {
        Command::Classify { pair, tuple, tol } => {
            let flags = match (pair, tuple) {
                (_, Some(t)) => vec![classify_tuple(&t.parse::<FiveTuple>()?, *tol)?],
                (Some(path), None) => load_pairs(path)?.iter().map(|p| classify(p, *tol)).collect(),
                (None, None) => unreachable!("clap requires one of --pair, --tuple"),
            };
            if format == Some(Format::Csv) {
                flags_csv(out, &flags)?;
            } else {
                for f in &flags {
                    writeln!(out, "{}", to_json(f)?)?;
                }
            }
        }
        Command::Jsr { input, max_len, norm } => {
            json_only(format, "jsr")?;
            let norm = parse_norm(norm)?;
            per_pair(out, &input.pair, |p| Ok(brute_force(p, *max_len, &norm)?))?;
        }
        Command::Smp { input, tol, max_len } => {
            json_only(format, "smp")?;
            let opts = CertifyOptions {
                tol: *tol,
                max_len: *max_len,
                ..CertifyOptions::default()
            };
            per_pair(out, &input.pair, |p| {
                let c = certify_with(p, &opts)?;
                Ok(SmpOutput {
                    candidate: c.candidate,
                    jsr: c.jsr,
                    lower: c.lower,
                    upper: c.upper,
                    tied: c.tied,
                    regions: c.regions,
                })
            })?;
        }
        Command::Sturmian { input, resolution, tol } => {
            json_only(format, "sturmian")?;
            let res = parse_ratio(resolution)?;
            per_pair(out, &input.pair, |p| Ok(maximize_sturmian(p, res, *tol)?))?;
        }
        Command::Lyap { input, gamma, depth } => {
            json_only(format, "lyap")?;
            let exact = gamma.contains('/');
            let ratio = if exact { Some(parse_ratio(gamma)?) } else { None };
            let real: f64 = match ratio {
                Some(_) => 0.0,
                None => gamma
                    .parse()
                    .map_err(|_| CliError::Input(format!("bad slope {gamma:?}")))?,
            };
            for p in load_pairs(&input.pair)? {
                let value = match ratio {
                    Some(r) => {
                        if *r.numer() < 0 || *r.denom() < 0 {
                            return Err(
                                smplab_core::Error::OutOfRange(format!("slope {gamma} must be in [0, 1]")).into(),
                            );
                        }
                        lyapunov_rational(&p, *r.numer() as u64, *r.denom() as u64)?.value
                    }
                    None => lyapunov_irrational(&p, real, *depth)?.value,
                };
                writeln!(out, "{}", format_number(value))?;
            }
        }
        Command::Fricke { word, at } => {
            json_only(format, "fricke")?;
            let f = fricke_poly(&word.parse::<BinaryWord>()?)?;
            match at {
                Some(t) => writeln!(out, "{}", format_number(evaluate(&f, &t.parse::<FiveTuple>()?)))?,
                None => writeln!(out, "{f}")?,
            }
        }
        Command::Christoffel { p, q, depth } => {
            json_only(format, "christoffel")?;
            match (p, q, depth) {
                (_, _, Some(d)) => {
                    for node in christoffel_tree(*d) {
                        writeln!(out, "{} {} {} {}", node.depth, node.u, node.v, node.word())?;
                    }
                }
                (Some(p), Some(q), None) => writeln!(out, "{}", christoffel(*p, *q)?)?,
                _ => unreachable!("clap requires --p and --q or --depth"),
            }
        }
        Command::Signature { word } => {
            json_only(format, "signature")?;
            writeln!(out, "{}", signature(&word.parse::<BinaryWord>()?)?)?;
        }
        Command::Example { n, verify, max_len } => {
            json_only(format, "example")?;
            let fam = counterexample_family(*n)?;
            let verification = if *verify {
                Some(verify_example(*n, *max_len)?)
            } else {
                None
            };
            let doc = json!({
                "n": fam.n,
                "c": fam.c,
                "A": fam.a,
                "B": fam.b,
                "phi": fam.phi,
                "vertices": fam.polygon.vertices(),
                "verification": verification,
            });
            writeln!(out, "{}", to_json(&doc)?)?;
            if verification.as_ref().is_some_and(|v| !v.passed) {
                return Err(CliError::Failed(format!("family n={n} failed verification")));
            }
        }
        Command::Realize { tuple } => {
            json_only(format, "realize")?;
            writeln!(out, "{}", to_json(&realize_from_tuple(&tuple.parse::<FiveTuple>()?)?)?)?;
        }
        Command::Symmetrize { input, tol } => {
            json_only(format, "symmetrize")?;
            per_pair(out, &input.pair, |p| Ok(symmetrize(p, *tol)?))?;
        }
        Command::Montecarlo {
            seed,
            samples,
            dist,
            tol,
        } => {
            let dist: Distribution = dist.parse()?;
            let counts = monte_carlo_regions(*seed, *samples, dist, *tol);
            if format == Some(Format::Json) {
                let doc = json!({
                    "seed": seed,
                    "dist": dist,
                    "counts": counts,
                    "union_fraction": counts.union_fraction(),
                });
                writeln!(out, "{}", to_json(&doc)?)?;
            } else {
                montecarlo_csv(out, *seed, dist, &counts)?;
            }
        }
        Command::Reproduce { seed, list, only } => {
            reproduce(out, err, format, *seed, *list, only)?;
        }
    }
    Ok(())
}

fn montecarlo_csv(out: &mut dyn Write, seed: u64, dist: Distribution, counts: &RegionCounts) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["seed", "dist"];
    header.extend(RegionCounts::CSV_HEADER);
    header.push("union_fraction");
    w.write_record(&header)?;
    let mut row = vec![seed.to_string(), dist.to_string()];
    row.extend(counts.as_row().iter().map(u64::to_string));
    row.push(format_number(counts.union_fraction()));
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

fn reproduce(
    out: &mut dyn Write,
    err: &mut dyn Write,
    format: Option<Format>,
    seed: u64,
    list: bool,
    only: &[u8],
) -> CliResult<()> {
    json_only(format, "reproduce")?;
    let selected: Vec<(u8, &str)> = CRITERIA
        .iter()
        .copied()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .collect();
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|(c, _)| c == *id)) {
        return Err(CliError::Input(format!("no criterion {bad}")));
    }
    if list {
        for (id, name) in &selected {
            writeln!(out, "{id:>2} {name}")?;
        }
        return Ok(());
    }
    let mut runs = RegionRuns::default();
    let mut failed = Vec::new();
    let mut results = Vec::new();
    for (id, _) in selected {
        let r = run_criterion(id, seed, &mut runs)?;
        writeln!(err, "criterion {id} took {:.1}s", r.seconds)?;
        if format == Some(Format::Json) {
            let mut v = serde_json::to_value(&r).map_err(|e| CliError::Input(e.to_string()))?;
            if let Value::Object(m) = &mut v {
                // wall time would break byte-identical reruns
                m.remove("seconds");
            }
            round_json(&mut v);
            results.push(v);
        } else {
            writeln!(out, "{}", r.line())?;
            if !r.passed {
                let mut d = r.details.clone();
                round_json(&mut d);
                writeln!(out, "  details: {d}")?;
            }
        }
        if !r.passed {
            failed.push(id);
        }
    }
    if format == Some(Format::Json) {
        writeln!(out, "{}", Value::Array(results))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("criteria failed: {failed:?}")))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = configure_threads(cli.threads).and_then(|_| dispatch(&cli, out, err));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "smplab: {e}");
            e.exit_code()
        }
    }
}

//! The `sievelab` command line.
//!
//! Exit status is 0 on success, 2 when the arguments are rejected and 1 when a
//! computation fails; either failure prints one line on stderr.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acceptance;
use crate::bounds::{compare, bound_value, BoundSpec, CountKind, CountResult, Theorem};
use crate::constants::{singular_series, ConstantBundle, DEFAULT_TRUNCATION};
use crate::counters::{count_n2, count_s2, count_sk, decomposition_audit, FactorMode, Tables};
use crate::error::{Error, Result};
use crate::params::{richert_derive, ChenSearch, DeltaMode, RichertParams, SieveParams};
use crate::primes::{averaged_error, cache, equidist_error};
use crate::rational::{k_for_exponent, parse_rational, rat, Rational};
use crate::report::{write_csv, JsonObject};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn odd_arg(s: &str) -> std::result::Result<u64, String> {
    let b: u64 = s.parse().map_err(|_| format!("not a non-negative integer: {s:?}"))?;
    if b % 2 == 0 {
        return Err(format!("b must be odd, got {b}"));
    }
    Ok(b)
}

fn kind_arg(s: &str) -> std::result::Result<CountKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn mode_arg(s: &str) -> std::result::Result<FactorMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "sievelab", version, about = "Sieve constants and almost-prime counts for primes p with 2^k | p - b")]
pub struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sieving and counting (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// C1, C2, C_delta, f and f' at one (a, delta), as JSON.
    Constants(ConstantsArgs),
    /// Grid and golden-section search for the largest f over admissible (a, delta).
    Optimize(OptimizeArgs),
    /// Richert-weight parameters and constant for one K, as JSON.
    Richert(RichertArgs),
    /// One exact count with its lower bound, as a CSV row.
    Count(CountArgs),
    /// Exhaustive check of the weighted decomposition, as JSON.
    Audit(AuditArgs),
    /// Prime counts in progressions against li(x)/phi(q), as JSON.
    Equidist(EquidistArgs),
    /// A lower-bound value with its truncation uncertainty, as JSON.
    Bounds(BoundsArgs),
    /// Runs the acceptance suite; one line per criterion.
    Verify,
    /// Counts against bounds over a grid, as CSV.
    Report(ReportArgs),
}

/// `2^k` given directly or through `2^k <= N^a`.
#[derive(Debug, Args)]
pub struct ShiftArgs {
    #[arg(long = "k", conflicts_with = "a_exp")]
    pub k: Option<u32>,
    /// Exponent `a` choosing the largest k with 2^k <= N^a [default: 1/87].
    #[arg(long = "a-exp", value_parser = rational_arg)]
    pub a_exp: Option<Rational>,
}

impl ShiftArgs {
    fn resolve(&self, n: u64) -> Result<u32> {
        match (self.k, &self.a_exp) {
            (Some(k), _) => Ok(k),
            (None, Some(a)) => k_for_exponent(n, a),
            (None, None) => k_for_exponent(n, &rat(1, 87)),
        }
    }
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_parser = rational_arg, default_value = "1/87")]
    pub a: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "85/688")]
    pub delta: Rational,
    /// Number of dyadic pieces in f'; overridden by the M of `--N` when given.
    #[arg(long = "M", default_value_t = 32)]
    pub m: u32,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, value_parser = odd_arg, default_value = "1")]
    pub b: u64,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DeltaModeArg {
    Free,
    LeftEndpoint,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long = "grid-a", default_value_t = 64)]
    pub grid_a: usize,
    #[arg(long = "grid-d", default_value_t = 32)]
    pub grid_d: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long = "delta-mode", value_enum, default_value_t = DeltaModeArg::Free)]
    pub delta_mode: DeltaModeArg,
}

#[derive(Debug, Args)]
pub struct RichertArgs {
    #[arg(long = "K", value_parser = clap::value_parser!(u32).range(3..=8))]
    pub big_k: u32,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_parser = kind_arg)]
    pub kind: CountKind,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, value_parser = odd_arg, default_value = "1")]
    pub b: u64,
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Largest number of odd prime factors, for `--kind sK`.
    #[arg(long = "K", required_if_eq("kind", "sK"))]
    pub big_k: Option<u32>,
    /// Prime factors of the odd part must exceed N'^zexp, for n2 and s2.
    #[arg(long, value_parser = rational_arg, default_value = "85/688")]
    pub zexp: Rational,
    #[arg(long, value_parser = mode_arg, default_value = "multiplicity")]
    pub mode: FactorMode,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Largest prime in the truncated twin-prime product.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: u64,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, value_parser = odd_arg, default_value = "1")]
    pub b: u64,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[arg(long, value_parser = rational_arg, default_value = "85/688")]
    pub delta: Rational,
}

#[derive(Debug, Args)]
pub struct EquidistArgs {
    #[arg(long)]
    pub x: u64,
    /// Modulus; a power of two when averaging over `--Dmax`.
    #[arg(long, default_value_t = 8)]
    pub q: u64,
    /// Single residue class instead of the averaged error.
    #[arg(long, conflicts_with = "dmax")]
    pub residue: Option<u64>,
    #[arg(long = "Dmax", default_value_t = 20)]
    pub dmax: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = kind_arg)]
    pub kind: CountKind,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, value_parser = odd_arg, default_value = "1")]
    pub b: u64,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[arg(long = "K", value_parser = clap::value_parser!(u32).range(3..=8), required_if_eq("kind", "sK"))]
    pub big_k: Option<u32>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: u64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long = "N", value_delimiter = ',', default_values_t = [100_000u64, 1_000_000, 10_000_000])]
    pub n: Vec<u64>,
    #[arg(long, value_parser = odd_arg, value_delimiter = ',', default_values_t = [1u64, 3, 15])]
    pub b: Vec<u64>,
    #[arg(long = "k", value_delimiter = ',', default_values_t = [0u32, 1, 2, 3])]
    pub k: Vec<u32>,
    #[arg(long = "K", value_delimiter = ',', default_values_t = [3u32, 4, 5, 6, 7, 8])]
    pub big_k: Vec<u32>,
    #[arg(long, value_parser = kind_arg, value_delimiter = ',', default_values_t = [CountKind::N2, CountKind::S2, CountKind::SK])]
    pub kind: Vec<CountKind>,
    #[arg(long, value_parser = rational_arg, default_value = "85/688")]
    pub zexp: Rational,
    #[arg(long, value_parser = mode_arg, default_value = "multiplicity")]
    pub mode: FactorMode,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: u64,
}

/// Parses `argv` (program name first), runs one subcommand and returns the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(stderr, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        // a pool built earlier in this process stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli.command) {
        Ok((text, failed)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(Error::from),
                None => stdout.write_all(text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_RUNTIME;
            }
            if failed > 0 {
                let _ = writeln!(stderr, "error: {failed} acceptance criteria failed");
                return EXIT_RUNTIME;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Domain(_) | Error::Parse(_) | Error::EmptyFeasibleSet(_) => EXIT_USAGE,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

/// The rendered output, and the number of failed acceptance criteria.
fn execute(cmd: &Command) -> Result<(String, usize)> {
    let text = match cmd {
        Command::Constants(a) => constants(a)?,
        Command::Optimize(a) => optimize(a)?,
        Command::Richert(a) => richert(a)?,
        Command::Count(a) => count(a)?,
        Command::Audit(a) => audit(a)?,
        Command::Equidist(a) => equidist(a)?,
        Command::Bounds(a) => bounds(a)?,
        Command::Report(a) => report(a)?,
        Command::Verify => {
            let outcomes = acceptance::run_all(|_| {});
            let failed = outcomes.iter().filter(|o| o.failed()).count();
            let text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
            return Ok((text, failed));
        }
    };
    Ok((text, 0))
}

fn constants(args: &ConstantsArgs) -> Result<String> {
    let m = match args.n {
        Some(n) => {
            let k = args.shift.resolve(n)?;
            SieveParams::new(n, args.b, k, args.delta)?.big_m()?
        }
        None => args.m,
    };
    let c = ConstantBundle::evaluate(&args.a, &args.delta, m, args.tol)?;
    let mut o = JsonObject::from_serialize(&c)?;
    o.set("a_exact", args.a.to_string())
        .set("delta_exact", args.delta.to_string())
        .set("f_ad_positive", c.f_ad > 0.0);
    Ok(o.render())
}

fn optimize(args: &OptimizeArgs) -> Result<String> {
    if args.grid_a < 16 || args.grid_d < 16 {
        return Err(Error::Domain(format!("grids must have at least 16 points, got {} x {}", args.grid_a, args.grid_d)));
    }
    let mode = match args.delta_mode {
        DeltaModeArg::Free => DeltaMode::Free,
        DeltaModeArg::LeftEndpoint => DeltaMode::LeftEndpoint,
    };
    let best = ChenSearch::full(args.grid_a, args.grid_d, args.tol, mode).run()?;
    let mut o = JsonObject::from_serialize(&best)?;
    o.set("grid_a", args.grid_a)
        .set("grid_d", args.grid_d)
        .set("delta_mode", format!("{mode:?}"));
    Ok(o.render())
}

fn richert(args: &RichertArgs) -> Result<String> {
    let r = richert_derive(args.big_k, args.epsilon)?;
    let mut o = JsonObject::new();
    o.set("K", r.k_factors)
        .set("epsilon", r.epsilon)
        .set("a", r.a.to_string())
        .set("theta", r.theta)
        .set("alpha", r.alpha)
        .set("v", r.v)
        .set("u", r.u)
        .set("lambda_min", r.lambda_min)
        .set("lead_constant", r.lead_constant)
        .set("sharp_constant", r.sharp_constant);
    if let Some(s) = r.specialized_k3 {
        o.set("specialized_constant", s);
    }
    if r.k_factors == 8 {
        let margin = RichertParams::k8_margin();
        o.set("margin", margin).set("16·log3 > 52/3", margin > 0.0);
    }
    Ok(o.render())
}

/// A row for one count, with its bound when a theorem applies and `N' >= 3`.
fn count_row(
    kind: CountKind,
    n: u64,
    b: u64,
    k: u32,
    big_k: Option<u32>,
    count: u64,
    epsilon: f64,
    series: &crate::constants::SingularSeries,
) -> Result<CountResult> {
    let theorem = Theorem::for_count(kind, big_k);
    let np_ok = k < 64 && n as f64 / 2f64.powi(k as i32) >= 3.0;
    match theorem {
        Some(t) if np_ok => compare(count, kind, big_k, &BoundSpec::new(t, n, b, k, epsilon, series.clone())?),
        _ => Ok(CountResult::unbounded(n, b, k, kind, big_k, count)),
    }
}

fn count_one(kind: CountKind, n: u64, b: u64, k: u32, big_k: Option<u32>, zexp: &Rational, mode: FactorMode, t: &Tables) -> Result<u64> {
    match kind {
        CountKind::N2 => count_n2(n, b, k, zexp, t),
        CountKind::S2 => count_s2(n, b, k, zexp, t),
        CountKind::SK => count_sk(n, b, k, big_k.expect("K is required for sK"), mode, t),
    }
}

fn csv_text(rows: &[CountResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

fn count(args: &CountArgs) -> Result<String> {
    let k = args.shift.resolve(args.n)?;
    let big_k = if args.kind == CountKind::SK { args.big_k } else { None };
    let tables = Tables::for_counting(args.n, args.b, k)?;
    let c = count_one(args.kind, args.n, args.b, k, big_k, &args.zexp, args.mode, &tables)?;
    let series = singular_series(args.b, args.truncation)?;
    csv_text(&[count_row(args.kind, args.n, args.b, k, big_k, c, args.epsilon, &series)?])
}

fn audit(args: &AuditArgs) -> Result<String> {
    let k = args.shift.resolve(args.n)?;
    let tables = Tables::for_counting(args.n, args.b, k)?;
    let r = decomposition_audit(args.n, args.b, k, &args.delta, &tables)?;
    let mut o = JsonObject::from_serialize(&r)?;
    o.set("clean", r.is_clean()).set("violations", r.violations());
    Ok(o.render())
}

fn equidist(args: &EquidistArgs) -> Result<String> {
    let table = cache::table_from_env(args.x.max(2))?;
    let o = match args.residue {
        Some(r) => JsonObject::from_serialize(&equidist_error(args.x, args.q, r, &table, args.tol)?)?,
        None => {
            let e = averaged_error(args.x, args.q, args.dmax, &table, args.seed, args.tol)?;
            let mut o = JsonObject::from_serialize(&e)?;
            o.set("normalized", e.normalized()).set("seed", args.seed);
            o
        }
    };
    Ok(o.render())
}

fn bounds(args: &BoundsArgs) -> Result<String> {
    let k = args.shift.resolve(args.n)?;
    let big_k = if args.kind == CountKind::SK { args.big_k } else { None };
    let theorem = Theorem::for_count(args.kind, big_k).ok_or_else(|| Error::Domain("no bound for this count".into()))?;
    let spec = BoundSpec::new(theorem, args.n, args.b, k, args.epsilon, singular_series(args.b, args.truncation)?)?;
    let v = bound_value(&spec)?;
    let mut o = JsonObject::new();
    o.set("theorem", theorem.to_string())
        .set("N", args.n)
        .set("b", args.b)
        .set("k", k)
        .set("epsilon", args.epsilon)
        .set("constant", spec.constant()?)
        .set("twin_factor", spec.singular.twin_factor)
        .set("b_factor", spec.singular.b_factor)
        .set("truncation_prime", spec.singular.truncation_prime)
        .set("value", v.value)
        .set("err", v.err)
        .set("lower", v.value - v.err);
    Ok(o.render())
}

fn report(args: &ReportArgs) -> Result<String> {
    let n_max = args.n.iter().copied().max().unwrap_or(0);
    let b_max = args.b.iter().copied().max().unwrap_or(1);
    let k_min = args.k.iter().copied().min().unwrap_or(0);
    let tables = Tables::for_counting(n_max, b_max, k_min)?;
    let mut rows = Vec::new();
    for &b in &args.b {
        let series = singular_series(b, args.truncation)?;
        for &n in &args.n {
            for &k in &args.k {
                for &kind in &args.kind {
                    let ks: Vec<Option<u32>> = match kind {
                        CountKind::SK => args.big_k.iter().map(|&x| Some(x)).collect(),
                        _ => vec![None],
                    };
                    for big_k in ks {
                        let c = count_one(kind, n, b, k, big_k, &args.zexp, args.mode, &tables)?;
                        rows.push(count_row(kind, n, b, k, big_k, c, args.epsilon, &series)?);
                    }
                }
            }
        }
    }
    csv_text(&rows)
}

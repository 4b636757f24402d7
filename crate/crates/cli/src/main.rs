//! `midcoef`: middle coefficients of `(1+x)(1+x^2)...(1+x^n)` from the shell.
//!
//! Exit status: 0 on success or when every check passes, 1 on a failed check,
//! mismatch or I/O problem, 2 on a usage or domain error.

mod nlist;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use midcoef::asymptotics::{self, RatioRecord, Source};
use midcoef::bounds::{self, BoundsConfig};
use midcoef::datastore::{self, Cache, CacheRecord, CachedValue};
use midcoef::{logdp, quadrature, spectrum, Error, ExtendedFloat};

use nlist::{parse_orders, OrderList};

#[derive(Parser)]
#[command(name = "midcoef", version, about = "Middle coefficients of (1+x)(1+x^2)...(1+x^n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Minimum significant bits for floating-point work (53 = f64, up to 104).
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,

    /// Where S(n) comes from.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Machine-readable output; plain text when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = bounds::DEFAULT_SEED)]
    seed: u64,

    /// Network timeout in seconds (fetch only).
    #[arg(long, global = true, default_value_t = 30)]
    timeout: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Logdp,
}

impl From<Mode> for Source {
    fn from(m: Mode) -> Source {
        match m {
            Mode::Exact => Source::Exact,
            Mode::Logdp => Source::Logdp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// S(n): full decimal in exact mode, log2 with an error bound in logdp mode.
    Coeff { n: u64 },
    /// Every coefficient of the product as "<j> <c_j>" lines.
    Spectrum {
        n: u64,
        /// Output file, "-" for stdout.
        #[arg(default_value = "-")]
        output: String,
    },
    /// The two Laplace-method estimates of S(n).
    Estimate { n: u64 },
    /// S(n) against both estimates for a list ("3,8") or range ("1..400") of orders.
    RatioTable {
        #[arg(value_parser = parse_orders)]
        orders: OrderList,
    },
    /// Sweep the bounds on the cosine product over jittered grids.
    VerifyBounds {
        #[arg(long = "n", value_parser = parse_orders, default_value = "16,32,64,128,256")]
        orders: OrderList,
        #[arg(long, default_value_t = bounds::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = midcoef::cosprod::DEFAULT_EPSILON)]
        eps: f64,
    },
    /// S(n) from its Fourier integral.
    Quadrature {
        n: u64,
        #[arg(long, default_value_t = quadrature::DEFAULT_NODES_PER_PANEL)]
        nodes: usize,
    },
    /// Compare S(n) with an A025591 b-file (bundled snapshot by default).
    Crosscheck {
        #[arg(long)]
        bfile: Option<PathBuf>,
        /// Download the b-file from this URL instead (needs the `fetch` feature).
        #[arg(long, num_args = 0..=1, default_missing_value = datastore::A025591_URL)]
        fetch: Option<String>,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
    /// Local value cache (directory from MIDCOEF_CACHE_DIR).
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the cache file location.
    Path,
    /// Print every record.
    List,
    /// Compute S(n) in the current mode and store it.
    Put {
        #[arg(value_parser = parse_orders)]
        orders: OrderList,
    },
    /// Print the latest record for n in the current mode.
    Get { n: u64 },
    /// Delete the cache file.
    Clear,
}

enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Writes records as CSV (with header) or one JSON object per line tagged
/// with `"record"`.
fn emit<R: Serialize>(out: &mut dyn Write, format: Format, tag: &str, rows: &[R]) -> Outcome {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for r in rows {
                let mut v = serde_json::to_value(r).map_err(|e| Failure::Io(e.to_string()))?;
                if let Some(obj) = v.as_object_mut() {
                    obj.insert("record".into(), tag.into());
                }
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(())
}

fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
        .parse::<f64>()
        .map(|v| v.to_string())
        .unwrap_or_else(|_| x.to_string())
}

#[derive(Serialize)]
struct CoeffRow {
    n: u64,
    mode: &'static str,
    /// Full decimal in exact mode, empty otherwise.
    value: String,
    log2: f64,
    error_bound: f64,
}

fn value_of(n: u64, mode: Mode, precision: u32) -> Result<(Option<BigUint>, ExtendedFloat), Error> {
    match mode {
        Mode::Exact => {
            let v = spectrum::middle_coefficient(n)?;
            let x = ExtendedFloat::from_biguint(&v);
            Ok((Some(v), x))
        }
        Mode::Logdp => Ok((None, logdp::middle_coefficient_log2(n, precision)?)),
    }
}

fn cmd_coeff(cli: &Cli, n: u64, out: &mut dyn Write) -> Outcome {
    let (exact, x) = value_of(n, cli.mode, cli.precision)?;
    match cli.format {
        None => match &exact {
            Some(v) => writeln!(out, "{v}")?,
            None => writeln!(out, "log2 {} error_bound {:e}", sig12(x.log2()), x.error_bound())?,
        },
        Some(f) => {
            let row = CoeffRow {
                n,
                mode: if exact.is_some() { "exact" } else { "logdp" },
                value: exact.map(|v| v.to_string()).unwrap_or_default(),
                log2: x.log2(),
                error_bound: if cli.mode == Mode::Exact { 0.0 } else { x.error_bound() },
            };
            emit(out, f, "coeff", &[row])?;
        }
    }
    Ok(())
}

fn cmd_spectrum(n: u64, output: &str, out: &mut dyn Write) -> Outcome {
    let s = spectrum::expand(n)?;
    let entries: Vec<datastore::BFileEntry> = s
        .iter()
        .enumerate()
        .map(|(j, c)| datastore::BFileEntry::new(j as u64, c.clone()))
        .collect();
    let text = datastore::write_bfile(&entries)?;
    if output == "-" {
        out.write_all(text.as_bytes())?;
    } else {
        fs::write(output, text)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateRow {
    n: u64,
    estimate_log2: f64,
    refined_log2: f64,
    estimate_error_bound: f64,
    refined_error_bound: f64,
}

fn cmd_estimate(cli: &Cli, n: u64, out: &mut dyn Write) -> Outcome {
    let c = asymptotics::conjecture_estimate(n)?;
    let r = asymptotics::refined_estimate(n)?;
    match cli.format {
        None => {
            for (name, x) in [("conjecture", c), ("refined", r)] {
                write!(out, "{name:<10} log2 {}", sig12(x.log2()))?;
                if x.exponent() < 1000 {
                    write!(out, "  value {}", sig12(x.to_f64()))?;
                }
                writeln!(out)?;
            }
        }
        Some(f) => {
            let row = EstimateRow {
                n,
                estimate_log2: c.log2(),
                refined_log2: r.log2(),
                estimate_error_bound: c.error_bound(),
                refined_error_bound: r.error_bound(),
            };
            emit(out, f, "estimate", &[row])?;
        }
    }
    Ok(())
}

/// Column order of the ratio table.
#[derive(Serialize)]
struct RatioRow {
    n: u64,
    source: Source,
    s_log2: f64,
    estimate_log2: f64,
    refined_log2: f64,
    ratio_conjecture: f64,
    ratio_refined: f64,
}

impl From<RatioRecord> for RatioRow {
    fn from(r: RatioRecord) -> Self {
        RatioRow {
            n: r.n,
            source: r.source,
            s_log2: r.s_log2,
            estimate_log2: r.estimate_log2,
            refined_log2: r.refined_log2,
            ratio_conjecture: r.ratio_conjecture,
            ratio_refined: r.ratio_refined,
        }
    }
}

fn cmd_ratio_table(cli: &Cli, orders: &OrderList, out: &mut dyn Write) -> Outcome {
    let rows: Vec<RatioRow> = asymptotics::ratio_table(&orders.0, cli.mode.into(), cli.precision)?
        .into_iter()
        .map(RatioRow::from)
        .collect();
    emit(out, cli.format.unwrap_or(Format::Csv), "ratio", &rows)
}

fn cmd_verify_bounds(cli: &Cli, orders: &OrderList, grid: usize, eps: f64, out: &mut dyn Write) -> Outcome {
    let config = BoundsConfig { orders: orders.0.clone(), grid, epsilon: eps, seed: cli.seed };
    let report = bounds::verify_bounds(&config, cli.precision)?;
    match cli.format {
        None => {
            writeln!(
                out,
                "orders {:?} grid {} eps {} seed {} precision {} bits",
                config.orders, config.grid, config.epsilon, config.seed, report.precision_bits
            )?;
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {:<24} points {:>6} violations {:>4} worst margin {:.3e} (n = {}, t = {})",
                    if c.pass() { "PASS" } else { "FAIL" },
                    c.name,
                    c.points,
                    c.violations,
                    c.worst_margin,
                    c.worst_n,
                    c.worst_t
                )?;
            }
        }
        Some(f) => emit(out, f, "bound_check", &report.checks)?,
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check("some bound checks failed".into()))
    }
}

#[derive(Serialize)]
struct QuadratureRow {
    n: u64,
    value: f64,
    log2: f64,
    error_bound: f64,
    precision_bits: u32,
    nodes_per_panel: usize,
}

fn cmd_quadrature(cli: &Cli, n: u64, nodes: usize, out: &mut dyn Write) -> Outcome {
    let x = quadrature::s_via_quadrature_with(n, cli.precision, nodes)?;
    match cli.format {
        None => {
            let v = x.to_f64();
            writeln!(out, "{} ± {:.3e}", sig12(v), v * x.error_bound())?;
        }
        Some(f) => {
            let row = QuadratureRow {
                n,
                value: x.to_f64(),
                log2: x.log2(),
                error_bound: x.error_bound(),
                precision_bits: cli.precision,
                nodes_per_panel: nodes,
            };
            emit(out, f, "quadrature", &[row])?;
        }
    }
    Ok(())
}

#[cfg(feature = "fetch")]
fn fetch(url: &str, timeout: u64) -> Result<Vec<datastore::BFileEntry>, Failure> {
    Ok(datastore::fetch_bfile(url, std::time::Duration::from_secs(timeout))?)
}

#[cfg(not(feature = "fetch"))]
fn fetch(_url: &str, _timeout: u64) -> Result<Vec<datastore::BFileEntry>, Failure> {
    Err(Failure::Usage("this build has no network support (rebuild with --features fetch)".into()))
}

#[derive(Serialize)]
struct CrosscheckLine {
    n: u64,
    computed: String,
    reference: String,
    equal: bool,
}

fn cmd_crosscheck(
    cli: &Cli,
    bfile: &Option<PathBuf>,
    url: &Option<String>,
    n_max: u64,
    out: &mut dyn Write,
) -> Outcome {
    let reference = match (bfile, url) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either --bfile or --fetch, not both".into())),
        (Some(p), None) => datastore::parse_bfile(&fs::read_to_string(p)?)?,
        (None, Some(u)) => fetch(u, cli.timeout)?,
        (None, None) => datastore::bundled_a025591(),
    };
    let report = datastore::crosscheck_against(&reference, n_max)?;
    match cli.format {
        None => {
            for r in report.rows.iter().filter(|r| !r.equal) {
                writeln!(out, "MISMATCH n = {}: computed {} reference {}", r.index, r.computed, r.reference)?;
            }
            for n in &report.max_not_middle {
                writeln!(out, "n = {n}: largest coefficient is not the middle one")?;
            }
            writeln!(out, "matches {} mismatches {}", report.matches, report.mismatches)?;
        }
        Some(f) => {
            let rows: Vec<CrosscheckLine> = report
                .rows
                .iter()
                .map(|r| CrosscheckLine {
                    n: r.index,
                    computed: r.computed.to_string(),
                    reference: r.reference.to_string(),
                    equal: r.equal,
                })
                .collect();
            emit(out, f, "crosscheck", &rows)?;
        }
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Check("cross-check found mismatches".into()))
    }
}

fn cmd_cache(cli: &Cli, action: &CacheAction, out: &mut dyn Write) -> Outcome {
    let cache = Cache::open_default();
    match action {
        CacheAction::Path => writeln!(out, "{}", cache.path().display())?,
        CacheAction::Clear => cache.clear()?,
        CacheAction::List => {
            for r in cache.load()? {
                writeln!(out, "{}", r.to_line())?;
            }
        }
        CacheAction::Put { orders } => {
            for &n in &orders.0 {
                let record = match value_of(n, cli.mode, cli.precision)? {
                    (Some(v), _) => CacheRecord::exact(n, v),
                    (None, x) => CacheRecord::approximate(n, &x, cli.precision),
                };
                cache.store(&record)?;
            }
        }
        CacheAction::Get { n } => match cache.get(*n, cli.mode.into())? {
            Some(r) => match &r.value {
                CachedValue::Exact(v) if cli.format.is_none() => writeln!(out, "{v}")?,
                _ => writeln!(out, "{}", r.to_line())?,
            },
            None => return Err(Failure::Check(format!("no cached value for n = {n}"))),
        },
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Coeff { n } => cmd_coeff(cli, *n, out),
        Command::Spectrum { n, output } => cmd_spectrum(*n, output, out),
        Command::Estimate { n } => cmd_estimate(cli, *n, out),
        Command::RatioTable { orders } => cmd_ratio_table(cli, orders, out),
        Command::VerifyBounds { orders, grid, eps } => cmd_verify_bounds(cli, orders, *grid, *eps, out),
        Command::Quadrature { n, nodes } => cmd_quadrature(cli, *n, *nodes, out),
        Command::Crosscheck { bfile, fetch, n_max } => cmd_crosscheck(cli, bfile, fetch, *n_max, out),
        Command::Cache { action } => cmd_cache(cli, action, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) | Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

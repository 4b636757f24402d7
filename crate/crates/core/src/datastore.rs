//! OEIS b-files, a local value cache, and the cross-check against A025591.
//!
//! A025591 lists the *largest* coefficient of `(1+x)...(1+x^n)`. For
//! `n ≡ 0, 3 (mod 4)` that is the middle one; [`crosscheck_bundled`] checks
//! this with [`spectrum::max_coefficient`] instead of taking it for granted.
//!
//! # Cache schema
//!
//! One record per line, tab separated, `#` lines are comments:
//!
//! ```text
//! n  kind  value  error_bound  source  precision_bits
//! ```
//!
//! `kind` is `exact` (decimal integer in `value`, `error_bound` 0) or `log2`
//! (`value` is `log2 S(n)` and `error_bound` its relative error bound).
//! Exact values wider than [`LOG2_THRESHOLD_BITS`] are stored as `log2`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::asymptotics::Source;
use crate::error::{Error, Result};
use crate::extended::ExtendedFloat;
use crate::spectrum;

/// The bundled snapshot, `n = 0..=200`.
pub const BUNDLED_A025591: &str = include_str!("../data/b025591.txt");
pub const A025591_URL: &str = "https://oeis.org/A025591/b025591.txt";
pub const CACHE_DIR_VAR: &str = "MIDCOEF_CACHE_DIR";
pub const CACHE_FILE: &str = "values.tsv";
pub const LOG2_THRESHOLD_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BFileEntry {
    pub index: u64,
    pub value: BigUint,
}

impl BFileEntry {
    pub fn new(index: u64, value: impl Into<BigUint>) -> Self {
        BFileEntry { index, value: value.into() }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads `<index> <value>` lines; `#` lines and blank lines are skipped.
pub fn parse_bfile(text: &str) -> Result<Vec<BFileEntry>> {
    let mut out: Vec<BFileEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (idx, val) = line
            .split_once(' ')
            .ok_or_else(|| parse_error(line_no, "expected \"<index> <value>\""))?;
        let is_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !is_digits(idx) || !is_digits(val) {
            return Err(parse_error(line_no, format!("malformed entry {line:?}")));
        }
        let index: u64 = idx
            .parse()
            .map_err(|_| parse_error(line_no, format!("index {idx} out of range")))?;
        let value: BigUint = val.parse().expect("checked digits");
        if let Some(prev) = out.last() {
            if index <= prev.index {
                return Err(Error::Format {
                    line: line_no,
                    message: format!("index {index} does not follow {}", prev.index),
                });
            }
        }
        out.push(BFileEntry { index, value });
    }
    Ok(out)
}

pub fn write_bfile(entries: &[BFileEntry]) -> Result<String> {
    if let Some(w) = entries.windows(2).find(|w| w[1].index <= w[0].index) {
        return Err(Error::domain(format!(
            "b-file indices must increase, got {} after {}",
            w[1].index, w[0].index
        )));
    }
    let mut s = String::new();
    for e in entries {
        writeln!(s, "{} {}", e.index, e.value).expect("writing to a string");
    }
    Ok(s)
}

pub fn bundled_a025591() -> Vec<BFileEntry> {
    parse_bfile(BUNDLED_A025591).expect("bundled snapshot is well formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckRow {
    pub index: u64,
    pub computed: BigUint,
    pub reference: BigUint,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub rows: Vec<CrosscheckRow>,
    pub matches: usize,
    pub mismatches: usize,
    /// Orders where the largest coefficient differs from the middle one.
    pub max_not_middle: Vec<u64>,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0 && self.max_not_middle.is_empty()
    }
}

/// Compares the indices present in both lists.
pub fn crosscheck(computed: &[BFileEntry], reference: &[BFileEntry]) -> CrosscheckReport {
    let mut report = CrosscheckReport::default();
    for c in computed {
        if let Some(r) = reference.iter().find(|r| r.index == c.index) {
            let equal = c.value == r.value;
            if equal {
                report.matches += 1;
            } else {
                report.mismatches += 1;
            }
            report.rows.push(CrosscheckRow {
                index: c.index,
                computed: c.value.clone(),
                reference: r.value.clone(),
                equal,
            });
        }
    }
    report
}

/// `S(n)` for every `n ≡ 0, 3 (mod 4)` up to `n_max`, checked against a
/// reference b-file and against the largest coefficient.
pub fn crosscheck_against(reference: &[BFileEntry], n_max: u64) -> Result<CrosscheckReport> {
    let covered = reference.last().map_or(0, |e| e.index);
    if n_max > covered {
        return Err(Error::domain(format!(
            "reference only covers n <= {covered}, asked for {n_max}"
        )));
    }
    let computed: Vec<BFileEntry> = spectrum::middle_coefficients_upto(n_max)?
        .into_iter()
        .map(|(n, v)| BFileEntry::new(n, v))
        .collect();
    let mut report = crosscheck(&computed, reference);
    for e in &computed {
        let (_, max) = spectrum::max_coefficient(e.index)?;
        if max != e.value {
            report.max_not_middle.push(e.index);
        }
    }
    Ok(report)
}

pub fn crosscheck_bundled(n_max: u64) -> Result<CrosscheckReport> {
    crosscheck_against(&bundled_a025591(), n_max)
}

/// The live b-file, fetched over HTTP.
#[cfg(feature = "fetch")]
pub fn fetch_bfile(url: &str, timeout: std::time::Duration) -> Result<Vec<BFileEntry>> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .build()
        .into();
    let text = agent
        .get(url)
        .call()
        .and_then(|mut r| r.body_mut().read_to_string())
        .map_err(|e| Error::Io(format!("fetching {url}: {e}")))?;
    parse_bfile(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CachedValue {
    Exact(BigUint),
    Log2 { log2: f64, error_bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub n: u64,
    pub value: CachedValue,
    pub source: Source,
    pub precision_bits: u32,
}

impl CacheRecord {
    /// Exact values past the size threshold are reduced to `log2`.
    pub fn exact(n: u64, value: BigUint) -> Self {
        let value = if value.bits() > LOG2_THRESHOLD_BITS {
            let x = ExtendedFloat::from_biguint(&value);
            CachedValue::Log2 { log2: x.log2(), error_bound: x.error_bound() }
        } else {
            CachedValue::Exact(value)
        };
        CacheRecord { n, value, source: Source::Exact, precision_bits: 0 }
    }

    pub fn approximate(n: u64, value: &ExtendedFloat, precision_bits: u32) -> Self {
        CacheRecord {
            n,
            value: CachedValue::Log2 { log2: value.log2(), error_bound: value.error_bound() },
            source: Source::Logdp,
            precision_bits,
        }
    }

    pub fn to_line(&self) -> String {
        let (kind, value, err) = match &self.value {
            CachedValue::Exact(v) => ("exact", v.to_string(), "0".to_string()),
            CachedValue::Log2 { log2, error_bound } => ("log2", format!("{log2:?}"), format!("{error_bound:?}")),
        };
        format!("{}\t{kind}\t{value}\t{err}\t{}\t{}", self.n, self.source, self.precision_bits)
    }

    pub fn from_line(line: &str, line_no: usize) -> Result<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        let [n, kind, value, err, source, bits] = f[..] else {
            return Err(parse_error(line_no, format!("expected 6 tab-separated fields, got {}", f.len())));
        };
        let bad = |what: &str| parse_error(line_no, format!("bad {what}"));
        let n: u64 = n.parse().map_err(|_| bad("n"))?;
        let value = match kind {
            "exact" => CachedValue::Exact(value.parse().map_err(|_| bad("exact value"))?),
            "log2" => CachedValue::Log2 {
                log2: value.parse().map_err(|_| bad("log2 value"))?,
                error_bound: err.parse().map_err(|_| bad("error bound"))?,
            },
            _ => return Err(bad("kind")),
        };
        Ok(CacheRecord {
            n,
            value,
            source: source.parse().map_err(|_| bad("source"))?,
            precision_bits: bits.parse().map_err(|_| bad("precision"))?,
        })
    }
}

/// A cache file in one directory. Writers append; the last record for an
/// `(n, source)` pair wins.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$MIDCOEF_CACHE_DIR`, else `$XDG_CACHE_HOME/midcoef`, else `~/.cache/midcoef`.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_DIR_VAR) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&d).join("midcoef");
        }
        let home = std::env::var_os("HOME").unwrap_or_else(|| ".".into());
        Path::new(&home).join(".cache").join("midcoef")
    }

    pub fn open_default() -> Self {
        Cache::new(Self::default_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(CACHE_FILE)
    }

    pub fn load(&self) -> Result<Vec<CacheRecord>> {
        let text = match fs::read_to_string(self.path()) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| CacheRecord::from_line(l, i + 1))
            .collect()
    }

    pub fn store(&self, record: &CacheRecord) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path();
        let fresh = !path.exists();
        let mut f = fs::OpenOptions::new().create(true).append(true).open(&path)?;
        if fresh {
            writeln!(f, "# n\tkind\tvalue\terror_bound\tsource\tprecision_bits")?;
        }
        writeln!(f, "{}", record.to_line())?;
        Ok(())
    }

    pub fn get(&self, n: u64, source: Source) -> Result<Option<CacheRecord>> {
        Ok(self.load()?.into_iter().rev().find(|r| r.n == n && r.source == source))
    }

    pub fn clear(&self) -> Result<()> {
        match fs::remove_file(self.path()) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
            _ => Ok(()),
        }
    }
}

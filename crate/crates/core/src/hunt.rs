//! Range scans over `n` and searches built on them.
//!
//! A scan classifies every `n` in `[lo, hi]` and emits one [`ScanRecord`]
//! per `n` as JSON lines, ascending, independent of the worker count. Work
//! is cut into fixed subranges of [`CHUNK_SIZE`] values; a checkpoint after
//! each group of subranges lets an interrupted scan resume without
//! duplicating or losing lines.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::angular::{self, AngularMeasure};
use crate::error::{domain, Error, Result};
use crate::hyperbolic;
use crate::zint::{self, TwoSquaresRep};

pub const CHUNK_SIZE: u64 = 4096;
/// Measures with more atoms than this get no discrepancy in scan records.
pub const DEFAULT_KMAX: usize = 100_000;
pub const DEFAULT_SINGULAR_CUTOFF: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: u64,
    #[serde(rename = "in_N")]
    pub in_n: bool,
    pub r_star_m: Option<u64>,
    pub gamma_count: Option<u64>,
    pub discrepancy: Option<f64>,
    pub c2_abs: Option<f64>,
    #[serde(rename = "W2_m")]
    pub w2_m: Option<String>,
    pub omega1_m: Option<u32>,
    #[serde(rename = "Omega1_m")]
    pub big_omega1_m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anomaly: Option<String>,
}

impl ScanRecord {
    fn outside(n: u64) -> Self {
        ScanRecord {
            n,
            in_n: false,
            r_star_m: None,
            gamma_count: None,
            discrepancy: None,
            c2_abs: None,
            w2_m: None,
            omega1_m: None,
            big_omega1_m: None,
            anomaly: None,
        }
    }

    /// `W₂(n² − 4)` parsed back from its `num/den` form.
    pub fn w2(&self) -> Option<BigRational> {
        let s = self.w2_m.as_ref()?;
        let (a, b) = s.split_once('/')?;
        Some(BigRational::new(a.parse().ok()?, b.parse().ok()?))
    }

    /// `|μ̂ₙ(2)| = 2|W₂(n² − 4)| / r*(n² − 4)`, exactly.
    pub fn c2_exact(&self) -> Option<BigRational> {
        let w = self.w2()?;
        let r = self.r_star_m?;
        Some(w.abs() * BigRational::from_integer(2.into()) / BigRational::from_integer(r.into()))
    }
}

fn ratio_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// The record for one `n`; the discrepancy is skipped above `k_max` atoms.
pub fn scan_record(n: u64, k_max: usize) -> Result<ScanRecord> {
    if n < 2 {
        return domain(format!("n = {n} < 2"));
    }
    let (minus, plus) = hyperbolic::factor_neighbors(n)?;
    let Some(minus) = minus else {
        // n = 2: the circle has radius 0 and Γ² = {I, S}
        let g = hyperbolic::enumerate_gamma_factored(n, None, &plus)?;
        return Ok(ScanRecord {
            in_n: true,
            r_star_m: Some(1),
            gamma_count: Some(g.len() as u64),
            ..ScanRecord::outside(n)
        });
    };
    let mf = minus.mul(&plus);
    if !zint::is_sum_two_squares_factored(&mf) {
        return Ok(ScanRecord::outside(n));
    }
    let m = n as u128 * n as u128 - 4;
    let r_star = zint::r_star_from_r(m, zint::r_factored(&mf)) as u64;
    let gammas = hyperbolic::enumerate_gamma_factored(n, Some(&minus), &plus)?;
    let w2 = angular::w2_from_factors(&mf)?;
    let c2 = w2.abs() * BigRational::from_integer(2.into()) / BigRational::from_integer(r_star.into());
    let (w1, big_w1) = zint::omega1_factored(&mf);
    let discrepancy = if r_star as usize <= k_max {
        Some(angular::discrepancy(&angular::mu_from_gammas(&gammas)?).value)
    } else {
        None
    };
    let mut anomaly = Vec::new();
    if gammas.len() as u64 != 2 * r_star {
        anomaly.push(format!("gamma_count {} != 2 r* = {}", gammas.len(), 2 * r_star));
    }
    if n % 4 < 2 {
        anomaly.push(format!("n ≡ {} (mod 4)", n % 4));
    }
    Ok(ScanRecord {
        n,
        in_n: true,
        r_star_m: Some(r_star),
        gamma_count: Some(gammas.len() as u64),
        discrepancy,
        c2_abs: c2.to_f64(),
        w2_m: Some(ratio_string(&w2)),
        omega1_m: Some(w1),
        big_omega1_m: Some(big_w1),
        anomaly: (!anomaly.is_empty()).then(|| anomaly.join("; ")),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub workers: usize,
    pub k_max: usize,
    pub output: PathBuf,
    pub checkpoint: Option<PathBuf>,
    /// Number of subranges between checkpoints.
    pub checkpoint_interval: usize,
    pub resume: bool,
    /// Stop after this many subranges in this run, as if killed.
    pub stop_after: Option<usize>,
}

impl ScanConfig {
    pub fn new(lo: u64, hi: u64, output: impl Into<PathBuf>) -> Self {
        ScanConfig {
            lo,
            hi,
            workers: 1,
            k_max: DEFAULT_KMAX,
            output: output.into(),
            checkpoint: None,
            checkpoint_interval: 1,
            resume: false,
            stop_after: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lo < 2 {
            return domain(format!("lo = {} < 2", self.lo));
        }
        if self.hi < self.lo {
            return domain(format!("hi = {} < lo = {}", self.hi, self.lo));
        }
        if self.workers == 0 {
            return domain("workers must be at least 1");
        }
        if self.checkpoint_interval == 0 {
            return domain("checkpoint interval must be at least 1");
        }
        if self.resume && self.checkpoint.is_none() {
            return domain("resume needs a checkpoint path");
        }
        Ok(())
    }

    pub fn chunk_count(&self) -> usize {
        ((self.hi - self.lo) / CHUNK_SIZE + 1) as usize
    }

    fn chunk_bounds(&self, i: usize) -> (u64, u64) {
        let a = self.lo + i as u64 * CHUNK_SIZE;
        (a, (a + CHUNK_SIZE - 1).min(self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub lo: u64,
    pub hi: u64,
    pub k_max: usize,
    pub chunk_size: u64,
    /// Subranges `0..next_chunk` are in the output.
    pub next_chunk: usize,
    pub bytes: u64,
    pub sha256: String,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Checkpoint(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("{} is not a checkpoint: {e}", path.display())))
    }

    fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub chunks_done: usize,
    pub chunk_count: usize,
    pub records_written: u64,
    pub complete: bool,
}

fn chunk_lines(lo: u64, hi: u64, k_max: usize) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for n in lo..=hi {
        serde_json::to_writer(&mut buf, &scan_record(n, k_max)?)?;
        buf.push(b'\n');
    }
    Ok(buf)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Capacity(format!("thread pool: {e}")))
}

/// Runs (or resumes) a scan into `cfg.output`.
pub fn scan_range(cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate()?;
    let total = cfg.chunk_count();
    let mut hasher = Sha256::new();
    let (mut file, mut next) = if cfg.resume {
        let path = cfg.checkpoint.as_ref().expect("validated");
        let ck = Checkpoint::load(path)?;
        if (ck.lo, ck.hi, ck.k_max, ck.chunk_size) != (cfg.lo, cfg.hi, cfg.k_max, CHUNK_SIZE) {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for [{}, {}] k_max {} chunk {}",
                ck.lo, ck.hi, ck.k_max, ck.chunk_size
            )));
        }
        if ck.next_chunk > total {
            return Err(Error::Checkpoint(format!("chunk {} beyond {total}", ck.next_chunk)));
        }
        let mut f = OpenOptions::new()
            .read(true)
            .write(true)
            .open(&cfg.output)
            .map_err(|e| Error::Checkpoint(format!("cannot reopen {}: {e}", cfg.output.display())))?;
        let mut prefix = Vec::new();
        (&mut f).take(ck.bytes).read_to_end(&mut prefix)?;
        if prefix.len() as u64 != ck.bytes {
            return Err(Error::Checkpoint("output shorter than the checkpoint".into()));
        }
        hasher.update(&prefix);
        if hex(&hasher.clone().finalize()) != ck.sha256 {
            return Err(Error::Checkpoint("output does not match the checkpoint hash".into()));
        }
        f.set_len(ck.bytes)?;
        f.seek(SeekFrom::Start(ck.bytes))?;
        (f, ck.next_chunk)
    } else {
        (File::create(&cfg.output)?, 0)
    };
    let mut bytes = file.stream_position()?;
    let pool = pool(cfg.workers)?;
    let budget = cfg.stop_after.unwrap_or(usize::MAX);
    let mut done_now = 0usize;
    let mut records = 0u64;
    let mut out = BufWriter::new(&mut file);
    while next < total && done_now < budget {
        let group = cfg.checkpoint_interval.min(total - next).min(budget - done_now);
        // a batch of at least `workers` subranges keeps every thread busy
        let batch = group.max(cfg.workers).min(total - next).min(budget - done_now);
        let results: Vec<Result<Vec<u8>>> = pool.install(|| {
            (next..next + batch)
                .into_par_iter()
                .map(|i| {
                    let (a, b) = cfg.chunk_bounds(i);
                    chunk_lines(a, b, cfg.k_max)
                })
                .collect()
        });
        for (j, r) in results.into_iter().enumerate() {
            let buf = r?;
            out.write_all(&buf)?;
            hasher.update(&buf);
            bytes += buf.len() as u64;
            let (a, b) = cfg.chunk_bounds(next + j);
            records += b - a + 1;
            done_now += 1;
            let idx = next + j + 1;
            if idx % cfg.checkpoint_interval == 0 || idx == total {
                if let Some(path) = &cfg.checkpoint {
                    out.flush()?;
                    out.get_ref().sync_data()?;
                    Checkpoint {
                        lo: cfg.lo,
                        hi: cfg.hi,
                        k_max: cfg.k_max,
                        chunk_size: CHUNK_SIZE,
                        next_chunk: idx,
                        bytes,
                        sha256: hex(&hasher.clone().finalize()),
                    }
                    .store(path)?;
                }
            }
        }
        next += batch;
    }
    out.flush()?;
    Ok(ScanOutcome { chunks_done: next, chunk_count: total, records_written: records, complete: next == total })
}

/// All records for `[lo, hi]` in memory, ascending.
pub fn scan_records(lo: u64, hi: u64, workers: usize, k_max: usize) -> Result<Vec<ScanRecord>> {
    if lo < 2 || hi < lo {
        return domain(format!("bad range [{lo}, {hi}]"));
    }
    let pool = pool(workers.max(1))?;
    let results: Vec<Result<ScanRecord>> =
        pool.install(|| (lo..=hi).into_par_iter().map(|n| scan_record(n, k_max)).collect());
    results.into_iter().collect()
}

pub fn read_jsonl(text: &str) -> Result<Vec<ScanRecord>> {
    text.lines().map(|l| Ok(serde_json::from_str(l)?)).collect()
}

/// Comma-separated form of records; `None` becomes an empty cell.
pub fn write_records_csv(records: &[ScanRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n", "in_N", "r_star_m", "gamma_count", "discrepancy", "c2_abs", "W2_m", "omega1_m", "Omega1_m",
    ])?;
    fn cell<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(T::to_string).unwrap_or_default()
    }
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.in_n.to_string(),
            cell(&r.r_star_m),
            cell(&r.gamma_count),
            cell(&r.discrepancy),
            cell(&r.c2_abs),
            cell(&r.w2_m),
            cell(&r.omega1_m),
            cell(&r.big_omega1_m),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub bins_per_unit: u32,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    fn of(values: &[f64], lo: f64, bins_per_unit: u32, bins: usize) -> Self {
        let mut h = Histogram { lo, bins_per_unit, counts: vec![0; bins], below: 0, above: 0 };
        for &v in values {
            let b = ((v - lo) * bins_per_unit as f64).floor();
            if b < 0.0 {
                h.below += 1;
            } else if b as usize >= bins {
                h.above += 1;
            } else {
                h.counts[b as usize] += 1;
            }
        }
        h
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_lo", "bin_hi", "count"])?;
        for (i, c) in self.counts.iter().enumerate() {
            let edge = |j: usize| self.lo + j as f64 / self.bins_per_unit as f64;
            w.write_record([format!("{}", edge(i)), format!("{}", edge(i + 1)), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { 0.5 * (v[k - 1] + v[k]) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub x: u64,
    /// `|𝒩(X)|`, counting `n = 2`.
    pub count: u64,
    /// `log r*(n² − 4) / log log n` over `n ∈ 𝒩(X)`, `n ≥ 3`.
    pub exponent_histogram: Histogram,
    pub median_exponent: f64,
    /// `ω₁(n² − 4)·log 2 / log log n`, the same ratio with `r*` replaced by `2^{ω₁}`.
    pub median_omega_exponent: f64,
    pub median_discrepancy_r_star_ge_64: Option<f64>,
    pub median_discrepancy_r_star_le_8: Option<f64>,
}

pub fn census_from_records(x: u64, records: &[ScanRecord]) -> CensusReport {
    let members: Vec<&ScanRecord> = records.iter().filter(|r| r.in_n && r.n <= x).collect();
    let mut exps = Vec::new();
    let mut omegas = Vec::new();
    let mut hi = Vec::new();
    let mut lo = Vec::new();
    for r in members.iter().filter(|r| r.n >= 3) {
        let ll = (r.n as f64).ln().ln();
        let rs = r.r_star_m.unwrap_or(0);
        exps.push((rs as f64).ln() / ll);
        omegas.push(r.omega1_m.unwrap_or(0) as f64 * std::f64::consts::LN_2 / ll);
        if let Some(d) = r.discrepancy {
            if rs >= 64 {
                hi.push(d);
            }
            if rs <= 8 {
                lo.push(d);
            }
        }
    }
    CensusReport {
        x,
        count: members.len() as u64,
        exponent_histogram: Histogram::of(&exps, 0.0, 20, 60),
        median_exponent: median(&exps).unwrap_or(f64::NAN),
        median_omega_exponent: median(&omegas).unwrap_or(f64::NAN),
        median_discrepancy_r_star_ge_64: median(&hi),
        median_discrepancy_r_star_le_8: median(&lo),
    }
}

/// Census of `𝒩 ∩ [2, X]`.
pub fn census(x: u64, workers: usize) -> Result<CensusReport> {
    if x < 100 {
        return domain(format!("X = {x} < 100"));
    }
    Ok(census_from_records(x, &scan_records(2, x, workers, DEFAULT_KMAX)?))
}

fn rational_of(delta: f64) -> Result<BigRational> {
    BigRational::from_float(delta).ok_or_else(|| Error::Domain(format!("δ = {delta} is not finite")))
}

/// Odd `n ∈ 𝒩 ∩ [3, X]` with `|μ̂ₙ(2)| ≥ δ`, largest `r*` first.
pub fn find_asymmetric(x: u64, delta: f64, workers: usize) -> Result<Vec<ScanRecord>> {
    if x < 3 {
        return domain(format!("X = {x} < 3"));
    }
    if !(delta > 0.0) {
        return domain(format!("δ = {delta} must be positive"));
    }
    asymmetric_from_records(&scan_records(3, x, workers, 0)?, delta)
}

pub fn asymmetric_from_records(records: &[ScanRecord], delta: f64) -> Result<Vec<ScanRecord>> {
    let d = rational_of(delta)?;
    let mut out: Vec<ScanRecord> = records
        .iter()
        .filter(|r| r.in_n && r.n % 2 == 1 && r.n >= 3)
        .filter(|r| r.c2_exact().is_some_and(|c| c >= d))
        .cloned()
        .collect();
    out.sort_by(|a, b| b.r_star_m.cmp(&a.r_star_m).then(a.n.cmp(&b.n)));
    Ok(out)
}

/// `n ∈ 𝒩 ∩ [3, X]` with few split primes in `n² − 4`, many points, and discrepancy at least `cutoff`.
pub fn find_singular(
    x: u64,
    max_omega1: u32,
    min_points: u64,
    cutoff: f64,
    workers: usize,
) -> Result<Vec<ScanRecord>> {
    if x < 3 {
        return domain(format!("X = {x} < 3"));
    }
    Ok(singular_from_records(&scan_records(3, x, workers, DEFAULT_KMAX)?, max_omega1, min_points, cutoff))
}

pub fn singular_from_records(
    records: &[ScanRecord],
    max_omega1: u32,
    min_points: u64,
    cutoff: f64,
) -> Vec<ScanRecord> {
    records
        .iter()
        .filter(|r| r.in_n && r.n >= 3)
        .filter(|r| r.big_omega1_m.is_some_and(|w| w <= max_omega1))
        .filter(|r| r.r_star_m.is_some_and(|p| p >= min_points))
        .filter(|r| r.discrepancy.is_some_and(|d| d >= cutoff))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallAnglePrime {
    pub p: u64,
    pub vartheta: f64,
    pub rep: TwoSquaresRep,
}

/// Primes `p ≡ 1 (mod 4)` up to `X` with `ϑ_p ≤ ε`.
pub fn find_small_angle_primes(x: u64, eps: f64) -> Result<Vec<SmallAnglePrime>> {
    if x < 5 {
        return domain(format!("X = {x} < 5"));
    }
    if !(eps > 0.0 && eps <= std::f64::consts::FRAC_PI_4) {
        return domain(format!("ε = {eps} outside (0, π/4]"));
    }
    small_angle_in(5, x, eps)
}

fn small_angle_in(lo: u64, hi: u64, eps: f64) -> Result<Vec<SmallAnglePrime>> {
    let mut out = Vec::new();
    for p in zint::primes_up_to(hi) {
        if p < lo || p % 4 != 1 {
            continue;
        }
        let (t, rep) = zint::vartheta_p(p as u128)?;
        // ϑ_p = π/4 only for p = 2, so the float comparison is unambiguous
        if t <= eps {
            out.push(SmallAnglePrime { p, vartheta: t, rep });
        }
    }
    Ok(out)
}

pub fn write_small_angle_csv(primes: &[SmallAnglePrime], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "x", "y", "vartheta"])?;
    for s in primes {
        w.write_record([s.p.to_string(), s.rep.x.to_string(), s.rep.y.to_string(), format!("{}", s.vartheta)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exceptional {
    pub n: u64,
    pub p1: u64,
    pub p2: u64,
    pub r_star_m: u64,
    pub discrepancy: f64,
    #[serde(skip)]
    pub measure: AngularMeasure,
}

/// `n = p₁p₂ + 2 ≤ X` in `𝒩` for distinct primes `p₁ < p₂` from `primes`.
pub fn construct_exceptional_from(primes: &[u64], x: u64) -> Result<Vec<Exceptional>> {
    let mut ps = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut out = Vec::new();
    for (i, &p1) in ps.iter().enumerate() {
        for &p2 in &ps[i + 1..] {
            let Some(n) = p1.checked_mul(p2).and_then(|v| v.checked_add(2)) else { continue };
            if n > x || !hyperbolic::in_n(n)? {
                continue;
            }
            let measure = angular::mu_n(n)?;
            let r_star = zint::r_star(n as u128 * n as u128 - 4)? as u64;
            let discrepancy = angular::discrepancy(&measure).value;
            out.push(Exceptional { n, p1, p2, r_star_m: r_star, discrepancy, measure });
        }
    }
    out.sort_by_key(|e| (e.n, e.p1));
    Ok(out)
}

/// [`construct_exceptional_from`] over the small-angle primes in `[p_lo, p_hi]`.
pub fn construct_exceptional(eps: f64, p_lo: u64, p_hi: u64, x: u64) -> Result<Vec<Exceptional>> {
    if !(eps > 0.0 && eps <= std::f64::consts::FRAC_PI_4) {
        return domain(format!("ε = {eps} outside (0, π/4]"));
    }
    if p_hi < p_lo {
        return domain(format!("empty prime range [{p_lo}, {p_hi}]"));
    }
    let ps: Vec<u64> = small_angle_in(p_lo, p_hi, eps)?.into_iter().map(|s| s.p).collect();
    construct_exceptional_from(&ps, x)
}

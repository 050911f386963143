//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or checkpoint failure (and a failed
//! `verify`), 2 usage error, 3 domain error, 4 capacity error.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::angular::{self, AngularMeasure, FourierCoefficient};
use crate::density;
use crate::error::{Error, Result};
use crate::hunt::{self, ScanConfig, ScanRecord};
use crate::hyperbolic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hyperlattice", version, about = "Lattice points of PSL2(Z) on hyperbolic circles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render rationals as decimals with 17 significant digits.
    #[arg(long)]
    float: bool,
    /// Log the wall-clock time to stderr.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the angle correspondence for one n or every n ≤ --upto.
    Verify {
        #[arg(long, conflicts_with = "upto", required_unless_present = "upto")]
        n: Option<u64>,
        #[arg(long)]
        upto: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// List the matrices of norm n.
    Gamma {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Atoms of μₙ (or νₘ with --m), one Fourier coefficient with --k, or discrepancy with --kmax.
    Measure {
        #[arg(long, required_unless_present = "m", conflicts_with = "m")]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u128>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, conflicts_with = "k")]
        kmax: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// W₂(m), with m = n² − 4 when given --n.
    W2 {
        #[arg(long, required_unless_present = "m", conflicts_with = "m")]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u128>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every n in [lo, hi].
    Scan {
        #[arg(long, default_value_t = 2)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = hunt::DEFAULT_KMAX)]
        kmax: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Count 𝒩 ∩ [2, X] and summarize the point-count exponent.
    Census {
        #[arg(long)]
        upto: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Odd n with |μ̂ₙ(2)| ≥ δ.
    HuntAsym {
        #[arg(long)]
        upto: u64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        min_points: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        common: Common,
    },
    /// n whose points crowd onto few directions.
    HuntSingular {
        #[arg(long)]
        upto: u64,
        #[arg(long, default_value_t = 3)]
        max_omega1: u32,
        #[arg(long, default_value_t = 8)]
        min_points: u64,
        #[arg(long, default_value_t = hunt::DEFAULT_SINGULAR_CUTOFF)]
        cutoff: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Primes p ≡ 1 (mod 4) with ϑ_p ≤ ε; with --lo/--hi, the products p₁p₂ + 2 in 𝒩 up to --upto.
    Primes {
        #[arg(long)]
        upto: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long, requires = "hi")]
        lo: Option<u64>,
        #[arg(long, requires = "lo")]
        hi: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// The limiting density on an equally spaced grid.
    Density {
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Re γ(i) mod 1 over Γⁿ, or over all n ∈ 𝒩 ∩ [lo, hi].
    Realparts {
        #[arg(long, conflicts_with_all = ["lo", "hi"], required_unless_present_all = ["lo", "hi"])]
        n: Option<u64>,
        #[arg(long, requires = "hi")]
        lo: Option<u64>,
        #[arg(long, requires = "lo")]
        hi: Option<u64>,
        /// Print the Kolmogorov–Smirnov distance to the density instead of the sample.
        #[arg(long)]
        ks: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Degenerate(_) => 3,
        Error::Capacity(_) => 4,
        _ => 1,
    }
}

/// Parses `argv` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Verify { common, .. }
        | Command::Gamma { common, .. }
        | Command::Measure { common, .. }
        | Command::W2 { common, .. }
        | Command::Scan { common, .. }
        | Command::Census { common, .. }
        | Command::HuntAsym { common, .. }
        | Command::HuntSingular { common, .. }
        | Command::Primes { common, .. }
        | Command::Density { common, .. }
        | Command::Realparts { common, .. } => common,
    }
}

fn emit(common: &Common, bytes: &[u8], out: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(p) => File::create(p)?.write_all(bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn fmt_ratio(q: &BigRational, float: bool) -> String {
    if float {
        format!("{:.16e}", q.to_f64().unwrap_or(f64::NAN))
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn json_lines<T: Serialize>(items: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for it in items {
        serde_json::to_writer(&mut buf, it)?;
        buf.push(b'\n');
    }
    Ok(buf)
}

fn records_bytes(records: &[ScanRecord], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => json_lines(records),
        Format::Csv => {
            let mut buf = Vec::new();
            hunt::write_records_csv(records, &mut buf)?;
            Ok(buf)
        }
    }
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn coefficient_row(c: &FourierCoefficient, float: bool) -> Vec<String> {
    match c.exact.as_ref() {
        Some(z) => vec![c.k.to_string(), fmt_ratio(&z.re, float), fmt_ratio(&z.im, float), "true".into()],
        None => vec![c.k.to_string(), format!("{:.16e}", c.approx.re), format!("{:.16e}", c.approx.im), "false".into()],
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let common = common_of(&cmd).clone();
    if common.timestamp {
        let t = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(err, "timestamp: {t}");
    }
    let float = common.float;
    match cmd {
        Command::Verify { n, upto, .. } => {
            let ns: Vec<u64> = match (n, upto) {
                (Some(n), _) => vec![n],
                (None, Some(u)) => {
                    let mut v = Vec::new();
                    for n in 3..=u {
                        if hyperbolic::in_n(n)? {
                            v.push(n);
                        }
                    }
                    v
                }
                _ => unreachable!("clap requires one of --n, --upto"),
            };
            let reports: Vec<hyperbolic::KeypropReport> =
                ns.iter().map(|&n| hyperbolic::verify_keyprop(n)).collect::<Result<_>>()?;
            let bytes = match common.format {
                None => reports.iter().map(|r| format!("{r}\n")).collect::<String>().into_bytes(),
                Some(Format::Json) => json_lines(&reports)?,
                Some(Format::Csv) => csv_bytes(
                    &["n", "pass", "gamma_count", "point_count", "r_star"],
                    &reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.n.to_string(),
                                r.passed().to_string(),
                                r.gamma_count.to_string(),
                                r.point_count.to_string(),
                                r.r_star.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(&common, &bytes, out)?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                let _ = writeln!(err, "{failed} of {} failed", reports.len());
                return Ok(1);
            }
            Ok(0)
        }
        Command::Gamma { n, .. } => {
            let gs = hyperbolic::enumerate_gamma_fast(n)?;
            let rows: Vec<Vec<String>> = gs
                .iter()
                .map(|g| {
                    let x = g.x_forms();
                    vec![g.a.to_string(), g.b.to_string(), g.c.to_string(), g.d.to_string(), x.x3.to_string(), x.x2.to_string()]
                })
                .collect();
            let bytes = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_bytes(&["a", "b", "c", "d", "x3", "x2"], &rows)?,
                Format::Json => json_lines(
                    &gs.iter()
                        .map(|g| {
                            let x = g.x_forms();
                            json!({"a": g.a, "b": g.b, "c": g.c, "d": g.d, "x3": x.x3.to_string(), "x2": x.x2.to_string()})
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::Measure { n, m, k, kmax, .. } => {
            let mu: AngularMeasure = match (n, m) {
                (Some(n), _) => angular::mu_n(n)?,
                (None, Some(m)) => angular::nu_n(m)?,
                _ => unreachable!("clap requires one of --n, --m"),
            };
            let format = common.format.unwrap_or(Format::Csv);
            let bytes = if let Some(k) = k {
                let c = mu.fourier(k);
                match format {
                    Format::Csv => csv_bytes(&["k", "re", "im", "exact"], &[coefficient_row(&c, float)])?,
                    Format::Json => {
                        let row = coefficient_row(&c, float);
                        let mut s = serde_json::to_vec(&json!({"k": k, "re": row[1], "im": row[2], "exact": c.exact.as_ref().is_some()}))?;
                        s.push(b'\n');
                        s
                    }
                }
            } else if let Some(kmax) = kmax {
                let d = angular::discrepancy(&mu);
                let bound = angular::erdos_turan_bound(&mu, kmax)?;
                match format {
                    Format::Csv => csv_bytes(
                        &["atoms", "discrepancy", "erdos_turan_bound", "kmax"],
                        &[vec![mu.len().to_string(), d.value.to_string(), bound.to_string(), kmax.to_string()]],
                    )?,
                    Format::Json => {
                        let mut s = serde_json::to_vec(&json!({"atoms": mu.len(), "discrepancy": d.value, "erdos_turan_bound": bound, "kmax": kmax}))?;
                        s.push(b'\n');
                        s
                    }
                }
            } else {
                match format {
                    Format::Csv => {
                        let mut buf = Vec::new();
                        mu.write_csv(&mut buf)?;
                        buf
                    }
                    Format::Json => {
                        let mut s = mu.to_json()?.into_bytes();
                        s.push(b'\n');
                        s
                    }
                }
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::W2 { n, m, .. } => {
            let m = match (n, m) {
                (Some(n), _) if n >= 3 => n as u128 * n as u128 - 4,
                (Some(n), _) => return Err(Error::Domain(format!("n = {n}: m = n² − 4 must be positive"))),
                (None, Some(m)) => m,
                _ => unreachable!("clap requires one of --n, --m"),
            };
            let w = angular::w2(m)?;
            let s = fmt_ratio(&w, float);
            let bytes = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_bytes(&["m", "W2"], &[vec![m.to_string(), s]])?,
                Format::Json => json_lines(&[json!({"m": m.to_string(), "W2": s})])?,
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::Scan { lo, hi, workers, kmax, checkpoint, resume, .. } => {
            let format = common.format.unwrap_or(Format::Json);
            match (&common.out, format) {
                (Some(path), Format::Json) => {
                    let mut cfg = ScanConfig::new(lo, hi, path.clone());
                    cfg.workers = workers;
                    cfg.k_max = kmax;
                    cfg.checkpoint = checkpoint;
                    cfg.resume = resume;
                    let o = hunt::scan_range(&cfg)?;
                    let _ = writeln!(err, "scan: {} of {} subranges done", o.chunks_done, o.chunk_count);
                }
                _ => {
                    if checkpoint.is_some() {
                        return Err(Error::Domain("--checkpoint needs --out and JSON output".into()));
                    }
                    let recs = hunt::scan_records(lo, hi, workers, kmax)?;
                    emit(&common, &records_bytes(&recs, format)?, out)?;
                }
            }
            Ok(0)
        }
        Command::Census { upto, workers, .. } => {
            let c = hunt::census(upto, workers)?;
            let bytes = match common.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut s = serde_json::to_vec(&c)?;
                    s.push(b'\n');
                    s
                }
                Format::Csv => {
                    let mut buf = Vec::new();
                    c.exponent_histogram.write_csv(&mut buf)?;
                    buf
                }
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::HuntAsym { upto, delta, min_points, workers, .. } => {
            let recs: Vec<ScanRecord> = hunt::find_asymmetric(upto, delta, workers)?
                .into_iter()
                .filter(|r| r.r_star_m.unwrap_or(0) >= min_points)
                .collect();
            emit(&common, &records_bytes(&recs, common.format.unwrap_or(Format::Json))?, out)?;
            Ok(0)
        }
        Command::HuntSingular { upto, max_omega1, min_points, cutoff, workers, .. } => {
            let recs = hunt::find_singular(upto, max_omega1, min_points, cutoff, workers)?;
            emit(&common, &records_bytes(&recs, common.format.unwrap_or(Format::Json))?, out)?;
            Ok(0)
        }
        Command::Primes { upto, eps, lo, hi, .. } => {
            let format = common.format.unwrap_or(Format::Csv);
            let bytes = if let (Some(lo), Some(hi)) = (lo, hi) {
                let found = hunt::construct_exceptional(eps, lo, hi, upto)?;
                match format {
                    Format::Json => json_lines(&found)?,
                    Format::Csv => csv_bytes(
                        &["n", "p1", "p2", "r_star_m", "discrepancy"],
                        &found
                            .iter()
                            .map(|e| {
                                vec![e.n.to_string(), e.p1.to_string(), e.p2.to_string(), e.r_star_m.to_string(), e.discrepancy.to_string()]
                            })
                            .collect::<Vec<_>>(),
                    )?,
                }
            } else {
                let ps = hunt::find_small_angle_primes(upto, eps)?;
                match format {
                    Format::Json => json_lines(&ps)?,
                    Format::Csv => {
                        let mut buf = Vec::new();
                        hunt::write_small_angle_csv(&ps, &mut buf)?;
                        buf
                    }
                }
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::Density { grid, eps, .. } => {
            let prof = density::DensityProfile::new(grid, eps)?;
            let bytes = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    prof.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => {
                    let mut s = serde_json::to_vec(&prof)?;
                    s.push(b'\n');
                    s
                }
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
        Command::Realparts { n, lo, hi, ks, .. } => {
            let parts = match (n, lo, hi) {
                (Some(n), _, _) => density::real_parts_mod1(n)?,
                (None, Some(lo), Some(hi)) => density::aggregated_real_parts(lo, hi)?,
                _ => unreachable!("clap requires --n or --lo/--hi"),
            };
            let format = common.format.unwrap_or(Format::Csv);
            let bytes = if ks {
                let sample: Vec<f64> = parts.iter().map(|p| p.to_f64()).collect();
                let d = density::ks_statistic(&sample, density::p_cdf)?;
                match format {
                    Format::Csv => csv_bytes(&["count", "ks"], &[vec![sample.len().to_string(), d.to_string()]])?,
                    Format::Json => json_lines(&[json!({"count": sample.len(), "ks": d})])?,
                }
            } else {
                match format {
                    Format::Csv => {
                        let mut buf = Vec::new();
                        density::write_real_parts_csv(&parts, &mut buf)?;
                        buf
                    }
                    Format::Json => json_lines(
                        &parts
                            .iter()
                            .map(|p| {
                                json!({"n": p.n, "x3": p.x3.to_string(), "x2": p.x2.to_string(),
                                   "real_part": format!("{}/{}", p.frac.numer(), p.frac.denom()), "real_part_float": p.to_f64()})
                            })
                            .collect::<Vec<_>>(),
                    )?,
                }
            };
            emit(&common, &bytes, out)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hyperlattice").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn documented_commands() {
        let (code, out, _) = call(&["verify", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("pass") && out.contains("8 matrices over 4 angles"), "{out}");
        let (code, _, err) = call(&["measure", "--n", "4"]);
        assert_eq!(code, 3);
        assert!(err.contains("4 ∉ 𝒩"), "{err}");
        let (code, out, _) = call(&["density", "--grid", "101"]);
        assert_eq!(code, 0);
        let second = out.lines().nth(1).unwrap();
        assert!(second.starts_with("0,1.003741873"), "{second}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["measure", "--n", "6", "--bogus"]).0, 2);
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["verify", "--n", "10002"]).0, 4);
        assert_eq!(call(&["census", "--upto", "50"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn exact_and_float_rendering() {
        let (_, out, _) = call(&["w2", "--m", "25"]);
        assert_eq!(out, "m,W2\n25,11/25\n");
        let (_, out, _) = call(&["w2", "--m", "25", "--float"]);
        assert_eq!(out, "m,W2\n25,4.4000000000000000e-1\n");
        let (_, out, _) = call(&["measure", "--n", "3", "--k", "-2"]);
        assert_eq!(out, "k,re,im,exact\n-2,3/5,0/1,true\n");
    }
}

//! The limiting density of `Re γ(i) mod 1` and goodness-of-fit against it.
//!
//! `p(x) = (1/π)·Σ_k 1/(1 + (x+k)²) = cosh π·sinh π / (cosh²π − cos²πx)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::hyperbolic;

/// Closed form of the density on `[0, 1]`.
pub fn p_closed(x: f64) -> f64 {
    let (s, c) = (PI.sinh(), PI.cosh());
    let sx = (PI * x).sin();
    // cosh²π − cos²πx = sinh²π + sin²πx
    c * s / (s * s + sx * sx)
}

/// Symmetric partial sum of the defining series until the tail estimate drops below `tol`.
///
/// The tail beyond `|k| > K` is replaced by its midpoint-rule integral; what
/// remains is bounded by `1/(6π(K−1)³)`.
pub fn p_series(x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return domain(format!("tol = {tol} must be positive"));
    }
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("x = {x} outside [0, 1]"));
    }
    let mut kmax: u64 = 2;
    while 1.0 / (6.0 * PI * ((kmax - 1) as f64).powi(3)) >= tol {
        kmax *= 2;
    }
    let term = |t: f64| 1.0 / (1.0 + t * t);
    // small terms first
    let mut sum = 0.0;
    for k in (1..=kmax).rev() {
        let k = k as f64;
        sum += term(x + k) + term(x - k);
    }
    sum += term(x);
    let half = kmax as f64 + 0.5;
    let tail = (FRAC_PI_2 - (x + half).atan()) + (FRAC_PI_2 - (half - x).atan());
    Ok((sum + tail) / PI)
}

/// `F(x) = ∫₀ˣ p` on `[0, 1]`.
pub fn p_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x == 0.5 {
        return 0.5;
    }
    let base = ((PI * x).tan() / PI.tanh()).atan() / PI;
    if x > 0.5 {
        base + 1.0
    } else {
        base
    }
}

/// Inverse of [`p_cdf`] on `[0, 1]`.
pub fn p_quantile(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return domain(format!("q = {q} outside [0, 1]"));
    }
    if q == 0.0 || q == 1.0 {
        return Ok(q);
    }
    if q == 0.5 {
        return Ok(0.5);
    }
    let base = ((PI * q).tan() * PI.tanh()).atan() / PI;
    Ok(if q > 0.5 { base + 1.0 } else { base })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute error `eps`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, eps, 40)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

impl DensityProfile {
    /// Closed-form values on `points` equally spaced nodes of `[0, 1]`,
    /// checked against the series and against unit total mass.
    pub fn new(points: usize, tol: f64) -> Result<Self> {
        if points < 2 {
            return domain(format!("a grid needs at least 2 points, got {points}"));
        }
        let mut grid = Vec::with_capacity(points);
        let mut values = Vec::with_capacity(points);
        for i in 0..points {
            let x = i as f64 / (points - 1) as f64;
            let v = p_closed(x);
            let s = p_series(x, tol)?;
            if (v - s).abs() >= 2.0 * tol {
                return Err(Error::Degenerate(format!("series and closed form differ by {} at {x}", v - s)));
            }
            grid.push(x);
            values.push(v);
        }
        let mass = integrate(&p_closed, 0.0, 1.0, 1e-12);
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::Degenerate(format!("total mass {mass}")));
        }
        Ok(DensityProfile { grid, values, tolerance: 2.0 * tol })
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "p"])?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            w.write_record([format!("{x}"), format!("{v}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `Re γ(i) mod 1` for one matrix, kept as the pair `(x₃, x₂)` and the reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealPart {
    pub n: u64,
    pub x3: i128,
    pub x2: i128,
    pub frac: Ratio<i128>,
}

impl RealPart {
    pub fn to_f64(&self) -> f64 {
        self.frac.to_f64().unwrap_or(f64::NAN)
    }
}

fn mod1(q: Ratio<i128>) -> Ratio<i128> {
    let f = q - q.floor();
    debug_assert!(f >= Ratio::zero() && f < Ratio::from_integer(1));
    f
}

/// `{x₃/x₂ mod 1 : γ ∈ Γⁿ}`, one entry per matrix, sorted.
pub fn real_parts_mod1(n: u64) -> Result<Vec<RealPart>> {
    if n < 3 {
        return domain(format!("n = {n}: real parts are taken for n ≥ 3"));
    }
    if !hyperbolic::in_n(n)? {
        return domain(format!("{n} ∉ 𝒩"));
    }
    let mut out: Vec<RealPart> = hyperbolic::enumerate_gamma_fast(n)?
        .into_iter()
        .map(|g| {
            let x = g.x_forms();
            RealPart { n, x3: x.x3, x2: x.x2, frac: mod1(Ratio::new(x.x3, x.x2)) }
        })
        .collect();
    out.sort_by(|a, b| a.frac.cmp(&b.frac).then((a.x3, a.x2).cmp(&(b.x3, b.x2))));
    Ok(out)
}

/// Real parts over all `n ∈ 𝒩 ∩ [lo, hi]` with `n ≥ 3`, in ascending `n`.
pub fn aggregated_real_parts(lo: u64, hi: u64) -> Result<Vec<RealPart>> {
    let lo = lo.max(3);
    if hi < lo {
        return Ok(Vec::new());
    }
    let chunks: Vec<Result<Vec<RealPart>>> = (lo..=hi)
        .into_par_iter()
        .map(|n| if hyperbolic::in_n(n)? { real_parts_mod1(n) } else { Ok(Vec::new()) })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

pub fn write_real_parts_csv(parts: &[RealPart], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "x3", "x2", "real_part_float"])?;
    for p in parts {
        w.write_record([p.n.to_string(), p.x3.to_string(), p.x2.to_string(), format!("{}", p.to_f64())])?;
    }
    w.flush()?;
    Ok(())
}

/// `sup |F_N − F|` over the sample, taking both one-sided limits at each jump.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return domain("empty sample");
    }
    let mut s: Vec<f64> = sample.to_vec();
    if s.iter().any(|x| x.is_nan()) {
        return domain("sample contains NaN");
    }
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

//! Elements of PSL₂(ℤ) with fixed Frobenius norm and their orbit points.
//!
//! For `γ = (a b; c d)` the point `γ(i)` sits at hyperbolic distance
//! `arccosh(n/2)` from `i`, where `n = a²+b²+c²+d²`. In the disk model its
//! direction is `(2x₃, x₄)` with `x₃ = ac+bd` and `x₄ = a²+b²−c²−d²`, an
//! integer point on the circle of radius² `n² − 4`. The substitution
//! `y₁ = a+d, y₂ = b−c, y₃ = b+c, y₄ = a−d` puts `Γⁿ` in bijection with
//! parity-compatible pairs of points on the circles `n+2` and `n−2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::zint::{self, Factorization};

/// Largest `n` accepted by [`enumerate_gamma_bruteforce`].
pub const BRUTE_FORCE_CAP: u64 = 10_000;

/// A determinant-one integer matrix `(a b; c d)`, stored as the PSL₂
/// representative whose first nonzero entry is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// The quadratic forms `x₁ = a²+b²`, `x₂ = c²+d²`, `x₃ = ac+bd`, `x₄ = x₁−x₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XForms {
    pub x1: i128,
    pub x2: i128,
    pub x3: i128,
    pub x4: i128,
}

/// The linear forms `y₁ = a+d`, `y₂ = b−c`, `y₃ = b+c`, `y₄ = a−d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YForms {
    pub y1: i64,
    pub y2: i64,
    pub y3: i64,
    pub y4: i64,
}

/// An integer point with even first coordinate on `x² + y² = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EvenXPoint {
    pub x: i128,
    pub y: i128,
    pub m: u128,
}

impl GammaMatrix {
    /// Validates `ad − bc = 1` and canonicalizes the sign.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return domain(format!("({a} {b}; {c} {d}) has determinant {det}, not 1"));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(a: i64, b: i64, c: i64, d: i64) -> Self {
        let lead = [a, b, c, d].into_iter().find(|&v| v != 0).unwrap_or(0);
        if lead < 0 {
            Self { a: -a, b: -b, c: -c, d: -d }
        } else {
            Self { a, b, c, d }
        }
    }

    pub const IDENTITY: GammaMatrix = GammaMatrix { a: 1, b: 0, c: 0, d: 1 };

    pub fn norm_sq(&self) -> u128 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|&v| (v as i128 * v as i128) as u128)
            .sum()
    }

    pub fn x_forms(&self) -> XForms {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let x1 = a * a + b * b;
        let x2 = c * c + d * d;
        XForms { x1, x2, x3: a * c + b * d, x4: x1 - x2 }
    }

    pub fn y_forms(&self) -> YForms {
        YForms {
            y1: self.a + self.d,
            y2: self.b - self.c,
            y3: self.b + self.c,
            y4: self.a - self.d,
        }
    }

    /// Inverts [`GammaMatrix::y_forms`]; `None` unless `y₁ ≡ y₄` and `y₂ ≡ y₃ (mod 2)`.
    ///
    /// Panics if the quadruple does not satisfy `(y₁²+y₂²) − (y₃²+y₄²) = 4`,
    /// which is what makes the determinant one.
    pub fn from_y_forms(y: YForms) -> Option<Self> {
        if (y.y1 - y.y4).rem_euclid(2) != 0 || (y.y2 - y.y3).rem_euclid(2) != 0 {
            return None;
        }
        let a = (y.y1 + y.y4) / 2;
        let b = (y.y2 + y.y3) / 2;
        let c = (y.y3 - y.y2) / 2;
        let d = (y.y1 - y.y4) / 2;
        Some(Self::new(a, b, c, d).expect("y-quadruple off the two circles"))
    }

    /// `γ(i) = (x₃ + i)/x₂`, returned as the integers `(x₃, x₂)`.
    pub fn gamma_point(&self) -> (i128, i128) {
        let x = self.x_forms();
        (x.x3, x.x2)
    }

    /// The integer direction `(2x₃, x₄)` of `γ(i)` seen from the disk center.
    pub fn disk_point(&self) -> Result<EvenXPoint> {
        let n = self.norm_sq();
        if n == 2 {
            return Err(Error::Degenerate(
                "norm 2 maps i to the disk center; the angle is undefined".into(),
            ));
        }
        let x = self.x_forms();
        Ok(EvenXPoint { x: 2 * x.x3, y: x.x4, m: n * n - 4 })
    }
}

impl fmt::Display for GammaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `ρ(γ(i), i) = arccosh(n/2)`.
pub fn hyperbolic_distance(n: u64) -> Result<f64> {
    if n < 2 {
        return domain(format!("norm {n} < 2 does not occur"));
    }
    Ok((n as f64 / 2.0).acosh())
}

/// Factorizations of `n − 2` and `n + 2`; `None` stands for the zero `n − 2 = 0`.
pub fn factor_neighbors(n: u64) -> Result<(Option<Factorization>, Factorization)> {
    if n < 2 {
        return domain(format!("n = {n} < 2"));
    }
    let minus = if n == 2 { None } else { Some(zint::factor(n as u128 - 2)?) };
    Ok((minus, zint::factor(n as u128 + 2)?))
}

/// Membership in 𝒩, decided as `n² − 4` being a sum of two squares.
pub fn in_n(n: u64) -> Result<bool> {
    let (minus, plus) = factor_neighbors(n)?;
    Ok(match minus {
        None => true,
        Some(minus) => zint::is_sum_two_squares_factored(&minus.mul(&plus)),
    })
}

/// `Γⁿ` by looping over `a, b, c` and solving `ad − bc = 1` for `d`.
pub fn enumerate_gamma_bruteforce(n: u64) -> Result<Vec<GammaMatrix>> {
    if n < 2 {
        return domain(format!("n = {n} < 2"));
    }
    if n > BRUTE_FORCE_CAP {
        return Err(Error::Capacity(format!(
            "brute force is capped at n = {BRUTE_FORCE_CAP}; use enumerate_gamma_fast"
        )));
    }
    let n = n as i64;
    let s = (n as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in -s..=s {
        let ra = n - a * a;
        if ra < 0 {
            continue;
        }
        for b in -s..=s {
            let rb = ra - b * b;
            if rb < 0 {
                continue;
            }
            for c in -s..=s {
                let rc = rb - c * c;
                if rc < 0 {
                    continue;
                }
                if a != 0 {
                    if (1 + b * c) % a == 0 {
                        let d = (1 + b * c) / a;
                        if d * d == rc {
                            out.push(GammaMatrix::canonical(a, b, c, d));
                        }
                    }
                } else if b * c == -1 {
                    let d = (rc as f64).sqrt().round() as i64;
                    if d * d == rc {
                        out.push(GammaMatrix::canonical(a, b, c, d));
                        out.push(GammaMatrix::canonical(a, b, c, -d));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `Γⁿ` from pairs of points on the circles of radius² `n + 2` and `n − 2`.
pub fn enumerate_gamma_fast(n: u64) -> Result<Vec<GammaMatrix>> {
    let (minus, plus) = factor_neighbors(n)?;
    enumerate_gamma_factored(n, minus.as_ref(), &plus)
}

/// [`enumerate_gamma_fast`] with the neighbor factorizations supplied.
pub fn enumerate_gamma_factored(
    n: u64,
    minus: Option<&Factorization>,
    plus: &Factorization,
) -> Result<Vec<GammaMatrix>> {
    let outer = zint::repr_two_squares_factored(n as u128 + 2, plus)?;
    let inner = match minus {
        None => zint::repr_two_squares(0)?,
        Some(f) => zint::repr_two_squares_factored(n as u128 - 2, f)?,
    };
    let mut out = Vec::with_capacity(outer.len() * inner.len() / 4);
    for p in &outer {
        for q in &inner {
            let y = YForms { y1: p.x as i64, y2: p.y as i64, y3: q.x as i64, y4: q.y as i64 };
            if let Some(g) = GammaMatrix::from_y_forms(y) {
                out.push(g);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Integer points with even `x` on `x² + y² = m`.
pub fn lattice_points_even_x(m: u128) -> Result<Vec<EvenXPoint>> {
    Ok(zint::repr_two_squares(m)?
        .into_iter()
        .filter(|r| r.x % 2 == 0)
        .map(|r| EvenXPoint { x: r.x, y: r.y, m })
        .collect())
}

/// Outcome of comparing `{disk_point(γ) : γ ∈ Γⁿ}` with the even-`x` points on `n² − 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeypropReport {
    pub n: u64,
    pub gamma_count: usize,
    pub point_count: usize,
    pub r_star: u128,
    /// Disk points not found among the even-x lattice points.
    pub extra: Vec<(i128, i128)>,
    /// Even-x lattice points hit by no matrix.
    pub missing: Vec<(i128, i128)>,
    /// Points whose matrix multiplicity differs from 2.
    pub irregular: Vec<((i128, i128), usize)>,
}

impl KeypropReport {
    pub fn sets_equal(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }

    pub fn multiplicity_ok(&self) -> bool {
        self.irregular.is_empty() && self.gamma_count as u128 == 2 * self.r_star
    }

    pub fn passed(&self) -> bool {
        self.sets_equal() && self.multiplicity_ok()
    }
}

impl fmt::Display for KeypropReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(
            f,
            "n={} {status}: {} matrices over {} angles (r*={})",
            self.n, self.gamma_count, self.point_count, self.r_star
        )?;
        if let Some(p) = self.extra.first() {
            write!(f, "; unexpected disk point {p:?}")?;
        }
        if let Some(p) = self.missing.first() {
            write!(f, "; lattice point {p:?} not reached")?;
        }
        if let Some((p, k)) = self.irregular.first() {
            write!(f, "; point {p:?} hit {k} times")?;
        }
        Ok(())
    }
}

/// Checks the hyperbolic/Euclidean angle correspondence at `n` by brute force.
pub fn verify_keyprop(n: u64) -> Result<KeypropReport> {
    if n < 3 {
        return domain(format!("n = {n}: angles are defined only for n ≥ 3"));
    }
    if !in_n(n)? {
        return domain(format!("{n} ∉ 𝒩"));
    }
    let gammas = enumerate_gamma_bruteforce(n)?;
    keyprop_report(n, &gammas)
}

pub(crate) fn keyprop_report(n: u64, gammas: &[GammaMatrix]) -> Result<KeypropReport> {
    let m = n as u128 * n as u128 - 4;
    let mut hits: BTreeMap<(i128, i128), usize> = BTreeMap::new();
    for g in gammas {
        let p = g.disk_point()?;
        *hits.entry((p.x, p.y)).or_default() += 1;
    }
    let lattice: Vec<(i128, i128)> =
        lattice_points_even_x(m)?.into_iter().map(|p| (p.x, p.y)).collect();
    let r_star = zint::r_star(m)?;
    let extra = hits.keys().filter(|p| lattice.binary_search(p).is_err()).copied().collect();
    let missing = lattice.iter().filter(|p| !hits.contains_key(p)).copied().collect();
    let irregular = hits.iter().filter(|(_, &k)| k != 2).map(|(&p, &k)| (p, k)).collect();
    Ok(KeypropReport {
        n,
        gamma_count: gammas.len(),
        point_count: hits.len(),
        r_star,
        extra,
        missing,
        irregular,
    })
}

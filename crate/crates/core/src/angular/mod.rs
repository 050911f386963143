//! Atomic angular measures on the circle and their statistics.
//!
//! Atoms sit at exact integer directions and carry exact rational weights.
//! Even Fourier coefficients of such atoms are Gaussian rationals
//! (`e^{2iθ} = z²/|z|²`), so they are computed exactly; odd coefficients are
//! exact only when a symmetry forces them to vanish.

pub mod dd;
mod fourier;
mod io;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::hyperbolic::{self, GammaMatrix};
use crate::zint::{self, GaussInt};
use dd::Dd;

pub use fourier::{
    chi2, claim1_check, u_k, u_k_multiplicative, v_k, w2, w2_direct, w2_multiplicative, w_k,
    w_k_multiplicative, Chi2Value,
};
pub use io::MeasureRow;
pub(crate) use fourier::w2_from_factors;

/// A Gaussian rational `re + i·im`.
pub type ExactComplex = Complex<BigRational>;

/// Largest frequency used by [`symmetry_defect`] for the quarter-turn test.
pub const QUARTER_DEFECT_KMAX: i64 = 12;

/// Absolute error budget of discrepancy values from the double-double arc lengths.
pub const DISCREPANCY_TOLERANCE: f64 = 1e-18;

/// One atom: an integer point and its mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub dir: GaussInt,
    pub weight: BigRational,
}

impl Atom {
    /// Angle as a fraction of the full turn, in `[0, 1)`.
    pub fn turn(&self) -> Dd {
        dd::turn_fraction(self.dir.re, self.dir.im)
    }

    /// Angle in radians, in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        (self.turn() * dd::TAU).to_f64()
    }
}

/// A finite atomic probability measure on the circle.
///
/// Atoms have pairwise distinct primitive directions and are kept in
/// counterclockwise order starting from angle 0; the weights sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularMeasure {
    atoms: Vec<Atom>,
}

fn half_plane(z: GaussInt) -> u8 {
    if z.im > 0 || (z.im == 0 && z.re > 0) {
        0
    } else {
        1
    }
}

/// Exact comparison of directions by angle in `[0, 2π)`.
pub fn angle_cmp(a: GaussInt, b: GaussInt) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| {
        let lhs = a.re.checked_mul(b.im).expect("direction too large");
        let rhs = a.im.checked_mul(b.re).expect("direction too large");
        rhs.cmp(&lhs)
    })
}

fn ratio_to_dd(r: &BigRational) -> Dd {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    let rest = r - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
    let (hi, lo) = (hi, rest.to_f64().unwrap_or(0.0));
    Dd::from_f64(hi) + Dd::from_f64(lo)
}

pub(crate) fn complex_abs(z: &ExactComplex) -> f64 {
    let re = z.re.to_f64().unwrap_or(f64::NAN);
    let im = z.im.to_f64().unwrap_or(f64::NAN);
    re.hypot(im)
}

impl AngularMeasure {
    /// Builds a measure from weighted integer points, merging points on the
    /// same ray; a merged atom keeps the shortest of its points.
    pub fn from_weighted(items: impl IntoIterator<Item = (GaussInt, BigRational)>) -> Result<Self> {
        let mut merged: BTreeMap<(i128, i128), (GaussInt, BigRational)> = BTreeMap::new();
        for (dir, w) in items {
            if dir.is_zero() {
                return domain("atom at the zero vector has no direction");
            }
            if !w.is_positive() {
                return domain(format!("atom weight {w} is not positive"));
            }
            let d = dir.reduced();
            let slot = merged.entry((d.re, d.im)).or_insert_with(|| (dir, BigRational::zero()));
            if (dir.norm(), dir) < (slot.0.norm(), slot.0) {
                slot.0 = dir;
            }
            slot.1 += w;
        }
        let total: BigRational = merged.values().map(|v| &v.1).sum();
        if !total.is_one() {
            return domain(format!("weights sum to {total}, not 1"));
        }
        let mut atoms: Vec<Atom> = merged.into_values().map(|(dir, weight)| Atom { dir, weight }).collect();
        atoms.sort_by(|a, b| angle_cmp(a.dir, b.dir));
        Ok(Self { atoms })
    }

    /// Counting measure of a nonempty multiset of points, normalized to mass one.
    pub fn from_points(points: impl IntoIterator<Item = GaussInt>) -> Result<Self> {
        let points: Vec<GaussInt> = points.into_iter().collect();
        if points.is_empty() {
            return domain("empty point set");
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(points.len()));
        Self::from_weighted(points.into_iter().map(|p| (p, w.clone())))
    }

    pub fn dirac(dir: GaussInt) -> Result<Self> {
        Self::from_points([dir])
    }

    /// Equal masses at `n` equally spaced integer directions, `n ∈ {1, 2, 4, 8}`.
    pub fn uniform_grid(n: usize) -> Result<Self> {
        let dirs: &[(i128, i128)] = match n {
            1 => &[(1, 0)],
            2 => &[(1, 0), (-1, 0)],
            4 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            8 => &[(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)],
            _ => return domain(format!("no {n}-gon has all vertices at integer directions")),
        };
        Self::from_points(dirs.iter().map(|&(x, y)| GaussInt::new(x, y)))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass on the ray through `dir`.
    pub fn weight_of(&self, dir: GaussInt) -> Option<&BigRational> {
        let d = dir.reduced();
        self.atoms
            .binary_search_by(|a| angle_cmp(a.dir.reduced(), d))
            .ok()
            .map(|i| &self.atoms[i].weight)
    }

    /// Image under `z ↦ u·z` for the map given on directions.
    fn is_invariant_under(&self, map: impl Fn(GaussInt) -> GaussInt) -> bool {
        self.atoms.iter().all(|a| self.weight_of(map(a.dir)) == Some(&a.weight))
    }

    /// Invariance under `(x, y) ↦ (x, −y)`.
    pub fn is_reflection_symmetric(&self) -> bool {
        self.is_invariant_under(GaussInt::conj)
    }

    pub fn is_antipodal_symmetric(&self) -> bool {
        self.is_invariant_under(|z| -z)
    }

    pub fn is_quarter_turn_symmetric(&self) -> bool {
        self.is_invariant_under(|z| z.rotate(1))
    }

    /// `μ̂(k) = Σ w·e^{ikθ}`.
    pub fn fourier(&self, k: i64) -> FourierCoefficient {
        if k % 2 == 0 {
            let half = (k.unsigned_abs() / 2) as u32;
            let mut acc = ExactComplex::zero();
            for a in &self.atoms {
                let d = a.dir.reduced();
                let z = if k >= 0 { d } else { d.conj() };
                let num = (z * z).pow_big(half);
                let den = BigInt::from(d.norm()).pow(half);
                let w = &a.weight;
                acc.re += BigRational::new(num.re * w.numer(), den.clone() * w.denom());
                acc.im += BigRational::new(num.im * w.numer(), den * w.denom());
            }
            return FourierCoefficient::exact(k, acc);
        }
        if self.is_antipodal_symmetric() {
            return FourierCoefficient::exact(k, ExactComplex::zero());
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for a in &self.atoms {
            // k·turn mod 1 in double-double keeps the phase accurate for large k
            let phase = a.turn() * Dd::from_f64(k as f64);
            let frac = phase - Dd::from_f64(phase.hi.floor());
            let t = (frac * dd::TAU).to_f64();
            let w = a.weight.to_f64().unwrap_or(f64::NAN);
            re += w * t.cos();
            im += w * t.sin();
        }
        FourierCoefficient { k, exact: None, approx: Complex::new(re, im) }
    }
}

/// A Fourier coefficient: exact when it is a Gaussian rational, always with
/// a floating-point rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficient {
    pub k: i64,
    pub exact: Option<ExactComplex>,
    pub approx: Complex<f64>,
}

impl FourierCoefficient {
    pub(crate) fn exact(k: i64, value: ExactComplex) -> Self {
        let approx = Complex::new(
            value.re.to_f64().unwrap_or(f64::NAN),
            value.im.to_f64().unwrap_or(f64::NAN),
        );
        Self { k, exact: Some(value), approx }
    }

    pub fn abs(&self) -> f64 {
        match &self.exact {
            Some(z) => complex_abs(z),
            None => self.approx.norm(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(|z| z.is_zero())
    }
}

/// `μₙ`: the angles `θ(γ)` for `γ ∈ Γⁿ`, weighted by multiplicity.
pub fn mu_n(n: u64) -> Result<AngularMeasure> {
    if n == 2 {
        return Err(Error::Degenerate("n = 2: all of Γ² fixes i".into()));
    }
    if n < 2 || !hyperbolic::in_n(n)? {
        return domain(format!("{n} ∉ 𝒩"));
    }
    mu_from_gammas(&hyperbolic::enumerate_gamma_fast(n)?)
}

pub fn mu_from_gammas(gammas: &[GammaMatrix]) -> Result<AngularMeasure> {
    let mut dirs = Vec::with_capacity(gammas.len());
    for g in gammas {
        let p = g.disk_point()?;
        dirs.push(GaussInt::new(p.x, p.y));
    }
    AngularMeasure::from_points(dirs)
}

/// `νₘ`: uniform mass on the directions of all representations of `m`.
pub fn nu_n(m: u128) -> Result<AngularMeasure> {
    if m == 0 {
        return domain("m = 0: the single point (0, 0) has no direction");
    }
    let reps = zint::repr_two_squares(m)?;
    if reps.is_empty() {
        return domain(format!("{m} is not a sum of two squares"));
    }
    AngularMeasure::from_points(reps.into_iter().map(|r| r.gauss()))
}

/// Supremum over arcs `I` of `|μ(I) − |I|/2π|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub value: f64,
    /// The same value in double-double precision.
    pub precise: Dd,
    pub tolerance: f64,
}

/// With `g(t) = μ([0, t]) − t` on the unit-length circle, every arc's
/// deviation is a difference of two values of `g` taken with the
/// appropriate one-sided limits, so the supremum is `sup g − inf g`; both
/// extremes occur at atoms.
pub fn discrepancy(mu: &AngularMeasure) -> Discrepancy {
    let mut cum = BigRational::zero();
    let mut hi: Option<Dd> = None;
    let mut lo: Option<Dd> = None;
    for a in &mu.atoms {
        let t = a.turn();
        let before = ratio_to_dd(&cum) - t;
        cum += &a.weight;
        let after = ratio_to_dd(&cum) - t;
        if hi.is_none_or(|h| after > h) {
            hi = Some(after);
        }
        if lo.is_none_or(|l| before < l) {
            lo = Some(before);
        }
    }
    let precise = match (hi, lo) {
        (Some(h), Some(l)) => h - l,
        _ => Dd::ZERO,
    };
    Discrepancy { value: precise.to_f64(), precise, tolerance: DISCREPANCY_TOLERANCE }
}

/// `1/(K+1) + 3·Σ_{k=1..K} |μ̂(k)|/k`, an upper bound for [`discrepancy`].
pub fn erdos_turan_bound(mu: &AngularMeasure, kmax: u32) -> Result<f64> {
    if kmax == 0 {
        return domain("K must be at least 1");
    }
    let sum: f64 = (1..=kmax as i64).map(|k| mu.fourier(k).abs() / k as f64).sum();
    Ok(1.0 / (kmax as f64 + 1.0) + 3.0 * sum)
}

/// `μ̂(−2)` and the largest `|μ̂(k)|` over `1 ≤ k ≤ 12`, `4 ∤ k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryDefect {
    pub c2: ExactComplex,
    pub quarter_defect: f64,
}

pub fn symmetry_defect(mu: &AngularMeasure) -> SymmetryDefect {
    let c2 = mu.fourier(-2).exact.expect("even coefficients are exact");
    let quarter_defect = (1..=QUARTER_DEFECT_KMAX)
        .filter(|k| k % 4 != 0)
        .map(|k| mu.fourier(k).abs())
        .fold(0.0, f64::max);
    SymmetryDefect { c2, quarter_defect }
}

/// `μ₁ ⋆ μ₂`: angles add, so directions multiply as Gaussian integers.
pub fn convolve(a: &AngularMeasure, b: &AngularMeasure) -> Result<AngularMeasure> {
    let mut items = Vec::with_capacity(a.len() * b.len());
    for x in &a.atoms {
        for y in &b.atoms {
            let dir = x.dir.checked_mul(y.dir).ok_or_else(|| {
                Error::Capacity(format!("direction product {} * {} overflows", x.dir, y.dir))
            })?;
            items.push((dir, &x.weight * &y.weight));
        }
    }
    AngularMeasure::from_weighted(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn g(x: i128, y: i128) -> GaussInt {
        GaussInt::new(x, y)
    }

    /// Every closed and open arc with atom endpoints.
    fn brute_discrepancy(mu: &AngularMeasure) -> f64 {
        let n = mu.len();
        let turns: Vec<f64> = mu
            .atoms()
            .iter()
            .map(|a| {
                let t = (a.dir.im as f64).atan2(a.dir.re as f64) / std::f64::consts::TAU;
                if t < 0.0 {
                    t + 1.0
                } else {
                    t
                }
            })
            .collect();
        let w: Vec<f64> = mu.atoms().iter().map(|a| a.weight.to_f64().unwrap()).collect();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut closed = 0.0;
                let mut k = i;
                loop {
                    closed += w[k];
                    if k == j {
                        break;
                    }
                    k = (k + 1) % n;
                }
                let len = if i == j { 0.0 } else { (turns[j] - turns[i]).rem_euclid(1.0) };
                let open_len = if i == j { 1.0 } else { len };
                let open = if i == j { 1.0 - w[i] } else { closed - w[i] - w[j] };
                best = best.max((closed - len).abs()).max((open - open_len).abs());
            }
        }
        best
    }

    #[test]
    fn measure_examples() {
        let m3 = mu_n(3).unwrap();
        let dirs: Vec<_> = m3.atoms().iter().map(|a| (a.dir.re, a.dir.im)).collect();
        assert_eq!(dirs, vec![(2, 1), (-2, 1), (-2, -1), (2, -1)]);
        assert!(m3.atoms().iter().all(|a| a.weight == q(1, 4)));

        let m6 = mu_n(6).unwrap();
        let dirs: Vec<_> = m6.atoms().iter().map(|a| (a.dir.re, a.dir.im)).collect();
        assert_eq!(dirs, vec![(4, 4), (-4, 4), (-4, -4), (4, -4)]);

        assert!(matches!(mu_n(4), Err(Error::Domain(_))));
        assert!(matches!(mu_n(2), Err(Error::Degenerate(_))));

        assert_eq!(nu_n(2).unwrap().len(), 4);
        let n25 = nu_n(25).unwrap();
        assert_eq!(n25.len(), 12);
        assert!(n25.atoms().iter().all(|a| a.weight == q(1, 12)));
        assert!(nu_n(3).is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(AngularMeasure::from_weighted([(g(1, 0), q(1, 2))]).is_err());
        assert!(AngularMeasure::from_weighted([(g(0, 0), q(1, 1))]).is_err());
        assert!(AngularMeasure::from_weighted([(g(1, 0), q(3, 2)), (g(0, 1), q(-1, 2))]).is_err());
        // (2, 2) and (1, 1) are the same direction
        let m = AngularMeasure::from_weighted([(g(2, 2), q(1, 2)), (g(1, 1), q(1, 2))]).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn discrepancy_examples() {
        for n in [1, 2, 4, 8] {
            let d = discrepancy(&AngularMeasure::uniform_grid(n).unwrap());
            assert!((d.value - 1.0 / n as f64).abs() < 1e-15, "n = {n}");
        }
        assert!((discrepancy(&AngularMeasure::dirac(g(3, 7)).unwrap()).value - 1.0).abs() < 1e-15);
        let d3 = discrepancy(&mu_n(3).unwrap());
        // 2 * (1/4 - arctan(1/2)/2π)
        let expected = 2.0 * (0.25 - 0.5f64.atan() / std::f64::consts::TAU);
        assert!((d3.value - expected).abs() < 1e-15);
        assert!((d3.value - 0.3524).abs() < 1e-4);
    }

    #[test]
    fn discrepancy_matches_arc_enumeration() {
        for n in [3u64, 6, 7, 11, 18, 23, 27, 38, 47, 51] {
            if let Ok(mu) = mu_n(n) {
                let fast = discrepancy(&mu).value;
                assert!((fast - brute_discrepancy(&mu)).abs() < 1e-13, "n = {n}");
            }
        }
        let mixed = AngularMeasure::from_weighted([
            (g(1, 0), q(1, 2)),
            (g(-1, 5), q(1, 3)),
            (g(3, -4), q(1, 6)),
        ])
        .unwrap();
        assert!((discrepancy(&mixed).value - brute_discrepancy(&mixed)).abs() < 1e-13);
    }

    #[test]
    fn erdos_turan_examples() {
        for n in [2usize, 4, 8] {
            let grid = AngularMeasure::uniform_grid(n).unwrap();
            let b = erdos_turan_bound(&grid, n as u32 - 1).unwrap();
            assert!((b - 1.0 / n as f64).abs() < 1e-15);
        }
        let b = erdos_turan_bound(&AngularMeasure::dirac(g(1, 0)).unwrap(), 1).unwrap();
        assert!((b - 3.5).abs() < 1e-15);
        let m3 = mu_n(3).unwrap();
        assert!(erdos_turan_bound(&m3, 10).unwrap() >= discrepancy(&m3).value);
        assert!(erdos_turan_bound(&m3, 0).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let s3 = symmetry_defect(&mu_n(3).unwrap());
        assert_eq!(s3.c2, Complex::new(q(3, 5), q(0, 1)));
        assert!(s3.quarter_defect > 0.5);
        let s25 = symmetry_defect(&nu_n(25).unwrap());
        assert!(s25.c2.is_zero());
        assert!(s25.quarter_defect < 1e-15);
        let s8 = symmetry_defect(&AngularMeasure::uniform_grid(8).unwrap());
        assert!(s8.c2.is_zero() && s8.quarter_defect == 0.0);
    }

    #[test]
    fn convolution_examples() {
        let a = AngularMeasure::dirac(g(2, 1)).unwrap();
        let b = AngularMeasure::dirac(g(1, 3)).unwrap();
        assert_eq!(convolve(&a, &b).unwrap(), AngularMeasure::dirac(g(-1, 7)).unwrap());

        let m3 = mu_n(3).unwrap();
        let spread = convolve(&m3, &AngularMeasure::uniform_grid(4).unwrap()).unwrap();
        for k in 1..=16 {
            let c = spread.fourier(k);
            if k % 4 != 0 {
                assert!(c.is_exact_zero() || c.abs() < 1e-15, "k = {k}");
            }
        }

        let n5 = nu_n(5).unwrap();
        let sq = convolve(&n5, &n5).unwrap();
        assert_eq!(sq.fourier(4).exact.unwrap(), Complex::new(q(49, 625), q(0, 1)));
        for k in [-6, -2, 2, 4, 6, 8] {
            let lhs = sq.fourier(k).exact.unwrap();
            let rhs = n5.fourier(k).exact.unwrap() * n5.fourier(k).exact.unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn odd_coefficients_without_symmetry_are_approximate() {
        let m = AngularMeasure::dirac(g(3, 4)).unwrap();
        let c = m.fourier(1);
        assert!(c.exact.is_none());
        assert!((c.approx.re - 0.6).abs() < 1e-15 && (c.approx.im - 0.8).abs() < 1e-15);
        let c3 = m.fourier(3);
        // (3+4i)^3 / 125 = (-117 + 44i)/125
        assert!((c3.approx.re + 117.0 / 125.0).abs() < 1e-14);
    }

    #[test]
    fn atom_order_is_counterclockwise() {
        let m = nu_n(65).unwrap();
        let turns: Vec<f64> = m.atoms().iter().map(|a| a.turn().to_f64()).collect();
        assert!(turns.windows(2).all(|w| w[0] < w[1]));
        assert!(turns[0] >= 0.0 && *turns.last().unwrap() < 1.0);
    }
}

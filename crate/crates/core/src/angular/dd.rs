//! Double-double arithmetic (about 106 significant bits) for arc lengths.
//!
//! Only what the discrepancy computation needs: ring operations, division,
//! `sin`/`cos` by Taylor series after reduction modulo π/2, and an `atan2`
//! for exact integer directions refined by one Newton step from the `f64`
//! estimate. Absolute error of [`atan2`] stays below 1e-30 for inputs that
//! are exact doubles.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };
pub const TAU: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.449_293_598_294_706_4e-16 };
pub const FRAC_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for |x| < 2^106.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let rest = x - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= pi/4: 16 terms of each series reach below 1e-33
    let r2 = r * r;
    let mut term = r;
    let mut sin = r;
    for k in 1..=16 {
        let d = ((2 * k) * (2 * k + 1)) as f64;
        term = -(term * r2) / Dd::from_f64(d);
        sin = sin + term;
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    for k in 1..=16 {
        let d = ((2 * k - 1) * (2 * k)) as f64;
        term = -(term * r2) / Dd::from_f64(d);
        cos = cos + term;
    }
    (sin, cos)
}

/// `(sin x, cos x)` for |x| up to a few multiples of π.
pub fn sin_cos(x: Dd) -> (Dd, Dd) {
    let j = (x / FRAC_PI_2).hi.round();
    let r = x - FRAC_PI_2.mul_f64(j);
    let (s, c) = sin_cos_taylor(r);
    match (j as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// Argument of `x + iy` in `(-π, π]`.
pub fn atan2(y: Dd, x: Dd) -> Dd {
    if y.hi == 0.0 && x.hi == 0.0 {
        return Dd::ZERO;
    }
    let t0 = Dd::from_f64(y.to_f64().atan2(x.to_f64()));
    let (s, c) = sin_cos(t0);
    // rotate (x, y) by -t0; the residual angle is tiny
    let num = y * c - x * s;
    let den = x * c + y * s;
    let delta = num / den;
    // atan(delta) = delta - delta^3/3 + ..., and |delta| < 1e-15
    let t = t0 + delta - delta * delta * delta / Dd::from_f64(3.0);
    if t.hi > PI.hi || (t.hi == PI.hi && t.lo > PI.lo) {
        t - TAU
    } else if t < -PI || t == -PI {
        t + TAU
    } else {
        t
    }
}

/// Angle of the integer direction `(x, y)` as a fraction of a full turn, in `[0, 1)`.
pub fn turn_fraction(x: i128, y: i128) -> Dd {
    let t = atan2(Dd::from_i128(y), Dd::from_i128(x));
    let t = if t.hi < 0.0 { t + TAU } else { t };
    let f = t / TAU;
    if f.hi >= 1.0 {
        f - Dd::ONE
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn machin_formula() {
        // pi/4 = 4 atan(1/5) - atan(1/239)
        let a = atan2(Dd::ONE, Dd::from_f64(5.0));
        let b = atan2(Dd::ONE, Dd::from_f64(239.0));
        let four = Dd::from_f64(4.0);
        let quarter_pi = four * a - b;
        assert!(close(quarter_pi * four, PI, 1e-30));
    }

    #[test]
    fn diagonal_and_axes() {
        let q = atan2(Dd::ONE, Dd::ONE);
        assert!(close(q * Dd::from_f64(4.0), PI, 1e-30));
        assert!(close(atan2(Dd::ONE, Dd::ZERO), FRAC_PI_2, 1e-31));
        assert!(close(atan2(Dd::ZERO, -Dd::ONE), PI, 1e-31));
        assert!(close(turn_fraction(0, -1), Dd::from_f64(0.75), 1e-31));
        assert_eq!(turn_fraction(1, 0), Dd::ZERO);
    }

    #[test]
    fn pythagorean_identity() {
        for i in -40..40 {
            let x = Dd::from_f64(i as f64 * 0.173);
            let (s, c) = sin_cos(x);
            assert!(close(s * s + c * c, Dd::ONE, 1e-30));
            assert!((s.to_f64() - x.hi.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn division_roundtrip() {
        let a = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        assert!(close(a * Dd::from_f64(3.0), Dd::ONE, 1e-31));
    }

    #[test]
    fn agrees_with_f64_atan2() {
        for x in -20i128..=20 {
            for y in -20i128..=20 {
                if x == 0 && y == 0 {
                    continue;
                }
                let t = atan2(Dd::from_i128(y), Dd::from_i128(x)).to_f64();
                assert!((t - (y as f64).atan2(x as f64)).abs() < 1e-15, "{x} {y}");
            }
        }
    }
}

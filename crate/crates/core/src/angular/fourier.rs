//! Fourier functionals of lattice points on a single circle.
//!
//! For `b(m) = 1`:
//! - `u_k(m)` averages `e^{ikθ}` over all representations of `m`,
//! - `v_k(m)` over those with even `x` (needs `m ≢ 2 mod 4`),
//! - `w_k(m)` is `4/r(m)` times the sum over primary representations.
//!
//! Direct evaluation sums exact Gaussian-integer powers; the multiplicative
//! routes rebuild `w_k` and `u_k` prime by prime from [`zint::factor`].

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactComplex, FourierCoefficient};
use crate::error::{domain, Result};
use crate::zint::{self, Factorization, GaussInt, TwoSquaresRep};

/// `χ₂(z) = (z/|z|)²`, stored as `z²` over `|z|²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chi2Value {
    pub numerator: GaussInt,
    pub denominator: u128,
}

impl Chi2Value {
    pub fn to_exact(self) -> ExactComplex {
        let d = BigInt::from(self.denominator);
        Complex::new(
            BigRational::new(self.numerator.re.into(), d.clone()),
            BigRational::new(self.numerator.im.into(), d),
        )
    }
}

pub fn chi2(z: GaussInt) -> Result<Chi2Value> {
    if z.is_zero() {
        return domain("χ₂ is undefined at 0");
    }
    Ok(Chi2Value { numerator: z * z, denominator: z.norm() })
}

fn exact_real(re: BigRational) -> ExactComplex {
    Complex::new(re, BigRational::zero())
}

fn perfect_sqrt(m: u128) -> Option<u128> {
    let r = (m as f64).sqrt().round() as u128;
    (r.checked_mul(r) == Some(m)).then_some(r)
}

/// `(1/count)·Σ e^{ikθ(z)}` over `points` lying on the circle `|z|² = m`.
fn average_exp(points: &[GaussInt], count: u128, m: u128, k: i64) -> FourierCoefficient {
    let kabs = k.unsigned_abs() as u32;
    let root = if k % 2 == 0 { Some(BigInt::from(m).pow(kabs / 2)) } else {
        perfect_sqrt(m).map(|s| BigInt::from(s).pow(kabs))
    };
    match root {
        Some(scale) => {
            let mut acc: Complex<BigInt> = Complex::zero();
            for &z in points {
                let z = if k >= 0 { z } else { z.conj() };
                acc += z.pow_big(kabs);
            }
            let den = scale * BigInt::from(count);
            FourierCoefficient::exact(
                k,
                Complex::new(BigRational::new(acc.re, den.clone()), BigRational::new(acc.im, den)),
            )
        }
        None => {
            let mut acc = Complex::new(0.0, 0.0);
            for &z in points {
                acc += Complex::from_polar(1.0, k as f64 * z.arg());
            }
            FourierCoefficient { k, exact: None, approx: acc / count as f64 }
        }
    }
}

fn reps_checked(m: u128) -> Result<(Factorization, Vec<TwoSquaresRep>)> {
    if m == 0 {
        return domain("m = 0 has no directions");
    }
    let f = zint::factor(m)?;
    let reps = zint::repr_two_squares_factored(m, &f)?;
    if reps.is_empty() {
        return domain(format!("{m} is not a sum of two squares"));
    }
    Ok((f, reps))
}

/// `u_k(m)`: average of `e^{ikθ}` over all lattice points on `|z|² = m`.
pub fn u_k(m: u128, k: i64) -> Result<FourierCoefficient> {
    let (_, reps) = reps_checked(m)?;
    if k % 2 != 0 {
        // z and -z cancel
        return Ok(FourierCoefficient::exact(k, ExactComplex::zero()));
    }
    let pts: Vec<GaussInt> = reps.iter().map(|r| r.gauss()).collect();
    Ok(average_exp(&pts, pts.len() as u128, m, k))
}

/// `v_k(m)`: the same average restricted to even `x`.
pub fn v_k(m: u128, k: i64) -> Result<FourierCoefficient> {
    if m % 4 == 2 {
        return domain(format!("m = {m} ≡ 2 (mod 4) has no even-x points"));
    }
    let (_, reps) = reps_checked(m)?;
    if k % 2 != 0 {
        return Ok(FourierCoefficient::exact(k, ExactComplex::zero()));
    }
    let pts: Vec<GaussInt> = reps.iter().filter(|r| r.x % 2 == 0).map(|r| r.gauss()).collect();
    Ok(average_exp(&pts, pts.len() as u128, m, k))
}

/// `w_k(m) = (4/r(m))·Σ_{z primary} e^{ikθ(z)}`; zero for even `m`.
pub fn w_k(m: u128, k: i64) -> Result<FourierCoefficient> {
    let (_, reps) = reps_checked(m)?;
    let pts: Vec<GaussInt> = reps.iter().map(|r| r.gauss()).filter(|z| z.is_primary()).collect();
    // 4/r = 1/(r/4)
    Ok(average_exp(&pts, reps.len() as u128 / 4, m, k))
}

/// `Σ_{a=0..e} π^{ka} π̄^{k(e−a)} / ((e+1)·p^{ke/2})` for even `k ≥ 0`.
fn split_prime_power_average(pi: GaussInt, e: u32, k: u32) -> ExactComplex {
    let p = pi.norm();
    let pk = pi.pow_big(k);
    let pbk = pi.conj().pow_big(k);
    let mut acc: Complex<BigInt> = Complex::zero();
    let mut left: Complex<BigInt> = Complex::new(BigInt::one(), BigInt::zero());
    let mut rights = vec![Complex::new(BigInt::one(), BigInt::zero())];
    for _ in 0..e {
        let next = rights.last().unwrap() * &pbk;
        rights.push(next);
    }
    for a in 0..=e as usize {
        acc += &left * &rights[e as usize - a];
        left = &left * &pk;
    }
    let den = BigInt::from(p).pow(k * e / 2) * BigInt::from(e + 1);
    Complex::new(BigRational::new(acc.re, den.clone()), BigRational::new(acc.im, den))
}

fn primary_prime(p: u128) -> Result<GaussInt> {
    Ok(zint::theta_p(p)?.1)
}

/// `w_k(m)` for even `k`, assembled from the factorization of `m`.
pub fn w_k_multiplicative(m: u128, k: i64) -> Result<ExactComplex> {
    if k % 2 != 0 {
        return domain("the multiplicative route covers even k only");
    }
    let (f, _) = reps_checked(m)?;
    let kabs = k.unsigned_abs() as u32;
    let mut acc = exact_real(BigRational::one());
    for &(p, e) in f.factors() {
        let local = if p == 2 {
            // no primary point has even norm
            exact_real(BigRational::zero())
        } else if p % 4 == 3 {
            // primary associate of q^(e/2) is (-q)^(e/2); its k-th power is real and = (-1)^(ke/2)
            let sign = if (kabs as u64 * (e as u64 / 2)) % 2 == 0 { 1 } else { -1 };
            exact_real(BigRational::from_integer(sign.into()))
        } else {
            let pi = primary_prime(p)?;
            let pi = if k >= 0 { pi } else { pi.conj() };
            split_prime_power_average(pi, e, kabs)
        };
        acc *= local;
    }
    Ok(acc)
}

/// `u_k(m)` for `4 | k`, assembled from the factorization of `m`.
pub fn u_k_multiplicative(m: u128, k: i64) -> Result<ExactComplex> {
    if k % 4 != 0 {
        return domain("u_k is multiplicative only for 4 | k (and vanishes otherwise)");
    }
    let (f, _) = reps_checked(m)?;
    let kabs = k.unsigned_abs() as u32;
    let mut acc = exact_real(BigRational::one());
    for &(p, e) in f.factors() {
        let local = if p == 2 {
            // ((1+i)/√2)^(k·e) = (-1)^(k·e/4)
            let sign = if (kabs as u64 / 4 * e as u64) % 2 == 0 { 1 } else { -1 };
            exact_real(BigRational::from_integer(sign.into()))
        } else if p % 4 == 3 {
            exact_real(BigRational::one())
        } else {
            let (_, pi) = zint::theta_p(p)?;
            let pi = if k >= 0 { pi } else { pi.conj() };
            split_prime_power_average(pi, e, kabs)
        };
        acc *= local;
    }
    Ok(acc)
}

/// Exact test of `v_k(m) = (−1)^{k/2}·w_k(m)` for odd `m` and even `k`.
pub fn claim1_check(m: u128, k: i64) -> Result<bool> {
    if m % 2 == 0 {
        return domain(format!("m = {m} must be odd"));
    }
    if k % 2 != 0 {
        return domain(format!("k = {k} must be even"));
    }
    let v = v_k(m, k)?.exact.expect("even k is exact");
    let w = w_k(m, k)?.exact.expect("even k is exact");
    let signed = if (k / 2) % 2 == 0 { w } else { -w };
    Ok(v == signed)
}

/// `W₂(m) = ½·Σ χ₂(z)` over `|z|² = m` with `Im z` even, by direct summation.
pub fn w2_direct(m: u128) -> Result<BigRational> {
    if m == 0 {
        return domain("W₂ is undefined at 0");
    }
    let reps = zint::repr_two_squares(m)?;
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for r in reps.iter().filter(|r| r.y % 2 == 0) {
        let sq = r.gauss() * r.gauss();
        re += sq.re;
        im += sq.im;
    }
    debug_assert!(im.is_zero(), "conjugate pairs cancel the imaginary part");
    Ok(BigRational::new(re, BigInt::from(2u8) * BigInt::from(m)))
}

/// `W₂(m)` from prime-power closed forms: `U_j(cos 2θ_p)` at split primes,
/// `(1 + (−1)^j)/2` at inert primes, and 0 at any positive power of 2.
pub fn w2_multiplicative(m: u128) -> Result<BigRational> {
    if m == 0 {
        return domain("W₂ is undefined at 0");
    }
    w2_from_factors(&zint::factor(m)?)
}

pub(crate) fn w2_from_factors(f: &Factorization) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for &(p, e) in f.factors() {
        let local = if p == 2 {
            BigRational::zero()
        } else if p % 4 == 3 {
            if e % 2 == 0 { BigRational::one() } else { BigRational::zero() }
        } else {
            let (_, pi) = zint::theta_p(p)?;
            // cos 2θ_p = (a² − b²)/p
            let (a, b) = (BigInt::from(pi.re), BigInt::from(pi.im));
            let cos2 = BigRational::new(&a * &a - &b * &b, BigInt::from(p));
            let two_c = &cos2 + &cos2;
            // sin((j+1)x)/sin(x) = U_j(cos x)
            let (mut prev, mut cur) = (BigRational::one(), two_c.clone());
            if e == 0 {
                cur = BigRational::one();
            }
            for _ in 1..e {
                let next = &two_c * &cur - &prev;
                prev = cur;
                cur = next;
            }
            cur
        };
        if local.is_zero() {
            return Ok(local);
        }
        acc *= local;
    }
    Ok(acc)
}

/// `W₂(m)`, evaluated through the multiplicative closed forms.
pub fn w2(m: u128) -> Result<BigRational> {
    w2_multiplicative(m)
}

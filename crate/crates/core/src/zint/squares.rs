//! Sums of two squares through Gaussian divisor composition.

use serde::{Deserialize, Serialize};

use super::factor::{factor, is_prime, pow_mod, Factorization};
use super::gauss::GaussInt;
use crate::error::{domain, Result};

/// One ordered, signed representation `x^2 + y^2 = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoSquaresRep {
    pub x: i128,
    pub y: i128,
    pub n: u128,
}

impl TwoSquaresRep {
    pub fn gauss(self) -> GaussInt {
        GaussInt::new(self.x, self.y)
    }
}

const EXHAUSTIVE_SQRT_LIMIT: u128 = 10_000;

/// A square root of -1 modulo a prime `p ≡ 1 (mod 4)`.
///
/// Small primes are searched exhaustively; larger ones use `c^((p-1)/4)`
/// for the first candidate `c = 2, 3, 5, 7, ...` that is a non-residue.
pub fn sqrt_minus_one(p: u128) -> Result<u128> {
    if p % 4 != 1 || !is_prime(p) {
        return domain(format!("{p} is not a prime congruent to 1 mod 4"));
    }
    if p < EXHAUSTIVE_SQRT_LIMIT {
        let x = (1..p).find(|&x| x * x % p == p - 1);
        return Ok(x.expect("p ≡ 1 (mod 4) has a square root of -1"));
    }
    let mut c: u128 = 2;
    loop {
        if is_prime(c) {
            let x = pow_mod(c, (p - 1) / 4, p);
            if super::factor::pow_mod(x, 2, p) == p - 1 {
                return Ok(x);
            }
        }
        c += 1;
    }
}

/// A Gaussian prime of norm `p` for a prime `p ≡ 1 (mod 4)`, via the
/// Hermite-Serret Euclidean descent on `(p, sqrt(-1) mod p)`.
pub fn split_prime(p: u128) -> Result<GaussInt> {
    let x = sqrt_minus_one(p)?;
    let (mut a, mut b) = (p, x.min(p - x));
    while b * b > p {
        let t = a % b;
        a = b;
        b = t;
    }
    let c = a % b;
    let (u, v) = if b * b + c * c == p {
        (b, c)
    } else {
        let s = super::factor::isqrt(p - b * b);
        (b, s)
    };
    assert_eq!(u * u + v * v, p, "Hermite-Serret descent failed for {p}");
    Ok(GaussInt::new(u as i128, v as i128))
}

/// `true` iff every prime `≡ 3 (mod 4)` divides the input to an even power.
pub fn is_sum_two_squares_factored(f: &Factorization) -> bool {
    f.factors().iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// `b(n)`: whether `n` is a sum of two integer squares.
pub fn is_sum_two_squares(n: u128) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    Ok(is_sum_two_squares_factored(&factor(n)?))
}

/// `r(n)` from the factorization of `n >= 1`.
pub fn r_factored(f: &Factorization) -> u128 {
    if !is_sum_two_squares_factored(f) {
        return 0;
    }
    4 * f
        .factors()
        .iter()
        .filter(|&&(p, _)| p % 4 == 1)
        .map(|&(_, e)| e as u128 + 1)
        .product::<u128>()
}

/// Number of ordered signed representations `x^2 + y^2 = n`; `r(0) = 1`.
pub fn r(n: u128) -> Result<u128> {
    if n == 0 {
        return Ok(1);
    }
    Ok(r_factored(&factor(n)?))
}

/// Representations with even `x`, from `r(n)` and `n mod 4`.
pub fn r_star_from_r(n: u128, r: u128) -> u128 {
    if n == 0 {
        return 1;
    }
    match n % 4 {
        0 => r,
        2 => 0,
        _ => r / 2,
    }
}

pub fn r_star(n: u128) -> Result<u128> {
    Ok(r_star_from_r(n, r(n)?))
}

/// Every Gaussian integer of norm `n`, for `n >= 1`, in sorted order.
pub fn gaussian_of_norm(f: &Factorization) -> Result<Vec<GaussInt>> {
    if !is_sum_two_squares_factored(f) {
        return Ok(Vec::new());
    }
    let mut base = vec![GaussInt::ONE];
    for &(p, e) in f.factors() {
        if p == 2 {
            let one_plus_i = GaussInt::new(1, 1);
            for z in &mut base {
                for _ in 0..e {
                    *z = *z * one_plus_i;
                }
            }
        } else if p % 4 == 3 {
            let q = GaussInt::new(p as i128, 0);
            for z in &mut base {
                for _ in 0..e / 2 {
                    *z = *z * q;
                }
            }
        } else {
            let pi = split_prime(p)?;
            let pi_bar = pi.conj();
            let mut powers = vec![GaussInt::ONE];
            let mut conj_powers = vec![GaussInt::ONE];
            for _ in 0..e {
                powers.push(*powers.last().unwrap() * pi);
                conj_powers.push(*conj_powers.last().unwrap() * pi_bar);
            }
            let mut next = Vec::with_capacity(base.len() * (e as usize + 1));
            for z in &base {
                for a in 0..=e as usize {
                    next.push(*z * powers[a] * conj_powers[e as usize - a]);
                }
            }
            base = next;
        }
    }
    let mut out: Vec<GaussInt> = base.iter().flat_map(|z| z.associates()).collect();
    out.sort_unstable();
    Ok(out)
}

/// All representations of `n` as `x^2 + y^2`, signs and order distinguished.
pub fn repr_two_squares(n: u128) -> Result<Vec<TwoSquaresRep>> {
    if n == 0 {
        return Ok(vec![TwoSquaresRep { x: 0, y: 0, n: 0 }]);
    }
    repr_two_squares_factored(n, &factor(n)?)
}

pub fn repr_two_squares_factored(n: u128, f: &Factorization) -> Result<Vec<TwoSquaresRep>> {
    let reps: Vec<TwoSquaresRep> = gaussian_of_norm(f)?
        .into_iter()
        .map(|z| TwoSquaresRep { x: z.re, y: z.im, n })
        .collect();
    debug_assert!(reps.iter().all(|r| r.gauss().norm() == n));
    Ok(reps)
}

/// The primary Gaussian prime above `p ≡ 1 (mod 4)` with positive imaginary
/// part, and its principal argument.
pub fn theta_p(p: u128) -> Result<(f64, GaussInt)> {
    let pi = split_prime(p)?;
    let primary = pi.primary()?;
    let primary = if primary.im > 0 { primary } else { primary.conj() };
    Ok((primary.arg(), primary))
}

/// `arctan(y/x)` for the representation `p = x^2 + y^2` with `0 <= y <= x`.
pub fn vartheta_p(p: u128) -> Result<(f64, TwoSquaresRep)> {
    let pi = split_prime(p)?;
    let (a, b) = (pi.re.abs(), pi.im.abs());
    let (x, y) = (a.max(b), a.min(b));
    Ok(((y as f64).atan2(x as f64), TwoSquaresRep { x, y, n: p }))
}

/// `(ω₁(n), Ω₁(n))`: distinct and with-multiplicity counts of primes `≡ 1 (mod 4)`.
pub fn omega1_factored(f: &Factorization) -> (u32, u32) {
    f.factors()
        .iter()
        .filter(|&&(p, _)| p % 4 == 1)
        .fold((0, 0), |(w, big), &(_, e)| (w + 1, big + e))
}

pub fn omega1(n: u128) -> Result<(u32, u32)> {
    Ok(omega1_factored(&factor(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_reps(n: i128) -> Vec<(i128, i128)> {
        let bound = (n as f64).sqrt() as i128 + 1;
        let mut out = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                if x * x + y * y == n {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn pairs(reps: &[TwoSquaresRep]) -> Vec<(i128, i128)> {
        reps.iter().map(|r| (r.x, r.y)).collect()
    }

    #[test]
    fn membership_examples() {
        assert!(is_sum_two_squares(0).unwrap());
        assert!(!is_sum_two_squares(21).unwrap());
        assert!(is_sum_two_squares(32).unwrap());
    }

    #[test]
    fn repr_examples() {
        assert_eq!(pairs(&repr_two_squares(2).unwrap()), brute_reps(2));
        assert_eq!(repr_two_squares(2).unwrap().len(), 4);
        let reps25 = repr_two_squares(25).unwrap();
        assert_eq!(reps25.len(), 12);
        assert_eq!(pairs(&reps25), brute_reps(25));
        assert!(repr_two_squares(21).unwrap().is_empty());
        assert_eq!(pairs(&repr_two_squares(0).unwrap()), vec![(0, 0)]);
    }

    #[test]
    fn r_star_examples() {
        assert_eq!(r_star(25).unwrap(), 6);
        assert_eq!(r_star(10).unwrap(), 0);
        assert_eq!(r_star(32).unwrap(), 4);
        assert_eq!(r_star(0).unwrap(), 1);
        assert_eq!(r(0).unwrap(), 1);
    }

    #[test]
    fn prime_angles() {
        let (t5, pi5) = theta_p(5).unwrap();
        assert_eq!(pi5, GaussInt::new(-1, 2));
        assert!((t5 - 2.034_443_9).abs() < 1e-7);
        let (t13, pi13) = theta_p(13).unwrap();
        assert_eq!(pi13, GaussInt::new(3, 2));
        assert!((t13 - 0.588_002_6).abs() < 1e-7);
        assert!(theta_p(9).is_err());
        assert!(theta_p(7).is_err());

        assert!((vartheta_p(5).unwrap().0 - 0.463_647_6).abs() < 1e-7);
        assert!((vartheta_p(101).unwrap().0 - 0.099_668_7).abs() < 1e-7);
        assert!((vartheta_p(13).unwrap().0 - 0.588_002_6).abs() < 1e-7);
    }

    #[test]
    fn vartheta_matches_theta_for_even_frequencies() {
        for p in (5u128..2000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let (t, _) = theta_p(p).unwrap();
            let (v, _) = vartheta_p(p).unwrap();
            for k in (2..=20).step_by(2) {
                let (a, b) = ((k as f64 * t).cos().abs(), (k as f64 * v).cos().abs());
                assert!((a - b).abs() < 1e-9, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega1(25).unwrap(), (1, 2));
        assert_eq!(omega1(21).unwrap(), (0, 0));
        assert_eq!(omega1(1).unwrap(), (0, 0));
    }

    #[test]
    fn sqrt_minus_one_both_regimes() {
        for p in [5u128, 13, 9973, 10009, 1_000_000_009, 999_999_999_989] {
            if p % 4 != 1 || !is_prime(p) {
                continue;
            }
            let x = sqrt_minus_one(p).unwrap();
            assert_eq!(x * x % p, p - 1);
            let z = split_prime(p).unwrap();
            assert_eq!(z.norm(), p);
        }
    }

    #[test]
    fn counts_match_double_loop_up_to_5000() {
        // the full 10^5 sweep runs in the integration suite
        for n in 1..=5000u128 {
            let brute = brute_reps(n as i128);
            let reps = repr_two_squares(n).unwrap();
            assert_eq!(pairs(&reps), brute, "n = {n}");
            assert_eq!(r(n).unwrap() as usize, brute.len());
            let even_x = brute.iter().filter(|(x, _)| x % 2 == 0).count();
            assert_eq!(r_star(n).unwrap() as usize, even_x, "n = {n}");
        }
    }

    #[test]
    fn primary_normalization_on_split_primes() {
        for p in (5u128..10_000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let z = split_prime(p).unwrap();
            for w in z.associates().into_iter().chain(z.conj().associates()) {
                let pr = w.primary().unwrap();
                assert!(pr.is_primary());
                assert_eq!(pr.primary().unwrap(), pr);
                assert_eq!(w.associates().iter().filter(|a| a.is_primary()).count(), 1);
            }
        }
    }
}

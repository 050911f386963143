//! Deterministic integer factorization for inputs below 2^126.
//!
//! Trial division removes every prime below 10^6, Miller-Rabin with a fixed
//! witness set decides primality of cofactors, and Brent's variant of
//! Pollard rho splits composites using fixed polynomial constants, so the
//! output for a given input is always the same.

use crate::error::{Error, Result};

/// Largest accepted input is `2^MAX_BITS - 1`.
pub const MAX_BITS: u32 = 126;

const TRIAL_LIMIT: u64 = 1_000_000;

/// Witnesses that make Miller-Rabin deterministic for all n < 3.3 * 10^24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Extra bases used above the deterministic bound (strong probable prime test).
const EXTRA_WITNESSES: [u64; 8] = [41, 43, 47, 53, 59, 61, 67, 71];
const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Prime factorization `n = prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from `(prime, exponent)` pairs, merging
    /// duplicates and dropping zero exponents. Primality is not rechecked.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u128, u32)>) -> Self {
        let mut factors: Vec<(u128, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable();
        let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Self { factors: merged }
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factorization of the product `self * other`.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        Self::from_pairs(self.factors.iter().chain(other.factors.iter()).copied())
    }

    /// The factored integer, if it fits in `u128`.
    pub fn value(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &(p, e) in &self.factors {
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        Some(acc)
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

/// Factors `n` exactly. `n = 0` is a domain error; `n >= 2^126` a capacity error.
pub fn factor(n: u128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if n >> MAX_BITS != 0 {
        return Err(Error::Capacity(format!("{n} exceeds the {MAX_BITS}-bit factoring bound")));
    }
    let mut pairs = Vec::new();
    let rest = trial_divide(n, &mut pairs);
    if rest > 1 {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                pairs.push((m, 1));
            } else {
                let d = find_divisor(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    Ok(Factorization::from_pairs(pairs))
}

fn trial_divide(mut n: u128, out: &mut Vec<(u128, u32)>) -> u128 {
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p as u128 == 0 {
            n /= p as u128;
            e += 1;
        }
        if e > 0 {
            out.push((p as u128, e));
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d: u64 = 7;
    let mut i = 0;
    while d <= TRIAL_LIMIT && (d as u128) * (d as u128) <= n {
        if let Ok(small) = u64::try_from(n) {
            // same loop on native width once the cofactor is small
            let rest = trial_divide_u64(small, d, i, out);
            return rest as u128;
        }
        let mut e = 0;
        while n % d as u128 == 0 {
            n /= d as u128;
            e += 1;
        }
        if e > 0 {
            out.push((d as u128, e));
        }
        d += STEPS[i];
        i = (i + 1) % 8;
    }
    n
}

fn trial_divide_u64(mut n: u64, mut d: u64, mut i: usize, out: &mut Vec<(u128, u32)>) -> u64 {
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    while d <= TRIAL_LIMIT && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d as u128, e));
        }
        d += STEPS[i];
        i = (i + 1) % 8;
    }
    n
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // a, b < m < 2^126, so doubling never overflows.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin primality. Deterministic below 3.3 * 10^24; above that it is
/// a strong probable-prime test to 20 fixed bases.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p as u128 {
            return true;
        }
        if n % p as u128 == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let strong = |a: u64| -> bool {
        let mut x = pow_mod(a as u128, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    };
    if !WITNESSES.iter().all(|&a| strong(a)) {
        return false;
    }
    n < DETERMINISTIC_BOUND || EXTRA_WITNESSES.iter().all(|&a| strong(a))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns a nontrivial divisor of the odd composite `n`.
fn find_divisor(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    if let Some(r) = exact_sqrt(n) {
        return r;
    }
    for c in 1u128.. {
        if let Some(d) = brent(n, c) {
            return d;
        }
    }
    unreachable!("Pollard rho exhausts its constants only on primes")
}

fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub(crate) fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

fn brent(n: u128, c: u128) -> Option<u128> {
    let step = |v: u128| (mul_mod(v, v, n) + c) % n;
    let batch = 128u64;
    let mut y = 2u128;
    let mut r = 1u64;
    let mut q = 1u128;
    let mut g = 1u128;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

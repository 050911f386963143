use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A Gaussian integer `re + i*im`.
///
/// Components are `i128`: every Gaussian integer of norm below 2^126 fits,
/// which covers everything the factoring bound lets us construct. Products
/// that would leave that range panic on overflow instead of wrapping; use
/// [`GaussInt::pow_big`] for powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i128, im: i128) -> Self {
        Self { re, im }
    }

    pub fn norm(self) -> u128 {
        let (a, b) = (self.re.unsigned_abs(), self.im.unsigned_abs());
        a.checked_mul(a)
            .and_then(|a2| b.checked_mul(b).and_then(|b2| a2.checked_add(b2)))
            .expect("Gaussian norm overflows u128")
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        let re = self.re.checked_mul(rhs.re)?.checked_sub(self.im.checked_mul(rhs.im)?)?;
        let im = self.re.checked_mul(rhs.im)?.checked_add(self.im.checked_mul(rhs.re)?)?;
        Some(Self::new(re, im))
    }

    /// Multiplication by `i^k`.
    pub fn rotate(self, k: u32) -> Self {
        match k % 4 {
            0 => self,
            1 => Self::new(-self.im, self.re),
            2 => Self::new(-self.re, -self.im),
            _ => Self::new(self.im, -self.re),
        }
    }

    pub fn associates(self) -> [Self; 4] {
        [self, self.rotate(1), self.rotate(2), self.rotate(3)]
    }

    pub fn to_big(self) -> Complex<BigInt> {
        Complex::new(BigInt::from(self.re), BigInt::from(self.im))
    }

    /// `self^k` computed exactly with unbounded components.
    pub fn pow_big(self, k: u32) -> Complex<BigInt> {
        let mut base = self.to_big();
        let mut acc = Complex::new(BigInt::one(), BigInt::zero());
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `re ≡ 1 - im (mod 4)` with `im` even, i.e. `z ≡ 1 (mod 2(1+i))`.
    pub fn is_primary(self) -> bool {
        self.im.rem_euclid(2) == 0 && (self.re - (1 - self.im)).rem_euclid(4) == 0
    }

    /// The unique associate of `self` that is primary.
    ///
    /// Only nonzero Gaussian integers of odd norm have a primary associate.
    pub fn primary(self) -> Result<Self> {
        if self.is_zero() {
            return domain("0 has no primary associate");
        }
        if (self.re + self.im).rem_euclid(2) == 0 {
            return domain(format!("{self} has even norm; no primary associate"));
        }
        let found = self.associates().into_iter().find(|z| z.is_primary());
        Ok(found.expect("odd-norm Gaussian integers have exactly one primary associate"))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(self) -> f64 {
        (self.im as f64).atan2(self.re as f64)
    }

    /// Divides out the integer gcd of the components, keeping the direction.
    pub fn reduced(self) -> Self {
        let g = num_integer::gcd(self.re, self.im);
        if g == 0 {
            self
        } else {
            Self::new(self.re / g, self.im / g)
        }
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("Gaussian integer product overflows i128")
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;

    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primary_examples() {
        assert_eq!(GaussInt::new(2, 1).primary().unwrap(), GaussInt::new(-1, 2));
        assert_eq!(GaussInt::new(3, 2).primary().unwrap(), GaussInt::new(3, 2));
        assert!(GaussInt::new(1, 1).primary().is_err());
        assert!(GaussInt::new(0, 0).primary().is_err());
    }

    #[test]
    fn exactly_one_primary_associate() {
        for re in -30i128..=30 {
            for im in -30i128..=30 {
                let z = GaussInt::new(re, im);
                let count = z.associates().iter().filter(|w| w.is_primary()).count();
                let odd = (re + im).rem_euclid(2) == 1;
                assert_eq!(count, usize::from(odd), "{z}");
                if odd {
                    let p = z.primary().unwrap();
                    assert_eq!(p.primary().unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let z = GaussInt::new(-7, 12);
        let w = GaussInt::new(5, -3);
        assert_eq!((z * w).norm(), z.norm() * w.norm());
    }

    #[test]
    fn big_power_matches_repeated_product() {
        let z = GaussInt::new(3, -2);
        let mut acc = GaussInt::ONE;
        for k in 0..12 {
            assert_eq!(z.pow_big(k), acc.to_big());
            acc = acc * z;
        }
    }

    proptest::proptest! {
        #[test]
        fn product_of_primaries_is_primary(a in -500i128..500, b in -500i128..500, c in -500i128..500, d in -500i128..500) {
            let z = GaussInt::new(a, b);
            let w = GaussInt::new(c, d);
            proptest::prop_assume!((a + b).rem_euclid(2) == 1 && (c + d).rem_euclid(2) == 1);
            let (pz, pw) = (z.primary().unwrap(), w.primary().unwrap());
            proptest::prop_assert!((pz * pw).is_primary());
            proptest::prop_assert_eq!((z * w).primary().unwrap(), pz * pw);
        }
    }
}

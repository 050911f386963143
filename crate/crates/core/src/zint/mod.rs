//! Integer and Gaussian-integer arithmetic.

mod factor;
mod gauss;
mod squares;

pub use factor::{factor, is_prime, Factorization, MAX_BITS};
pub use gauss::GaussInt;
pub use squares::{
    gaussian_of_norm, is_sum_two_squares, is_sum_two_squares_factored, omega1, omega1_factored, r,
    r_factored, r_star, r_star_from_r, repr_two_squares, repr_two_squares_factored, split_prime,
    sqrt_minus_one, theta_p, vartheta_p, TwoSquaresRep,
};

/// The primary associate of `z`; see [`GaussInt::primary`].
pub fn primary_normalize(z: GaussInt) -> crate::Result<GaussInt> {
    z.primary()
}

/// Primes `p ≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

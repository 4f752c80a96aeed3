//! Exact integer and rational arithmetic: Bernoulli numbers, divisor sums,
//! p-adic valuations and the residue rings `Z/p^mZ`.

mod bernoulli;
mod modulus;
mod valuation;

pub use bernoulli::bernoulli;
pub use modulus::{PrimePowerModulus, Residue};
pub use valuation::{vp, vp_int, Valuation};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact fraction with positive, coprime denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Divisors of `n` in increasing order, by trial division up to `sqrt(n)`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero are undefined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_t(n) = sum_{d | n} d^t`.
pub fn sigma(t: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| num_traits::pow(BigInt::from(d), t as usize))
        .sum()
}

/// Divisor power sum restricted to divisors prime to `p`.
pub fn sigma_star(t: u32, n: u64, p: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .filter(|d| d % p != 0)
        .map(|d| num_traits::pow(BigInt::from(d), t as usize))
        .sum()
}

/// Reduces a p-integral rational modulo `p^m`.
pub fn reduce_rational(x: &Rational, modulus: &PrimePowerModulus) -> Result<Residue> {
    let n = BigInt::from(modulus.modulus());
    let den = x.denom().mod_floor(&n);
    if (x.denom() % modulus.p()).is_zero() {
        return Err(Error::NonInvertibleDenominator {
            denominator: x.denom().to_string(),
            modulus: modulus.modulus(),
        });
    }
    let den = u64::try_from(den).expect("residue below modulus");
    let inv = modulus.inverse(den).expect("denominator prime to p is a unit");
    let num = u64::try_from(x.numer().mod_floor(&n)).expect("residue below modulus");
    Ok(Residue::new(modulus.mul(num, inv), *modulus))
}

/// Reduces an integer modulo `p^m`.
pub fn reduce_int(x: &BigInt, modulus: &PrimePowerModulus) -> u64 {
    let n = BigInt::from(modulus.modulus());
    u64::try_from(x.mod_floor(&n)).expect("residue below modulus")
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

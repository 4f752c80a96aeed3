use std::fmt;

use serde::{Deserialize, Serialize};

use super::is_prime;
use crate::error::{Error, Result};

/// The modulus `p^m` for a prime `p >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePowerModulus {
    p: u64,
    m: u32,
    modulus: u64,
}

impl PrimePowerModulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} must be a prime >= 5")));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&n| n < (1 << 62))
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{m} is too large")))?;
        Ok(Self { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, exponent `m'`.
    pub fn with_exponent(&self, m: u32) -> Result<Self> {
        Self::new(self.p, m)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    /// Inverse of a unit, by the extended Euclidean algorithm.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.modulus as i128, (a % self.modulus) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return None;
        }
        Some(s0.rem_euclid(self.modulus as i128) as u64)
    }

    /// p-adic valuation of a residue, capped at `m`; zero has valuation `m`.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut a = a;
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn p_power(&self, e: u32) -> u64 {
        self.p.pow(e)
    }
}

impl fmt::Display for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimePowerModulus,
}

impl Residue {
    pub fn new(value: u64, modulus: PrimePowerModulus) -> Self {
        Self {
            value: value % modulus.modulus(),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> PrimePowerModulus {
        self.modulus
    }
}

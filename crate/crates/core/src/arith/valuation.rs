use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Rational;

/// A p-adic valuation. `Infinite` is the valuation of zero and compares
/// above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Valuation of a nonzero integer; `Infinite` for zero.
pub fn vp_int(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

pub fn vp(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = vp_int(x.numer(), p).finite().unwrap();
    let den = vp_int(x.denom(), p).finite().unwrap();
    Valuation::Finite(num - den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(vp(&rational(50, 1), 5), Valuation::Finite(2));
        assert_eq!(vp(&rational(1, 6), 5), Valuation::Finite(0));
        assert_eq!(vp(&rational(0, 1), 7), Valuation::Infinite);
        assert_eq!(vp(&rational(3, 25), 5), Valuation::Finite(-2));
    }

    #[test]
    fn infinity_is_maximal() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(
            a in 1i64..1_000_000, b in 1i64..1_000_000,
            c in 1i64..1_000_000, d in 1i64..1_000_000,
        ) {
            let x = rational(a, b);
            let y = rational(-c, d);
            for p in [5u64, 7, 13] {
                prop_assert_eq!(vp(&(&x * &y), p), vp(&x, p) + vp(&y, p));
            }
        }
    }
}

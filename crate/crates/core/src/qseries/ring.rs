use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{reduce_int, reduce_rational, vp, vp_int, PrimePowerModulus, Rational, Valuation};
use crate::error::{Error, Result};

/// Descriptor of a coefficient domain, as written in serialized series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Q,
    Z,
    Zpm(PrimePowerModulus),
}

impl RingTag {
    pub fn name(&self) -> &'static str {
        match self {
            RingTag::Q => "Q",
            RingTag::Z => "Z",
            RingTag::Zpm(_) => "Zpm",
        }
    }
}

impl std::fmt::Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingTag::Zpm(m) => write!(f, "Z/{}Z", m),
            other => f.write_str(other.name()),
        }
    }
}

/// A commutative coefficient ring for truncated q-expansions.
///
/// The ring value carries whatever context its elements need (the modulus
/// for `Z/p^mZ`), so two series are compatible iff their rings compare equal.
// `from_*` take `&self`: the ring value carries the modulus.
#[allow(clippy::wrong_self_convention)]
pub trait CoeffRing: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational; fails if the rational does not lie in the ring.
    fn from_rational(&self, x: &Rational) -> Result<Self::Elem>;
    /// Reduction into `Z/p^mZ`.
    fn reduce_mod(&self, a: &Self::Elem, modulus: &PrimePowerModulus) -> Result<u64>;
    /// Canonical rational lift (least non-negative representative for residues).
    fn lift(&self, a: &Self::Elem) -> Rational;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// `acc += a * b`.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

/// Rings with a p-adic valuation on their elements.
pub trait PAdicValued: CoeffRing {
    fn valuation(&self, a: &Self::Elem, p: u64) -> Valuation;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZmodPm(pub PrimePowerModulus);

impl ZmodPm {
    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.0
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

impl CoeffRing for Rationals {
    type Elem = Rational;

    fn tag(&self) -> RingTag {
        RingTag::Q
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> Rational {
        Rational::from_integer(n.clone())
    }
    fn from_rational(&self, x: &Rational) -> Result<Rational> {
        Ok(x.clone())
    }
    fn reduce_mod(&self, a: &Rational, modulus: &PrimePowerModulus) -> Result<u64> {
        reduce_rational(a, modulus).map(|r| r.value())
    }
    fn lift(&self, a: &Rational) -> Rational {
        a.clone()
    }
    fn format(&self, a: &Rational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<Rational> {
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("{s:?}: zero denominator")));
                }
                Ok(Rational::new(parse_int(n)?, d))
            }
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}

impl PAdicValued for Rationals {
    fn valuation(&self, a: &Rational, p: u64) -> Valuation {
        vp(a, p)
    }
}

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn tag(&self) -> RingTag {
        RingTag::Z
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_rational(&self, x: &Rational) -> Result<BigInt> {
        if x.is_integer() {
            Ok(x.numer().clone())
        } else {
            Err(Error::InvalidArgument(format!("{x} is not an integer")))
        }
    }
    fn reduce_mod(&self, a: &BigInt, modulus: &PrimePowerModulus) -> Result<u64> {
        Ok(reduce_int(a, modulus))
    }
    fn lift(&self, a: &BigInt) -> Rational {
        Rational::from_integer(a.clone())
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigInt> {
        parse_int(s)
    }
}

impl PAdicValued for Integers {
    fn valuation(&self, a: &BigInt, p: u64) -> Valuation {
        vp_int(a, p)
    }
}

impl CoeffRing for ZmodPm {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::Zpm(self.0)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0.modulus()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.0.add(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.0.sub(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.0.neg(*a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.0.mul(*a, *b)
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        reduce_int(n, &self.0)
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.0.from_i64(n)
    }
    fn from_rational(&self, x: &Rational) -> Result<u64> {
        reduce_rational(x, &self.0).map(|r| r.value())
    }
    fn reduce_mod(&self, a: &u64, modulus: &PrimePowerModulus) -> Result<u64> {
        if modulus.p() != self.0.p() || modulus.m() > self.0.m() {
            return Err(Error::DomainMismatch {
                left: self.tag().to_string(),
                right: RingTag::Zpm(*modulus).to_string(),
            });
        }
        Ok(a % modulus.modulus())
    }
    fn lift(&self, a: &u64) -> Rational {
        Rational::from_integer(BigInt::from(*a))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let n = parse_int(s)?;
        let modulus = BigInt::from(self.0.modulus());
        if n.is_negative_or_out_of(&modulus) {
            return Err(Error::Parse(format!("{s:?} is not a residue mod {}", self.0)));
        }
        Ok(reduce_int(&n, &self.0))
    }
}

trait RangeCheck {
    fn is_negative_or_out_of(&self, bound: &Self) -> bool;
}

impl RangeCheck for BigInt {
    fn is_negative_or_out_of(&self, bound: &BigInt) -> bool {
        self.sign() == num_bigint::Sign::Minus || self >= bound
    }
}

impl PAdicValued for ZmodPm {
    /// Valuation of the least non-negative lift; zero is `Infinite`.
    fn valuation(&self, a: &u64, p: u64) -> Valuation {
        if *a == 0 {
            return Valuation::Infinite;
        }
        vp_int(&BigInt::from(*a), p)
    }
}

/// Exact division of every integer by `d`; panics if not exact.
pub(crate) fn exact_div(a: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(d);
    assert!(r.is_zero(), "inexact division of {a} by {d}");
    q
}

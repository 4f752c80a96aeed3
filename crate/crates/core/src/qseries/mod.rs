//! Truncated q-expansions over a fixed coefficient ring.
//!
//! A [`QSeries`] stores `a_0, ..., a_{N-1}` and is known modulo `q^N`; `N` is
//! its precision. Every operation reports the precision it can guarantee, and
//! comparisons past a known precision are refused rather than truncated.

mod json;
mod ring;

pub use json::{AnySeries, SeriesJson};
pub use ring::{CoeffRing, Integers, PAdicValued, Rationals, RingTag, ZmodPm};

pub(crate) use ring::exact_div;

use crate::arith::{PrimePowerModulus, Valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

pub type RationalSeries = QSeries<Rationals>;
pub type IntegerSeries = QSeries<Integers>;
pub type ResidueSeries = QSeries<ZmodPm>;

fn check_same<R: CoeffRing>(a: &R, b: &R) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            left: a.tag().to_string(),
            right: b.tag().to_string(),
        })
    }
}

impl<R: CoeffRing> QSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series precision must be at least 1".into()));
        }
        Ok(Self { ring, coeffs })
    }

    pub fn from_fn(ring: R, precision: usize, mut f: impl FnMut(usize) -> R::Elem) -> Self {
        assert!(precision >= 1, "series precision must be at least 1");
        let coeffs = (0..precision).map(&mut f).collect();
        Self { ring, coeffs }
    }

    pub fn zero(ring: R, precision: usize) -> Self {
        let z = ring.zero();
        Self::from_fn(ring, precision, |_| z.clone())
    }

    /// The constant `c + O(q^N)`.
    pub fn constant(ring: R, c: R::Elem, precision: usize) -> Self {
        let mut s = Self::zero(ring, precision);
        s.coeffs[0] = c;
        s
    }

    pub fn one(ring: R, precision: usize) -> Self {
        let one = ring.one();
        Self::constant(ring, one, precision)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R::Elem {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision == 0 || precision > self.precision() {
            return Err(Error::InsufficientPrecision {
                needed: precision.max(1),
                available: self.precision(),
            });
        }
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..precision].to_vec(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        let n = self.precision().min(other.precision());
        Ok(Self::from_fn(self.ring.clone(), n, |i| {
            self.ring.add(&self.coeffs[i], &other.coeffs[i])
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        let n = self.precision().min(other.precision());
        Ok(Self::from_fn(self.ring.clone(), n, |i| {
            self.ring.sub(&self.coeffs[i], &other.coeffs[i])
        }))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.ring.clone(), self.precision(), |i| self.ring.neg(&self.coeffs[i]))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_fn(self.ring.clone(), self.precision(), |i| {
            self.ring.mul(c, &self.coeffs[i])
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.ring, &other.ring)?;
        let n = self.precision().min(other.precision());
        let ring = &self.ring;
        let mut out = vec![ring.zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                ring.mul_add_assign(&mut out[i + j], a, b);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            coeffs: out,
        })
    }

    /// Binary exponentiation of the truncated product.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `sum a_n q^n -> sum n a_n q^n`.
    pub fn theta_naive(&self) -> Self {
        Self::from_fn(self.ring.clone(), self.precision(), |n| {
            self.ring.mul(&self.ring.from_i64(n as i64), &self.coeffs[n])
        })
    }

    /// `sum a_n q^n -> sum a_n q^{np}`. Output precision is
    /// `min(cap, p * precision)`; with no cap it is `p * precision`.
    pub fn apply_v(&self, p: u64, cap: Option<usize>) -> Self {
        let p = p as usize;
        let full = p * self.precision();
        let n = cap.map_or(full, |c| c.min(full)).max(1);
        let mut out = vec![self.ring.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * p >= n {
                break;
            }
            out[i * p] = a.clone();
        }
        Self {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }

    /// Coefficientwise image in another ring.
    pub fn map<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<QSeries<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(QSeries { ring, coeffs })
    }

    /// Reduction modulo `p^m`.
    pub fn reduce(&self, modulus: &PrimePowerModulus) -> Result<ResidueSeries> {
        self.map(ZmodPm(*modulus), |a| self.ring.reduce_mod(a, modulus))
    }

    /// Canonical lift to rational coefficients.
    pub fn to_rationals(&self) -> RationalSeries {
        QSeries {
            ring: Rationals,
            coeffs: self.coeffs.iter().map(|a| self.ring.lift(a)).collect(),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson::from_series(self)
    }
}

impl<R: PAdicValued> QSeries<R> {
    /// Minimum valuation over the stored coefficients; `Infinite` for zero.
    pub fn series_vp(&self, p: u64) -> Valuation {
        self.coeffs
            .iter()
            .map(|a| self.ring.valuation(a, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// True iff `f - g` has valuation `>= t` on its first `precision`
    /// coefficients.
    pub fn congruent_mod(&self, other: &Self, p: u64, t: u32, precision: usize) -> Result<bool> {
        check_same(&self.ring, &other.ring)?;
        let available = self.precision().min(other.precision());
        if precision > available {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available,
            });
        }
        let t = Valuation::Finite(t as i64);
        Ok((0..precision).all(|i| {
            let d = self.ring.sub(&self.coeffs[i], &other.coeffs[i]);
            self.ring.valuation(&d, p) >= t
        }))
    }
}

/// `congruent_mod` at the full shared precision.
pub fn congruent_mod<R: PAdicValued>(f: &QSeries<R>, g: &QSeries<R>, p: u64, t: u32) -> Result<bool> {
    f.congruent_mod(g, p, t, f.precision().min(g.precision()))
}

/// Linear combination `sum c_i s_i` of same-precision series.
pub fn linear_combination<R: CoeffRing>(
    ring: &R,
    coeffs: &[R::Elem],
    series: &[QSeries<R>],
    precision: usize,
) -> QSeries<R> {
    let mut out = vec![ring.zero(); precision];
    for (c, s) in coeffs.iter().zip(series) {
        if ring.is_zero(c) {
            continue;
        }
        for (o, a) in out.iter_mut().zip(&s.coeffs[..precision]) {
            ring.mul_add_assign(o, c, a);
        }
    }
    QSeries {
        ring: ring.clone(),
        coeffs: out,
    }
}

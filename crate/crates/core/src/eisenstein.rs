//! Eisenstein series `G_k`, `E_k`, the quasimodular `G_2`, `E_2`, and the
//! mod `p^t` truncations of the p-adic series `G_k*`.

use num_bigint::BigInt;

use crate::arith::{bernoulli, sigma, sigma_star, PrimePowerModulus, Rational};
use crate::error::{Error, Result};
use crate::qseries::{CoeffRing, QSeries, ResidueSeries, ZmodPm};

fn check_weight(k: u32) -> Result<()> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein weight must be even and at least 4, got {k}"
        )));
    }
    Ok(())
}

/// Constant term `-B_k / 2k` of `G_k`.
pub fn g_constant_term(k: u32) -> Rational {
    -bernoulli(k as usize) / Rational::from_integer(BigInt::from(2 * k))
}

fn divisor_sum_series<R: CoeffRing>(
    t: u32,
    constant: R::Elem,
    scale: Option<&R::Elem>,
    precision: usize,
    ring: &R,
) -> QSeries<R> {
    QSeries::from_fn(ring.clone(), precision, |n| {
        if n == 0 {
            return constant.clone();
        }
        let s = ring.from_int(&sigma(t, n as u64));
        match scale {
            Some(c) => ring.mul(c, &s),
            None => s,
        }
    })
}

/// `G_k = -B_k/2k + sum sigma_{k-1}(n) q^n`.
pub fn g<R: CoeffRing>(k: u32, precision: usize, ring: &R) -> Result<QSeries<R>> {
    check_weight(k)?;
    let constant = ring.from_rational(&g_constant_term(k))?;
    Ok(divisor_sum_series(k - 1, constant, None, precision, ring))
}

/// `E_k = -(2k/B_k) G_k`, normalized to constant term 1.
pub fn e<R: CoeffRing>(k: u32, precision: usize, ring: &R) -> Result<QSeries<R>> {
    check_weight(k)?;
    let scale = Rational::from_integer(BigInt::from(-2 * k as i64)) / bernoulli(k as usize);
    let scale = ring.from_rational(&scale)?;
    Ok(divisor_sum_series(k - 1, ring.one(), Some(&scale), precision, ring))
}

/// `G_2 = -1/24 + sum sigma_1(n) q^n`.
pub fn g2<R: CoeffRing>(precision: usize, ring: &R) -> Result<QSeries<R>> {
    let constant = ring.from_rational(&Rational::new(BigInt::from(-1), BigInt::from(24)))?;
    Ok(divisor_sum_series(1, constant, None, precision, ring))
}

/// `E_2 = -24 G_2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn e2<R: CoeffRing>(precision: usize, ring: &R) -> QSeries<R> {
    let scale = ring.from_i64(-24);
    divisor_sum_series(1, ring.one(), Some(&scale), precision, ring)
}

/// The weight `k + p^{t-1}(p-1)` used to represent `G_k*` modulo `p^t`.
pub fn g_star_weight(k: u32, p: u64, t: u32) -> u32 {
    k + (p.pow(t - 1) * (p - 1)) as u32
}

fn check_g_star(k: u32, p: u64, t: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 || t == 0 {
        return Err(Error::InvalidArgument(format!(
            "G* needs even k >= 2 and t >= 1, got k = {k}, t = {t}"
        )));
    }
    if (k as u64).is_multiple_of(p - 1) {
        return Err(Error::DivisibilityViolation {
            weight: k as i64,
            p_minus_one: p - 1,
        });
    }
    Ok(())
}

/// `G_k*` modulo `p^t`, realized as `G_{k + p^{t-1}(p-1)}` reduced mod `p^t`.
pub fn g_star(k: u32, p: u64, t: u32, precision: usize) -> Result<ResidueSeries> {
    let modulus = PrimePowerModulus::new(p, t)?;
    check_g_star(k, p, t)?;
    g(g_star_weight(k, p, t), precision, &ZmodPm(modulus))
}

/// `G_k*` modulo `p^t` from the restricted divisor sums
/// `sum_{d | n, p !| d} d^{k-1}`. The constant term is taken from [`g_star`].
pub fn g_star_direct(k: u32, p: u64, t: u32, precision: usize) -> Result<ResidueSeries> {
    let modulus = PrimePowerModulus::new(p, t)?;
    check_g_star(k, p, t)?;
    let ring = ZmodPm(modulus);
    let constant = *g_star(k, p, t, 1)?.coeff(0);
    Ok(QSeries::from_fn(ring, precision, |n| {
        if n == 0 {
            constant
        } else {
            ring.from_int(&sigma_star(k - 1, n as u64, p))
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational, Valuation};
    use crate::qseries::{Integers, Rationals};

    #[test]
    fn g4_and_g6() {
        let g4 = g(4, 5, &Rationals).unwrap();
        assert_eq!(*g4.coeff(0), rational(1, 240));
        assert_eq!(*g4.coeff(1), rational(1, 1));
        let g6 = g(6, 5, &Rationals).unwrap();
        assert_eq!(*g6.coeff(2), rational(33, 1));
        assert_eq!(*g6.coeff(0), rational(-1, 504));
    }

    #[test]
    fn e_normalization() {
        for k in [4, 6, 8, 10, 12, 16] {
            assert_eq!(*e(k, 3, &Rationals).unwrap().coeff(0), rational(1, 1));
        }
        let e4 = e(4, 4, &Integers).unwrap();
        assert_eq!(e4.coeffs(), &[1, 240, 2160, 6720].map(BigInt::from));
        let e6 = e(6, 3, &Integers).unwrap();
        assert_eq!(e6.coeffs(), &[1, -504, -16632].map(BigInt::from));
    }

    #[test]
    fn e12_is_not_integral() {
        assert!(e(12, 3, &Integers).is_err());
    }

    #[test]
    fn hasse_invariant_mod_5() {
        let modulus = PrimePowerModulus::new(5, 1).unwrap();
        let e4 = e(4, 20, &ZmodPm(modulus)).unwrap();
        assert_eq!(e4, QSeries::one(ZmodPm(modulus), 20));
    }

    #[test]
    fn g_mod_p_fails_when_p_minus_one_divides_k() {
        let modulus = PrimePowerModulus::new(5, 1).unwrap();
        assert!(matches!(
            g(4, 5, &ZmodPm(modulus)),
            Err(Error::NonInvertibleDenominator { .. })
        ));
        assert!(g(6, 5, &ZmodPm(modulus)).is_ok());
    }

    #[test]
    fn g2_and_e2() {
        let s = g2(5, &Rationals).unwrap();
        assert_eq!(*s.coeff(0), rational(-1, 24));
        let tail: Vec<Rational> = s.coeffs()[1..].to_vec();
        assert_eq!(tail, [1, 3, 4, 7].map(|v| rational(v, 1)));
        let e = e2(3, &Integers);
        assert_eq!(e.coeffs(), &[1, -24, -72].map(BigInt::from));
        assert_eq!(e.to_rationals(), g2(3, &Rationals).unwrap().scale(&rational(-24, 1)));
    }

    #[test]
    fn g_star_is_shifted_eisenstein() {
        let m25 = PrimePowerModulus::new(5, 2).unwrap();
        assert_eq!(g_star_weight(2, 5, 1), 6);
        assert_eq!(g_star_weight(2, 5, 2), 22);
        assert_eq!(g_star(2, 5, 2, 10).unwrap(), g(22, 10, &ZmodPm(m25)).unwrap());
        assert!(matches!(g_star(4, 5, 1, 5), Err(Error::DivisibilityViolation { .. })));
        assert!(matches!(g_star(6, 7, 1, 5), Err(Error::DivisibilityViolation { .. })));
    }

    #[test]
    fn g_star_direct_matches_restricted_sums() {
        let direct = g_star_direct(2, 5, 2, 31).unwrap();
        let shifted = g_star(2, 5, 2, 31).unwrap();
        for n in 1..=30 {
            assert_eq!(direct.coeff(n), shifted.coeff(n), "coefficient {n}");
            assert_eq!(BigInt::from(*direct.coeff(n)), sigma_star(1, n as u64, 5) % 25);
        }
        assert_eq!(*g_star_direct(2, 5, 2, 2).unwrap().coeff(1), 1);
        assert_eq!(*g_star_direct(2, 7, 1, 8).unwrap().coeff(7), 1);
    }

    #[test]
    fn g_p_plus_one_is_a_unit_series() {
        for p in [5u64, 7, 11] {
            let s = g(p as u32 + 1, 10, &Rationals).unwrap();
            assert_eq!(s.series_vp(p), Valuation::Finite(0));
        }
    }
}

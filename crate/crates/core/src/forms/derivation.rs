use super::{express, sturm_bound, Form};
use crate::eisenstein::e2;
use crate::error::Result;
use crate::qseries::{CoeffRing, QSeries};

/// `12 theta f - k E_2 f` on expansions.
pub fn partial_series<R: CoeffRing>(f: &QSeries<R>, k: u32) -> QSeries<R> {
    let ring = f.ring();
    let theta = f.theta_naive().scale(&ring.from_i64(12));
    let e2f = e2(f.precision(), ring).mul(f).expect("same ring");
    theta.sub(&e2f.scale(&ring.from_i64(k as i64))).expect("same ring")
}

/// The derivation `f -> 12 theta f - k E_2 f`, weight `k -> k + 2`.
pub fn partial_derivation<R: CoeffRing>(f: &Form<R>) -> Result<Form<R>> {
    let target = f.weight() + 2;
    let precision = f.series().precision().max(sturm_bound(target) + 1);
    express(&partial_series(&f.expansion(precision)?, f.weight()), target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::eisenstein;
    use crate::forms::{default_precision, delta};
    use crate::qseries::{Integers, Rationals};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn constant_goes_to_zero() {
        let one = express(&QSeries::one(Integers, 4), 0).unwrap();
        assert!(partial_derivation(&one).unwrap().is_zero());
    }

    #[test]
    fn ramanujan_identity_for_e4() {
        // (1/12) dE4 = -(1/3) E6, i.e. dE4 = -4 E6; both sides to 8 terms.
        let e4 = express(&eisenstein::e(4, 8, &Rationals).unwrap(), 4).unwrap();
        let d = partial_derivation(&e4).unwrap();
        let e6 = eisenstein::e(6, 8, &Rationals).unwrap();
        assert_eq!(
            d.expansion(8).unwrap().scale(&rational(1, 12)),
            e6.scale(&rational(-1, 3))
        );
    }

    #[test]
    fn delta_is_killed() {
        // dDelta is a weight-14 cusp form, hence zero.
        let d = express(&delta(10), 12).unwrap();
        assert!(partial_derivation(&d).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_a_square() {
        let e4 = eisenstein::e(4, 10, &Integers).unwrap();
        let sq = e4.mul(&e4).unwrap();
        let lhs = partial_series(&sq, 8);
        let rhs = e4.mul(&partial_series(&e4, 4)).unwrap().scale(&BigInt::from(2));
        assert_eq!(lhs, rhs);
    }

    fn monomial(a: u32, b: u32, c: u32, n: usize) -> (QSeries<Integers>, u32) {
        let e4 = eisenstein::e(4, n, &Integers).unwrap();
        let e6 = eisenstein::e(6, n, &Integers).unwrap();
        let s = e4
            .pow(a as u64)
            .mul(&e6.pow(b as u64))
            .unwrap()
            .mul(&delta(n).pow(c as u64))
            .unwrap();
        (s, 4 * a + 6 * b + 12 * c)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn derivation_law(x in (0u32..3, 0u32..3, 0u32..2), y in (0u32..3, 0u32..3, 0u32..2), cx in -20i64..20, cy in -20i64..20) {
            let n = 12;
            let (f, kf) = monomial(x.0, x.1, x.2, n);
            let (g, kg) = monomial(y.0, y.1, y.2, n);
            let f = f.scale(&BigInt::from(cx));
            let g = g.scale(&BigInt::from(cy));
            let lhs = partial_series(&f.mul(&g).unwrap(), kf + kg);
            let rhs = partial_series(&f, kf).mul(&g).unwrap().add(&f.mul(&partial_series(&g, kg)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // And the image is modular with integral coordinates.
            let form = express(&f.mul(&g).unwrap(), kf + kg).unwrap();
            let d = partial_derivation(&form.with_precision(default_precision(kf + kg + 2)).unwrap()).unwrap();
            prop_assert_eq!(d.weight(), kf + kg + 2);
        }
    }
}

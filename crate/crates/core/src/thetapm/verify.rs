use num_bigint::BigInt;

use super::{km, ThetaOperator};
use crate::arith::{bernoulli, is_prime, reduce_rational, PrimePowerModulus, Rational};
use crate::error::{Error, Result};
use crate::forms::{default_precision, hecke_form, hecke_tl_to, weight_filtration, FiltrationReport, Form};
use crate::qseries::{CoeffRing, ResidueSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub ell: u64,
    /// `T_l (theta f)`
    pub lhs: ResidueSeries,
    /// `l * theta (T_l f)`
    pub rhs: ResidueSeries,
    pub holds: bool,
}

/// Compares `T_l theta f` with `l theta T_l f` modulo `p^m` on the first `out`
/// coefficients.
pub fn verify_commutation<R: CoeffRing>(
    op: &ThetaOperator,
    f: &Form<R>,
    ell: u64,
    out: usize,
) -> Result<CommutationReport> {
    let md = op.modulus();
    if !is_prime(ell) || ell == md.p() {
        return Err(Error::InvalidArgument(format!(
            "l = {ell} must be a prime different from p = {}",
            md.p()
        )));
    }
    let k = f.weight();
    let needed = ell as usize * (out - 1) + 1;
    let theta_f = op.apply(f, needed)?.output;
    let lhs = hecke_tl_to(&theta_f.expansion(needed)?, k + op.weight_shift(), ell, out)?;

    let tf = hecke_form(f, ell)?;
    let rhs = op.apply(&tf, out)?.output.expansion(out)?.scale(&(ell % md.modulus()));
    let holds = lhs == rhs;
    Ok(CommutationReport { ell, lhs, rhs, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalWeightReport {
    /// `w_p(f)`, confirmed equal to the weight of `f`.
    pub base: FiltrationReport,
    /// `w_{p^m}(theta f)`
    pub filtration: FiltrationReport,
    pub predicted: u32,
    pub holds: bool,
}

/// Computes `w_{p^m}(theta f)` and compares it with `k + k(m)`.
///
/// Requires `m >= 2`, `p ∤ k` and `w_p(f) = k`; a violated hypothesis is
/// reported as `HypothesisFailure`. The filtration is computed at two
/// precisions and must agree.
pub fn verify_optimal_weight<R: CoeffRing>(
    f: &Form<R>,
    modulus: &PrimePowerModulus,
    precision: usize,
) -> Result<OptimalWeightReport> {
    let p = modulus.p();
    let k = f.weight();
    if modulus.m() < 2 {
        return Err(Error::InvalidArgument("optimal-weight check needs m >= 2".into()));
    }
    if (k as u64).is_multiple_of(p) {
        return Err(Error::HypothesisFailure(format!("p = {p} divides k = {k}")));
    }
    let predicted = k + km(p, modulus.m());
    let n = precision.max(default_precision(predicted));

    let mod_p = modulus.with_exponent(1)?;
    let base = weight_filtration(&f.expansion(n)?.reduce(&mod_p)?, k)?;
    if base.w != k {
        return Err(Error::HypothesisFailure(format!(
            "w_p(f) = {} differs from k = {k}",
            base.w
        )));
    }

    let theta_series = |n: usize| -> Result<ResidueSeries> { Ok(f.expansion(n)?.reduce(modulus)?.theta_naive()) };
    let filtration = weight_filtration(&theta_series(n)?, predicted)?;
    let again = weight_filtration(&theta_series(2 * n)?, predicted)?;
    if again.w != filtration.w {
        return Err(Error::InvariantViolation(format!(
            "filtration {} at q^{n} but {} at q^{}",
            filtration.w,
            again.w,
            2 * n
        )));
    }
    let holds = filtration.w == predicted;
    Ok(OptimalWeightReport {
        base,
        filtration,
        predicted,
        holds,
    })
}

/// `B_2/2 ≡ B_{p(p-1)+2}/(p(p-1)+2) + p B_{p+1}/(p+1) (mod p^2)`.
pub fn verify_bernoulli_congruence(p: u64) -> Result<bool> {
    let md = PrimePowerModulus::new(p, 2)?;
    let ratio = |k: u64| bernoulli(k as usize) / Rational::from_integer(BigInt::from(k));
    let lhs = ratio(2);
    let big = p * (p - 1) + 2;
    let rhs = ratio(big) + Rational::from_integer(BigInt::from(p)) * ratio(p + 1);
    Ok(reduce_rational(&lhs, &md)? == reduce_rational(&rhs, &md)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein;
    use crate::forms::{delta, express};
    use crate::qseries::Rationals;

    #[test]
    fn bernoulli_congruence() {
        for p in [5, 7, 11, 13] {
            assert!(verify_bernoulli_congruence(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn commutation_examples() {
        let d = express(&delta(10), 12).unwrap();
        let op = ThetaOperator::new(5, 2).unwrap();
        assert!(verify_commutation(&op, &d, 2, 15).unwrap().holds);
        assert!(matches!(
            verify_commutation(&op, &d, 5, 15),
            Err(Error::InvalidArgument(_))
        ));

        let e4 = express(&eisenstein::e(4, 5, &Rationals).unwrap(), 4).unwrap();
        let op7 = ThetaOperator::new(7, 1).unwrap();
        assert!(verify_commutation(&op7, &e4, 3, 12).unwrap().holds);
    }

    #[test]
    fn optimal_weight_for_delta_mod_25() {
        let d = express(&delta(10), 12).unwrap();
        let r = verify_optimal_weight(&d, &PrimePowerModulus::new(5, 2).unwrap(), 0).unwrap();
        assert_eq!(r.base.w, 12);
        assert_eq!(r.predicted, 54);
        assert_eq!(r.filtration.w, 54);
        assert_eq!(r.filtration.rejected, vec![14, 34]);
        assert!(r.holds);
    }

    #[test]
    fn hasse_invariant_fails_hypothesis() {
        let e4 = express(&eisenstein::e(4, 5, &Rationals).unwrap(), 4).unwrap();
        assert!(matches!(
            verify_optimal_weight(&e4, &PrimePowerModulus::new(5, 2).unwrap(), 0),
            Err(Error::HypothesisFailure(_))
        ));
        let e6 = express(&eisenstein::e(6, 5, &Rationals).unwrap(), 6).unwrap();
        assert!(matches!(
            verify_optimal_weight(&e6, &PrimePowerModulus::new(7, 2).unwrap(), 0),
            Err(Error::HypothesisFailure(_))
        ));
    }
}

//! Laws of the theta operator checked through the public API.

use thetamod::arith::PrimePowerModulus;
use thetamod::forms::{default_precision, weight_filtration, FiltrationReport, ResidueForm};
use thetamod::registry::FormExpr;
use thetamod::thetapm::{km, ThetaOperator};

fn form(name: &str) -> thetamod::forms::RationalForm {
    name.parse::<FormExpr>().unwrap().rational_form(0).unwrap()
}

fn filtration(f: &ResidueForm) -> FiltrationReport {
    let n = default_precision(f.weight());
    let a = weight_filtration(&f.expansion(n).unwrap(), f.weight()).unwrap();
    let b = weight_filtration(&f.expansion(2 * n).unwrap(), f.weight()).unwrap();
    assert_eq!(a.w, b.w, "filtration changed between q^{n} and q^{}", 2 * n);
    a
}

/// `theta^j f` mod p, as forms of weight `k + j k(1)`.
fn theta_iterates(name: &str, p: u64, count: usize) -> Vec<ResidueForm> {
    let op = ThetaOperator::new(p, 1).unwrap();
    let md = PrimePowerModulus::new(p, 1).unwrap();
    let mut out = vec![form(name).reduce(&md).unwrap()];
    for _ in 0..count {
        let next = op.apply_default(out.last().unwrap()).unwrap().output;
        out.push(next);
    }
    out
}

/// `w(theta f) <= w(f) + p + 1`, with equality exactly when `p ∤ w(f)`.
fn assert_mod_p_law(name: &str, p: u64) {
    let md = PrimePowerModulus::new(p, 1).unwrap();
    let f = form(name).reduce(&md).unwrap();
    let w = filtration(&f).w;
    let theta = &theta_iterates(name, p, 1)[1];
    assert_eq!(theta.weight(), f.weight() + km(p, 1));
    let w_theta = filtration(theta).w;
    if !(w as u64).is_multiple_of(p) {
        assert_eq!(w_theta, w + p as u32 + 1, "{name}, p = {p}");
    } else {
        assert!(w_theta < w + p as u32 + 1, "{name}, p = {p}");
    }
}

#[test]
fn mod_p_filtration_law() {
    assert_mod_p_law("delta", 5);
    assert_mod_p_law("delta", 7);
    assert_mod_p_law("e4*delta", 7);
}

#[test]
fn filtration_drops_when_p_divides_it() {
    // w(theta^j delta) mod 5 climbs by 6 while 5 ∤ w, reaching 30 at j = 3;
    // the next step must fall short of 30 + 6.
    let iterates = theta_iterates("delta", 5, 5);
    let w: Vec<u32> = iterates.iter().map(|f| filtration(f).w).collect();
    assert_eq!(&w[..4], &[12, 18, 24, 30]);
    assert!(w[4] < 36, "w(theta^4 delta) = {}", w[4]);
    // n^4 ≡ 1 mod 5 for 5 ∤ n and tau(5n) ≡ 0 mod 5, so theta^4 delta ≡ delta:
    // the drop goes all the way back to 12, and theta^5 = theta closes the cycle.
    assert_eq!(w[4], 12);
    assert_eq!(w[5], 18);
}

#[test]
fn level_p_output_weight_exceeds_classical_bound() {
    // For m = 1 the operator lands in weight k + 2p, while the filtration of
    // theta f obeys the classical bound w(f) + p + 1.
    for (name, p) in [("delta", 5u64), ("delta", 7), ("e6", 5), ("e4*delta", 7)] {
        let md = PrimePowerModulus::new(p, 1).unwrap();
        let f = form(name).reduce(&md).unwrap();
        let theta = &theta_iterates(name, p, 1)[1];
        assert_eq!(theta.weight(), f.weight() + 2 * p as u32);
        assert!(
            filtration(theta).w <= filtration(&f).w + p as u32 + 1,
            "{name}, p = {p}"
        );
    }
}

#[test]
fn multiplying_by_e_p_plus_1() {
    for p in [5u64, 7] {
        let md = PrimePowerModulus::new(p, 1).unwrap();
        let e = form(&format!("ek:{}", p + 1));
        for base in ["delta", "e4*delta"] {
            let phi = form(base);
            let w_phi = filtration(&phi.reduce(&md).unwrap()).w;
            for a in 1..=2u32 {
                let prod = phi.mul(&e.pow(a).unwrap()).unwrap().reduce(&md).unwrap();
                assert_eq!(
                    filtration(&prod).w,
                    w_phi + a * (p as u32 + 1),
                    "{base}, p = {p}, a = {a}"
                );
            }
        }
    }
}

#[test]
fn optimal_weight_mod_prime_squares() {
    for (p, expected, rejected) in [(5u64, 54u32, vec![14u32, 34]), (7, 98, vec![14, 56])] {
        let md = PrimePowerModulus::new(p, 2).unwrap();
        let r = thetamod::thetapm::verify_optimal_weight(&form("delta"), &md, 0).unwrap();
        assert_eq!(r.base.w, 12);
        assert_eq!(r.filtration.w, expected);
        assert_eq!(r.filtration.rejected, rejected);
        assert!(r.holds);
    }
}

#[test]
fn hasse_invariant_fails_the_hypothesis() {
    let md = PrimePowerModulus::new(5, 2).unwrap();
    let err = thetamod::thetapm::verify_optimal_weight(&form("e4"), &md, 0).unwrap_err();
    assert!(matches!(err, thetamod::Error::HypothesisFailure(_)), "{err}");
}

#[test]
fn theta_of_constant_vanishes() {
    let op = ThetaOperator::new(5, 2).unwrap();
    let one = thetamod::forms::Form::from_coords(
        thetamod::qseries::Rationals,
        0,
        vec![thetamod::arith::rational(1, 1)],
        10,
    )
    .unwrap();
    let out = op.apply(&one, 10).unwrap().output;
    assert_eq!(out.weight(), km(5, 2));
    assert!(out.expansion(10).unwrap().is_zero());
}

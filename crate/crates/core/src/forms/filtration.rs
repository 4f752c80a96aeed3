use serde::Serialize;

use super::{solve_congruence, sturm_bound, ResidueForm};
use crate::arith::PrimePowerModulus;
use crate::error::{Error, Result};
use crate::qseries::{CoeffRing, ResidueSeries};

/// The weight filtration `w_{p^m}` of a series, with a witness form.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationReport {
    pub modulus: PrimePowerModulus,
    pub input_weight: u32,
    pub w: u32,
    pub witness: ResidueForm,
    /// Candidate weights below `w` refuted by the solver, ascending.
    pub rejected: Vec<u32>,
}

#[derive(Serialize)]
struct FiltrationJson {
    p: String,
    m: String,
    input_weight: String,
    w: String,
    witness_coords: Vec<String>,
    rejected: Vec<String>,
}

impl FiltrationReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let ring = self.witness.ring();
        let doc = FiltrationJson {
            p: self.modulus.p().to_string(),
            m: self.modulus.m().to_string(),
            input_weight: self.input_weight.to_string(),
            w: self.w.to_string(),
            witness_coords: self.witness.coords().iter().map(|c| ring.format(c)).collect(),
            rejected: self.rejected.iter().map(u32::to_string).collect(),
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

/// Step between weights that can carry the same form modulo `p^m`.
pub fn filtration_step(modulus: &PrimePowerModulus) -> u32 {
    (modulus.p_power(modulus.m() - 1) * (modulus.p() - 1)) as u32
}

/// Smallest weight `w ≡ k (mod p^{m-1}(p-1))` in which `f` is realized modulo
/// `p^m`, scanning candidates upward from `k mod p^{m-1}(p-1)`.
///
/// `f` must be a weight-`k` form modulo `p^m` that does not vanish mod `p`.
pub fn weight_filtration(f: &ResidueSeries, k: u32) -> Result<FiltrationReport> {
    let modulus = *f.ring().modulus();
    let p = modulus.p();
    if f.coeffs().iter().all(|&c| c % p == 0) {
        return Err(Error::NotNormalized { p });
    }
    let needed = sturm_bound(k) + 1;
    if f.precision() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: f.precision(),
        });
    }
    let step = filtration_step(&modulus);
    let mut rejected = Vec::new();
    let mut w = k % step;
    while w <= k {
        if let Some((witness, _)) = solve_congruence(f, w)? {
            return Ok(FiltrationReport {
                modulus,
                input_weight: k,
                w,
                witness,
                rejected,
            });
        }
        rejected.push(w);
        w += step;
    }
    Err(Error::NotModularOfThisWeight {
        weight: k as i64,
        index: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein;
    use crate::forms::{default_precision, delta};
    use crate::qseries::{Integers, ZmodPm};

    fn md(p: u64, m: u32) -> PrimePowerModulus {
        PrimePowerModulus::new(p, m).unwrap()
    }

    /// Brute force: enumerate every weight-w form mod p through its first
    /// `dim` coefficients and compare with the target.
    fn brute_force_realizable(target: &ResidueSeries, w: u32) -> bool {
        let d = crate::forms::dim_mk(w as i64);
        let m = *target.ring().modulus();
        let n = m.modulus();
        (0..n.pow(d as u32)).any(|mut idx| {
            let coords: Vec<u64> = (0..d)
                .map(|_| {
                    let v = idx % n;
                    idx /= n;
                    v
                })
                .collect();
            let f = crate::forms::Form::from_coords(ZmodPm(m), w, coords, target.precision()).unwrap();
            f.series() == target
        })
    }

    #[test]
    fn delta_mod_5() {
        let s = delta(default_precision(12)).reduce(&md(5, 1)).unwrap();
        let r = weight_filtration(&s, 12).unwrap();
        assert_eq!(r.w, 12);
        assert_eq!(r.rejected, vec![0, 4, 8]);
        for w in [0, 4, 8] {
            assert!(!brute_force_realizable(&s, w));
        }
    }

    #[test]
    fn hasse_invariant_power_has_weight_zero() {
        for (p, m) in [(5u64, 1u32), (5, 2), (7, 2)] {
            let modulus = md(p, m);
            let k = (p.pow(m - 1) * (p - 1)) as u32;
            let e = eisenstein::e((p - 1) as u32, default_precision(k), &Integers).unwrap();
            let s = e.pow(p.pow(m - 1)).reduce(&modulus).unwrap();
            let r = weight_filtration(&s, k).unwrap();
            assert_eq!(r.w, 0);
            assert_eq!(r.witness.coords(), &[1]);
        }
    }

    #[test]
    fn e6_mod_7() {
        let s = eisenstein::e(6, 10, &ZmodPm(md(7, 1))).unwrap();
        assert_eq!(weight_filtration(&s, 6).unwrap().w, 0);
    }

    #[test]
    fn rejects_forms_vanishing_mod_p() {
        let s = delta(8).scale(&5.into()).reduce(&md(5, 2)).unwrap();
        assert!(matches!(weight_filtration(&s, 12), Err(Error::NotNormalized { p: 5 })));
    }

    #[test]
    fn report_json_uses_strings() {
        let s = delta(8).reduce(&md(5, 1)).unwrap();
        let v = weight_filtration(&s, 12).unwrap().to_json_value();
        assert_eq!(v["w"], "12");
        assert_eq!(v["p"], "5");
        assert_eq!(v["rejected"], serde_json::json!(["0", "4", "8"]));
        assert_eq!(v["witness_coords"], serde_json::json!(["0", "1"]));
    }

    #[test]
    fn filtration_is_congruent_to_input_weight() {
        let modulus = md(7, 2);
        let e4 = eisenstein::e(4, 30, &Integers).unwrap();
        let e6 = eisenstein::e(6, 30, &Integers).unwrap();
        for (a, b) in [(1u64, 0u64), (0, 1), (2, 1), (3, 2), (5, 0)] {
            let s = e4.pow(a).mul(&e6.pow(b)).unwrap().reduce(&modulus).unwrap();
            let k = (4 * a + 6 * b) as u32;
            let r = weight_filtration(&s, k).unwrap();
            assert_eq!((k - r.w) % filtration_step(&modulus), 0);
            assert_eq!(r.witness.expansion(30).unwrap(), s);
        }
    }
}

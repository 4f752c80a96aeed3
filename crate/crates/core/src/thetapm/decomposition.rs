use num_bigint::BigInt;

use super::{km, tj, weights_kj};
use crate::arith::{PrimePowerModulus, Rational, Valuation};
use crate::eisenstein;
use crate::error::{Error, Result};
use crate::forms::{default_precision, express, is_congruent_to_weight, sturm_bound, RationalForm};
use crate::qseries::{congruent_mod, QSeries, RationalSeries, Rationals};

/// Finds `h` of weight `k + p^s(p-1)` with `f|V ≡ h (mod p^t)` and `v_p(h) = 0`.
///
/// Such an `h` exists whenever `v_p(f) = 0` and `min(s + 1, p^s + 1 - k) >= t`;
/// it is found by solving the congruence in the Miller basis and checked again
/// at twice the working precision.
pub fn find_v_approximation(f: &RationalForm, s: u32, t: u32, p: u64, precision: usize) -> Result<RationalForm> {
    let k = f.weight();
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let ps = p
        .checked_pow(s)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{s} overflows")))?;
    let bound = (s as i64 + 1).min(ps as i64 + 1 - k as i64);
    if bound < t as i64 {
        return Err(Error::HypothesisFailure(format!(
            "min(s + 1, p^s + 1 - k) = {bound} < t = {t} for k = {k}, s = {s}, p = {p}"
        )));
    }
    let target_weight = k + (ps * (p - 1)) as u32;
    let n = precision.max(sturm_bound(target_weight) + 1);
    let vf = v_image(f, p, n)?;
    if vf.series_vp(p) != Valuation::Finite(0) {
        return Err(Error::HypothesisFailure(format!(
            "v_p(f) = {} is not 0",
            vf.series_vp(p)
        )));
    }
    let modulus = PrimePowerModulus::new(p, t)?;
    let witness = is_congruent_to_weight(&vf.reduce(&modulus)?, target_weight)?.ok_or_else(|| {
        Error::NoSolution(format!(
            "f|V has no weight-{target_weight} form congruent mod {modulus}"
        ))
    })?;
    let h = witness.to_rationals();

    let check = 2 * n;
    if !congruent_mod(&v_image(f, p, check)?, &h.expansion(check)?, p, t)? {
        return Err(Error::NoSolution(format!(
            "weight-{target_weight} witness stops matching f|V mod {modulus} below q^{check}"
        )));
    }
    if h.series_vp(p) != Valuation::Finite(0) {
        return Err(Error::InvariantViolation(format!(
            "v_p(h) = {} is not 0",
            h.series_vp(p)
        )));
    }
    Ok(h)
}

fn v_image(f: &RationalForm, p: u64, n: usize) -> Result<RationalSeries> {
    let base = n.div_ceil(p as usize);
    Ok(f.expansion(base)?.apply_v(p, Some(n)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionEntry {
    pub j: u32,
    pub weight: u32,
    pub t: u64,
    pub form: RationalForm,
}

/// Forms `f_0, ..., f_{m-1}` with `G_2 ≡ sum_j p^j f_j (mod p^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Decomposition {
    modulus: PrimePowerModulus,
    entries: Vec<DecompositionEntry>,
}

fn g_form(k: u32, precision: usize) -> Result<RationalForm> {
    let n = precision.max(sturm_bound(k) + 1);
    express(&eisenstein::g(k, n, &Rationals)?, k)
}

fn p_power_rational(p: u64, j: u32) -> Rational {
    Rational::from_integer(BigInt::from(p.pow(j)))
}

/// `sum_j p^j (G_{2 + p^{m-j-1}(p-1)} | V^j)`, built from Eisenstein series
/// alone.
pub fn v_expansion_sum(p: u64, m: u32, precision: usize) -> Result<RationalSeries> {
    let mut acc = QSeries::zero(Rationals, precision);
    for j in 0..m {
        let k = 2 + (p.pow(m - j - 1) * (p - 1)) as u32;
        let pj = p.pow(j) as usize;
        let mut s = eisenstein::g(k, precision.div_ceil(pj), &Rationals)?;
        for _ in 0..j {
            s = s.apply_v(p, Some(precision));
        }
        acc = acc.add(&s.scale(&p_power_rational(p, j)))?;
    }
    Ok(acc)
}

impl G2Decomposition {
    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    pub fn entries(&self) -> &[DecompositionEntry] {
        &self.entries
    }

    /// `sum_j p^j f_j` to `precision` coefficients.
    pub fn congruence_sum(&self, precision: usize) -> Result<RationalSeries> {
        let p = self.modulus.p();
        let mut acc = QSeries::zero(Rationals, precision);
        for e in &self.entries {
            acc = acc.add(&e.form.expansion(precision)?.scale(&p_power_rational(p, e.j)))?;
        }
        Ok(acc)
    }

    /// Checks every structural and congruence invariant at `precision` and at
    /// twice that.
    pub fn verify(&self, precision: usize) -> Result<()> {
        let p = self.modulus.p();
        let m = self.modulus.m();
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        if self.entries.len() != m as usize {
            return fail(format!("{} entries for m = {m}", self.entries.len()));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if e.j != i as u32 || e.weight != weights_kj(p, m, e.j) || e.form.weight() != e.weight {
                return fail(format!("entry {i} has inconsistent index or weight"));
            }
            if i > 0 && self.entries[i - 1].weight >= e.weight {
                return fail("weights are not strictly increasing".into());
            }
            if e.weight as u64 + e.t * p.pow(m - e.j - 1) * (p - 1) != km(p, m) as u64 {
                return fail(format!("k(m) != k_{0} + t_{0} p^(m-{0}-1)(p-1)", e.j));
            }
            if e.form.expansion(precision)?.series_vp(p) != Valuation::Finite(0) {
                return fail(format!("v_p(f_{}) != 0", e.j));
            }
        }
        let last = &self.entries[m as usize - 1].form;
        let gp1 = eisenstein::g(p as u32 + 1, precision, &Rationals)?;
        if last.expansion(precision)? != gp1.pow(p.pow(m - 1)) {
            return fail("f_{m-1} differs from G_{p+1}^{p^{m-1}}".into());
        }
        for n in [precision, 2 * precision] {
            let g2 = eisenstein::g2(n, &Rationals)?;
            let sum = self.congruence_sum(n)?;
            if !congruent_mod(&sum, &g2, p, m)? {
                return fail(format!(
                    "sum p^j f_j is not congruent to G_2 mod {} below q^{n}",
                    self.modulus
                ));
            }
            if !congruent_mod(&sum, &v_expansion_sum(p, m, n)?, p, m)? {
                return fail(format!(
                    "decomposition disagrees with the V-expansion route below q^{n}"
                ));
            }
        }
        Ok(())
    }
}

/// Builds and verifies the decomposition of `G_2` modulo `p^m`.
///
/// `f_{m-1} = G_{p+1}^{p^{m-1}}`; for `j <= m - 2`, starting from
/// `g_0 = G_{2 + p^{m-j-1}(p-1)}`, each `g_{r+1}` is a level-one form
/// congruent to `g_r | V` modulo `p^{m-j}`, and `f_j = g_j`.
pub fn build_decomposition(p: u64, m: u32, precision: usize) -> Result<G2Decomposition> {
    let modulus = PrimePowerModulus::new(p, m)?;
    let top = weights_kj(p, m, m - 1);
    let n = precision.max(default_precision(top));
    let mut entries = Vec::with_capacity(m as usize);
    for j in 0..m {
        let form = if j == m - 1 {
            g_form(p as u32 + 1, n)?.pow(p.pow(m - 1) as u32)?
        } else {
            let mut g = g_form(2 + (p.pow(m - j - 1) * (p - 1)) as u32, n)?;
            for r in 0..j {
                g = find_v_approximation(&g, m - j + r, m - j, p, n)?;
            }
            g
        };
        entries.push(DecompositionEntry {
            j,
            weight: weights_kj(p, m, j),
            t: tj(p, m, j),
            form,
        });
    }
    let decomposition = G2Decomposition { modulus, entries };
    decomposition.verify(n)?;
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn level_p() {
        let d = build_decomposition(5, 1, 10).unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.entries()[0].weight, 6);
        let g6 = eisenstein::g(6, 10, &Rationals).unwrap();
        assert_eq!(d.entries()[0].form.expansion(10).unwrap(), g6);
    }

    #[test]
    fn level_p_squared_matches_explicit_forms() {
        let d = build_decomposition(5, 2, 0).unwrap();
        let w: Vec<u32> = d.entries().iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![22, 30]);
        let g22 = eisenstein::g(22, 20, &Rationals).unwrap();
        assert_eq!(d.entries()[0].form.expansion(20).unwrap(), g22);
        let g6 = eisenstein::g(6, 20, &Rationals).unwrap();
        assert_eq!(d.entries()[1].form.expansion(20).unwrap(), g6.pow(5));
    }

    #[test]
    fn level_p_cubed_weights() {
        let d = build_decomposition(5, 3, 0).unwrap();
        let w: Vec<u32> = d.entries().iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![102, 122, 150]);
    }

    #[test]
    fn v_approximation_step() {
        let g22 = g_form(22, 12).unwrap();
        let h = find_v_approximation(&g22, 2, 2, 5, 15).unwrap();
        assert_eq!(h.weight(), 122);
        let n = 40;
        let vf = g22.expansion(8).unwrap().apply_v(5, Some(n));
        assert!(congruent_mod(&vf, &h.expansion(n).unwrap(), 5, 2).unwrap());
        assert_eq!(h.series_vp(5), Valuation::Finite(0));
    }

    #[test]
    fn v_approximation_rejects_bad_parameters() {
        let g22 = g_form(22, 12).unwrap();
        assert!(matches!(
            find_v_approximation(&g22, 1, 2, 5, 15),
            Err(Error::HypothesisFailure(_))
        ));
        let scaled = g22.scale(&rational(5, 1));
        assert!(matches!(
            find_v_approximation(&scaled, 2, 2, 5, 15),
            Err(Error::HypothesisFailure(_))
        ));
    }

    #[test]
    fn v_expansion_route_alone() {
        for (p, m) in [(5u64, 1u32), (5, 2), (5, 3), (7, 2)] {
            let g2 = eisenstein::g2(40, &Rationals).unwrap();
            assert!(
                congruent_mod(&v_expansion_sum(p, m, 40).unwrap(), &g2, p, m).unwrap(),
                "p = {p}, m = {m}"
            );
        }
    }
}

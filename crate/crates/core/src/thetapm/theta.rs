use std::sync::Arc;

use super::{build_decomposition, km, G2Decomposition};
use crate::arith::PrimePowerModulus;
use crate::eisenstein;
use crate::error::{Error, Result};
use crate::forms::{default_precision, express, partial_derivation, sturm_bound, Form, ResidueForm};
use crate::qseries::{CoeffRing, QSeries, ResidueSeries, ZmodPm};

/// The theta operator on forms modulo `p^m`, weight `k -> k + k(m)`.
#[derive(Debug, Clone)]
pub struct ThetaOperator {
    modulus: PrimePowerModulus,
    decomposition: Arc<G2Decomposition>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaResult<R: CoeffRing> {
    pub input: Form<R>,
    pub output: ResidueForm,
    pub modulus: PrimePowerModulus,
    pub decomposition: Arc<G2Decomposition>,
}

impl ThetaOperator {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Ok(Self::from_decomposition(build_decomposition(p, m, 0)?))
    }

    pub fn from_decomposition(decomposition: G2Decomposition) -> Self {
        Self {
            modulus: *decomposition.modulus(),
            decomposition: Arc::new(decomposition),
        }
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    pub fn decomposition(&self) -> &G2Decomposition {
        &self.decomposition
    }

    /// `k(m)`, the weight shift.
    pub fn weight_shift(&self) -> u32 {
        km(self.modulus.p(), self.modulus.m())
    }

    /// `(1/12) E_{p-1}^{2p^{m-1}} df - 2k f sum_j p^j E_{p-1}^{p^{m-j-1} t_j} f_j`
    /// modulo `p^m`, as a form of weight `k + k(m)`.
    ///
    /// The result is checked against `sum n a_n q^n` before it is returned.
    pub fn apply<R: CoeffRing>(&self, f: &Form<R>, precision: usize) -> Result<ThetaResult<R>> {
        let md = self.modulus;
        let p = md.p();
        let m = md.m();
        let ring = ZmodPm(md);
        let k = f.weight();
        let out_weight = k + self.weight_shift();
        let n = precision.max(sturm_bound(out_weight) + 1);

        let f_n = f.with_precision(n)?;
        let f_mod = f_n.series().reduce(&md)?;
        let df = partial_derivation(&f_n)?.expansion(n)?.reduce(&md)?;
        let hasse = eisenstein::e(p as u32 - 1, n, &ring)?;

        let inv12 = md.inverse(12).expect("12 is a unit for p >= 5");
        let derivative_term = hasse.pow(2 * p.pow(m - 1)).mul(&df)?.scale(&inv12);

        let mut g2_lift = QSeries::zero(ring, n);
        for e in self.decomposition.entries() {
            let fj = e.form.expansion(n)?.reduce(&md)?;
            let padded = hasse.pow(p.pow(m - e.j - 1) * e.t).mul(&fj)?;
            g2_lift = g2_lift.add(&padded.scale(&md.p_power(e.j)))?;
        }
        let g2_term = f_mod.mul(&g2_lift)?.scale(&ring.from_i64(-2 * k as i64));

        let series: ResidueSeries = derivative_term.add(&g2_term)?;
        if series != f_mod.theta_naive() {
            return Err(Error::InvariantViolation(format!(
                "theta image of a weight-{k} form disagrees with sum n a_n q^n mod {md}"
            )));
        }
        let output = express(&series, out_weight)?;
        Ok(ThetaResult {
            input: f.clone(),
            output,
            modulus: md,
            decomposition: Arc::clone(&self.decomposition),
        })
    }

    /// `apply` at the default precision for the output weight.
    pub fn apply_default<R: CoeffRing>(&self, f: &Form<R>) -> Result<ThetaResult<R>> {
        self.apply(f, default_precision(f.weight() + self.weight_shift()))
    }
}

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;

use crate::arith::PrimePowerModulus;
use crate::eisenstein;
use crate::error::{Error, Result};
use crate::qseries::{exact_div, CoeffRing, IntegerSeries, Integers, QSeries, ZmodPm};

/// `dim M_k(SL_2(Z))`.
pub fn dim_mk(k: i64) -> usize {
    if k < 0 || k % 2 != 0 {
        return 0;
    }
    let base = (k / 12) as usize + 1;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// Number of leading coefficients that determine a weight-`k` form.
pub fn sturm_bound(k: u32) -> usize {
    k as usize / 12 + 1
}

/// Default working precision for a task whose largest weight is `k`.
pub fn default_precision(k: u32) -> usize {
    k as usize / 12 + 5
}

/// `Delta = (E_4^3 - E_6^2) / 1728`, normalized with `a_1 = 1`.
pub fn delta(precision: usize) -> IntegerSeries {
    let e4 = eisenstein::e(4, precision, &Integers).expect("E4 is integral");
    let e6 = eisenstein::e(6, precision, &Integers).expect("E6 is integral");
    let diff = e4.pow(3).sub(&e6.pow(2)).expect("same ring");
    let d = BigInt::from(1728);
    QSeries::from_fn(Integers, precision, |n| exact_div(diff.coeff(n), &d))
}

/// Integral echelon basis of `M_k(SL_2(Z), Z)`: element `i` has coefficient
/// `delta_{ij}` at `q^j` for `j < dimension`.
#[derive(Debug, Clone, PartialEq)]
pub struct MillerBasis {
    weight: u32,
    basis: Vec<IntegerSeries>,
    precision: usize,
}

impl MillerBasis {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn series(&self) -> &[IntegerSeries] {
        &self.basis
    }

    /// The basis mapped into another coefficient ring.
    pub fn over<R: CoeffRing>(&self, ring: &R) -> Vec<QSeries<R>> {
        self.basis
            .iter()
            .map(|s| {
                s.map(ring.clone(), |a| Ok(ring.from_int(a)))
                    .expect("integers map into every ring")
            })
            .collect()
    }

    pub fn reduce(&self, modulus: &PrimePowerModulus) -> Vec<QSeries<ZmodPm>> {
        self.over(&ZmodPm(*modulus))
    }

    fn build(k: u32, precision: usize) -> Self {
        let d = dim_mk(k as i64);
        if d == 0 {
            return Self {
                weight: k,
                basis: Vec::new(),
                precision,
            };
        }
        let e4 = eisenstein::e(4, precision, &Integers).expect("E4 is integral");
        let e6 = eisenstein::e(6, precision, &Integers).expect("E6 is integral");
        let delta = delta(precision);

        // Delta^i * E4^a * E6^b with 12i + 4a + 6b = k has leading term q^i.
        let mut rows = Vec::with_capacity(d);
        let mut delta_pow = QSeries::one(Integers, precision);
        for i in 0..d {
            let r = k - 12 * i as u32;
            let (a, b) = if r.is_multiple_of(4) {
                (r / 4, 0)
            } else {
                ((r - 6) / 4, 1)
            };
            let mut s = delta_pow.mul(&e4.pow(a as u64)).expect("same ring");
            if b == 1 {
                s = s.mul(&e6).expect("same ring");
            }
            rows.push(s);
            delta_pow = delta_pow.mul(&delta).expect("same ring");
        }

        // Leading coefficients are 1, so back-substitution stays integral.
        for i in (0..d).rev() {
            for j in i + 1..d {
                let c = rows[i].coeff(j).clone();
                if c != BigInt::from(0) {
                    let scaled = rows[j].scale(&c);
                    rows[i] = rows[i].sub(&scaled).expect("same ring");
                }
            }
        }
        Self {
            weight: k,
            basis: rows,
            precision,
        }
    }
}

type BasisCache = HashMap<(u32, usize), Arc<MillerBasis>>;

static CACHE: LazyLock<Mutex<BasisCache>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// The weight-`k` Miller basis at precision `N`, cached per `(k, N)`.
pub fn miller_basis(k: u32, precision: usize) -> Result<Arc<MillerBasis>> {
    let d = dim_mk(k as i64);
    if precision < d + 1 {
        return Err(Error::PrecisionTooLow {
            weight: k as i64,
            dimension: d,
            precision,
        });
    }
    if let Some(b) = CACHE.lock().unwrap_or_else(|e| e.into_inner()).get(&(k, precision)) {
        return Ok(Arc::clone(b));
    }
    let basis = Arc::new(MillerBasis::build(k, precision));
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(cache.entry((k, precision)).or_insert(basis)))
}

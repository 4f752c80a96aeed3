use num_bigint::BigInt;

use super::{express, sturm_bound, Form};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::qseries::{CoeffRing, QSeries};

/// `T_l` at level one: `a_n -> a_{ln} + l^{k-1} a_{n/l}`, with `a_{n/l} = 0`
/// when `l` does not divide `n`. The output has `floor((N-1)/l) + 1`
/// coefficients.
pub fn hecke_tl<R: CoeffRing>(f: &QSeries<R>, k: u32, ell: u64) -> Result<QSeries<R>> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("T_l needs weight >= 1".into()));
    }
    let ring = f.ring();
    let l = ell as usize;
    let out = (f.precision() - 1) / l + 1;
    let lk = ring.from_int(&num_traits::pow(BigInt::from(ell), k as usize - 1));
    Ok(QSeries::from_fn(ring.clone(), out, |n| {
        let a = f.coeff(l * n).clone();
        if n % l == 0 {
            ring.add(&a, &ring.mul(&lk, f.coeff(n / l)))
        } else {
            a
        }
    }))
}

/// `T_l f` to exactly `out` coefficients; `f` needs `l(out - 1) + 1`.
pub fn hecke_tl_to<R: CoeffRing>(f: &QSeries<R>, k: u32, ell: u64, out: usize) -> Result<QSeries<R>> {
    let needed = (ell as usize) * (out.max(1) - 1) + 1;
    if f.precision() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: f.precision(),
        });
    }
    hecke_tl(&f.truncate(needed)?, k, ell)
}

/// `T_l` on a form, re-expressed in the same weight.
pub fn hecke_form<R: CoeffRing>(f: &Form<R>, ell: u64) -> Result<Form<R>> {
    let out = sturm_bound(f.weight()) + 2;
    let image = hecke_tl_to(&f.expansion(ell as usize * out)?, f.weight(), ell, out)?;
    express(&image, f.weight())
}

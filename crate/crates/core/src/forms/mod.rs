//! Level-one modular forms as coordinates in the integral Miller basis.

mod basis;
mod derivation;
mod filtration;
mod hecke;
pub mod linalg;

pub use basis::{default_precision, delta, dim_mk, miller_basis, sturm_bound, MillerBasis};
pub use derivation::{partial_derivation, partial_series};
pub use filtration::{filtration_step, weight_filtration, FiltrationReport};
pub use hecke::{hecke_form, hecke_tl, hecke_tl_to};

use crate::arith::{PrimePowerModulus, Valuation};
use crate::error::{Error, Result};
use crate::qseries::{linear_combination, CoeffRing, Integers, PAdicValued, QSeries, Rationals, ZmodPm};

/// A weight-`k` modular form given by its coordinates in the Miller basis,
/// with its q-expansion cached at some precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<R: CoeffRing> {
    weight: u32,
    coords: Vec<R::Elem>,
    expansion: QSeries<R>,
}

pub type IntegralForm = Form<Integers>;
pub type RationalForm = Form<Rationals>;
pub type ResidueForm = Form<ZmodPm>;

fn expand<R: CoeffRing>(ring: &R, weight: u32, coords: &[R::Elem], precision: usize) -> Result<QSeries<R>> {
    let basis = miller_basis(weight, precision.max(dim_mk(weight as i64) + 1))?;
    let series = basis.over(ring);
    let mut out = linear_combination(ring, coords, &series, basis.precision());
    if out.precision() > precision {
        out = out.truncate(precision)?;
    }
    Ok(out)
}

impl<R: CoeffRing> Form<R> {
    pub fn from_coords(ring: R, weight: u32, coords: Vec<R::Elem>, precision: usize) -> Result<Self> {
        let d = dim_mk(weight as i64);
        if coords.len() != d {
            return Err(Error::InvalidArgument(format!(
                "weight {weight} has dimension {d}, got {} coordinates",
                coords.len()
            )));
        }
        let expansion = expand(&ring, weight, &coords, precision)?;
        Ok(Self {
            weight,
            coords,
            expansion,
        })
    }

    pub fn zero(ring: R, weight: u32, precision: usize) -> Result<Self> {
        let coords = vec![ring.zero(); dim_mk(weight as i64)];
        Self::from_coords(ring, weight, coords, precision)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn coords(&self) -> &[R::Elem] {
        &self.coords
    }

    pub fn ring(&self) -> &R {
        self.expansion.ring()
    }

    /// The cached expansion.
    pub fn series(&self) -> &QSeries<R> {
        &self.expansion
    }

    /// The q-expansion to `precision` coefficients.
    pub fn expansion(&self, precision: usize) -> Result<QSeries<R>> {
        if precision <= self.expansion.precision() {
            return self.expansion.truncate(precision);
        }
        expand(self.ring(), self.weight, &self.coords, precision)
    }

    /// The same form with its expansion cached at `precision`.
    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        Ok(Self {
            weight: self.weight,
            coords: self.coords.clone(),
            expansion: self.expansion(precision)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.ring().is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::InvalidArgument(format!(
                "cannot add forms of weights {} and {}",
                self.weight, other.weight
            )));
        }
        let ring = self.ring();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Ok(Self {
            weight: self.weight,
            coords,
            expansion: self.expansion.add(&other.expansion)?,
        })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = self.ring();
        Self {
            weight: self.weight,
            coords: self.coords.iter().map(|a| ring.mul(c, a)).collect(),
            expansion: self.expansion.scale(c),
        }
    }

    /// Product, as a form of weight `k1 + k2`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let weight = self.weight + other.weight;
        let precision = self
            .expansion
            .precision()
            .min(other.expansion.precision())
            .max(sturm_bound(weight) + 1);
        let product = self.expansion(precision)?.mul(&other.expansion(precision)?)?;
        express(&product, weight)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let weight = self.weight * e;
        let precision = self.expansion.precision().max(sturm_bound(weight) + 1);
        express(&self.expansion(precision)?.pow(e as u64), weight)
    }

    /// Image in another coefficient ring, coordinatewise.
    pub fn map<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<Form<S>> {
        let coords = self.coords.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let expansion = self.expansion.map(ring, f)?;
        Ok(Form {
            weight: self.weight,
            coords,
            expansion,
        })
    }

    pub fn reduce(&self, modulus: &PrimePowerModulus) -> Result<ResidueForm> {
        let ring = self.ring().clone();
        self.map(ZmodPm(*modulus), |a| ring.reduce_mod(a, modulus))
    }

    pub fn to_rationals(&self) -> RationalForm {
        let ring = self.ring().clone();
        self.map(Rationals, |a| Ok(ring.lift(a))).expect("lifting is total")
    }
}

impl<R: PAdicValued> Form<R> {
    pub fn series_vp(&self, p: u64) -> Valuation {
        self.expansion.series_vp(p)
    }
}

impl RationalForm {
    /// The same form with integer coordinates, if it has them.
    pub fn to_integral(&self) -> Result<IntegralForm> {
        self.map(Integers, |a| Integers.from_rational(a))
    }
}

/// Reads coordinates off the echelon positions and checks the remaining
/// coefficients of `f` against them.
pub fn express<R: CoeffRing>(f: &QSeries<R>, k: u32) -> Result<Form<R>> {
    let d = dim_mk(k as i64);
    let needed = sturm_bound(k) + 1;
    if f.precision() < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: f.precision(),
        });
    }
    let coords = f.coeffs()[..d].to_vec();
    let form = Form::from_coords(f.ring().clone(), k, coords, f.precision())?;
    if let Some(index) = (0..f.precision()).find(|&i| form.expansion.coeff(i) != f.coeff(i)) {
        return Err(Error::NotModularOfThisWeight {
            weight: k as i64,
            index,
        });
    }
    Ok(form)
}

/// A weight-`k` form congruent to `target` modulo `p^m`, if one exists.
///
/// Solved by valuation-pivoting elimination over `Z/p^mZ` against the reduced
/// Miller basis. `Err` only for precision problems.
pub fn is_congruent_to_weight(target: &QSeries<ZmodPm>, k: u32) -> Result<Option<ResidueForm>> {
    Ok(solve_congruence(target, k)?.map(|(form, _)| form))
}

/// As [`is_congruent_to_weight`], also reporting whether the witness is unique.
pub fn solve_congruence(target: &QSeries<ZmodPm>, k: u32) -> Result<Option<(ResidueForm, bool)>> {
    let needed = sturm_bound(k) + 1;
    let n = target.precision();
    if n < needed {
        return Err(Error::InsufficientPrecision { needed, available: n });
    }
    let modulus = *target.ring().modulus();
    let basis = miller_basis(k, n.max(dim_mk(k as i64) + 1))?;
    let rows: Vec<Vec<u64>> = basis
        .reduce(&modulus)
        .into_iter()
        .map(|s| s.into_coeffs()[..n].to_vec())
        .collect();
    let Some(solution) = linalg::solve_left(&rows, target.coeffs(), &modulus) else {
        return Ok(None);
    };
    let form = Form::from_coords(*target.ring(), k, solution.values, n)?;
    debug_assert_eq!(form.series(), target);
    Ok(Some((form, solution.unique)))
}

//! Named forms: `delta`, `e4`, `e6`, `g2`, `gk:<k>`, `ek:<k>`, `theta:<name>`,
//! products `a*b`, and parentheses.

use std::fmt;

use crate::arith::PrimePowerModulus;
use crate::eisenstein;
use crate::error::{Error, Result};
use crate::forms::{default_precision, delta, express, RationalForm, ResidueForm};
use crate::qseries::{Integers, RationalSeries, Rationals};
use crate::thetapm::ThetaOperator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormExpr {
    Delta,
    G2,
    G(u32),
    E(u32),
    Theta(Box<FormExpr>),
    Product(Vec<FormExpr>),
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::Delta => f.write_str("delta"),
            FormExpr::G2 => f.write_str("g2"),
            FormExpr::G(k) => write!(f, "gk:{k}"),
            FormExpr::E(k) => write!(f, "ek:{k}"),
            FormExpr::Theta(inner) => match **inner {
                FormExpr::Product(_) => write!(f, "theta:({inner})"),
                _ => write!(f, "theta:{inner}"),
            },
            FormExpr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn product(&mut self) -> Result<FormExpr> {
        let mut factors = vec![self.factor()?];
        while self.rest().starts_with('*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            FormExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<FormExpr> {
        let rest = self.rest();
        if let Some(inner) = rest.strip_prefix("theta:") {
            self.pos = self.src.len() - inner.len();
            return Ok(FormExpr::Theta(Box::new(self.factor()?)));
        }
        if rest.starts_with('(') {
            self.pos += 1;
            let e = self.product()?;
            if !self.rest().starts_with(')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(e);
        }
        let end = rest.find(['*', ')']).unwrap_or(rest.len());
        let atom = &rest[..end];
        self.pos += end;
        let weight = |s: &str| -> Result<u32> { s.parse().map_err(|_| self.err("bad weight")) };
        match atom {
            "delta" => Ok(FormExpr::Delta),
            "g2" => Ok(FormExpr::G2),
            "e4" => Ok(FormExpr::E(4)),
            "e6" => Ok(FormExpr::E(6)),
            _ => {
                if let Some(k) = atom.strip_prefix("gk:") {
                    Ok(FormExpr::G(weight(k)?))
                } else if let Some(k) = atom.strip_prefix("ek:") {
                    Ok(FormExpr::E(weight(k)?))
                } else {
                    Err(self.err(&format!("unknown form {atom:?}")))
                }
            }
        }
    }
}

impl std::str::FromStr for FormExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parser = Parser { src: &lower, pos: 0 };
        let e = parser.product()?;
        if parser.pos != lower.len() {
            return Err(parser.err("trailing input"));
        }
        Ok(e)
    }
}

/// A resolved named form.
#[derive(Debug, Clone)]
pub enum Resolved {
    Rational(RationalForm),
    Residue(ResidueForm),
    /// `G_2`, which is not modular.
    Quasi(RationalSeries),
}

impl Resolved {
    pub fn weight(&self) -> u32 {
        match self {
            Resolved::Rational(f) => f.weight(),
            Resolved::Residue(f) => f.weight(),
            Resolved::Quasi(_) => 2,
        }
    }

    fn modular(self, what: &FormExpr) -> Result<Self> {
        match self {
            Resolved::Quasi(_) => Err(Error::InvalidArgument(format!("{what} is not a modular form"))),
            other => Ok(other),
        }
    }
}

impl FormExpr {
    fn modulus_required(&self, modulus: Option<&PrimePowerModulus>) -> Result<PrimePowerModulus> {
        modulus
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{self} needs --p and --m")))
    }

    /// Evaluates the expression; `theta` needs a modulus. `precision` is a
    /// lower bound on the cached expansion.
    pub fn resolve(&self, modulus: Option<&PrimePowerModulus>, precision: usize) -> Result<Resolved> {
        match self {
            FormExpr::Delta => {
                let n = precision.max(default_precision(12));
                Ok(Resolved::Rational(express(&delta(n), 12)?.to_rationals()))
            }
            FormExpr::G2 => Ok(Resolved::Quasi(eisenstein::g2(precision.max(1), &Rationals)?)),
            FormExpr::G(k) | FormExpr::E(k) => {
                let n = precision.max(default_precision(*k));
                let s = match self {
                    FormExpr::G(_) => eisenstein::g(*k, n, &Rationals)?,
                    _ => eisenstein::e(*k, n, &Rationals)?,
                };
                Ok(Resolved::Rational(express(&s, *k)?))
            }
            FormExpr::Theta(inner) => {
                let md = self.modulus_required(modulus)?;
                let op = ThetaOperator::new(md.p(), md.m())?;
                let out = match inner.resolve(modulus, precision)?.modular(inner)? {
                    Resolved::Rational(f) => op.apply(&f, precision)?.output,
                    Resolved::Residue(f) => op.apply(&f, precision)?.output,
                    Resolved::Quasi(_) => unreachable!(),
                };
                Ok(Resolved::Residue(out))
            }
            FormExpr::Product(factors) => {
                let parts = factors
                    .iter()
                    .map(|x| x.resolve(modulus, precision)?.modular(x))
                    .collect::<Result<Vec<_>>>()?;
                let any_residue = parts.iter().any(|r| matches!(r, Resolved::Residue(_)));
                if any_residue {
                    let md = self.modulus_required(modulus)?;
                    let mut acc: Option<ResidueForm> = None;
                    for part in parts {
                        let f = match part {
                            Resolved::Rational(f) => f.reduce(&md)?,
                            Resolved::Residue(f) => f,
                            Resolved::Quasi(_) => unreachable!(),
                        };
                        acc = Some(match acc {
                            None => f,
                            Some(a) => a.mul(&f)?,
                        });
                    }
                    Ok(Resolved::Residue(acc.expect("at least one factor")))
                } else {
                    let mut acc: Option<RationalForm> = None;
                    for part in parts {
                        let Resolved::Rational(f) = part else { unreachable!() };
                        acc = Some(match acc {
                            None => f,
                            Some(a) => a.mul(&f)?,
                        });
                    }
                    Ok(Resolved::Rational(acc.expect("at least one factor")))
                }
            }
        }
    }

    /// Resolves to a characteristic-zero form.
    pub fn rational_form(&self, precision: usize) -> Result<RationalForm> {
        match self.resolve(None, precision)?.modular(self)? {
            Resolved::Rational(f) => Ok(f),
            _ => Err(Error::InvalidArgument(format!("{self} is only defined modulo p^m"))),
        }
    }
}

/// `delta`, `e4`, ... resolved to an integral form, for callers that need one.
pub fn integral_form(name: &str, precision: usize) -> Result<crate::forms::IntegralForm> {
    let f: FormExpr = name.parse()?;
    f.rational_form(precision)?
        .map(Integers, |a| crate::qseries::CoeffRing::from_rational(&Integers, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("delta".parse::<FormExpr>().unwrap(), FormExpr::Delta);
        assert_eq!("E4".parse::<FormExpr>().unwrap(), FormExpr::E(4));
        assert_eq!("gk:22".parse::<FormExpr>().unwrap(), FormExpr::G(22));
        assert_eq!(
            "e4*delta".parse::<FormExpr>().unwrap(),
            FormExpr::Product(vec![FormExpr::E(4), FormExpr::Delta])
        );
        assert_eq!(
            "theta:delta*e4".parse::<FormExpr>().unwrap(),
            FormExpr::Product(vec![FormExpr::Theta(Box::new(FormExpr::Delta)), FormExpr::E(4)])
        );
        let nested: FormExpr = "theta:(e4*delta)".parse().unwrap();
        assert_eq!(nested.to_string(), "theta:(ek:4*delta)");
        assert!("foo".parse::<FormExpr>().is_err());
        assert!("theta:(e4".parse::<FormExpr>().is_err());
        assert!("gk:x".parse::<FormExpr>().is_err());
    }

    #[test]
    fn resolve_products_and_theta() {
        let f = "e4*delta".parse::<FormExpr>().unwrap().rational_form(8).unwrap();
        assert_eq!(f.weight(), 16);
        let md = PrimePowerModulus::new(5, 2).unwrap();
        let t = "theta:delta"
            .parse::<FormExpr>()
            .unwrap()
            .resolve(Some(&md), 10)
            .unwrap();
        assert_eq!(t.weight(), 54);
        assert!("theta:delta".parse::<FormExpr>().unwrap().resolve(None, 10).is_err());
        assert!("g2*e4".parse::<FormExpr>().unwrap().resolve(None, 10).is_err());
    }

    #[test]
    fn integral_lookup() {
        assert!(integral_form("delta", 10).is_ok());
        assert!(integral_form("gk:4", 10).is_err());
    }
}

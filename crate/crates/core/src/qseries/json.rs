use serde::{Deserialize, Serialize};

use super::{CoeffRing, Integers, QSeries, Rationals, RingTag, ZmodPm};
use crate::arith::PrimePowerModulus;
use crate::error::{Error, Result};

/// Wire form of a series: coefficients as decimal strings, rationals as `a/b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub precision: usize,
    pub coeffs: Vec<String>,
}

impl SeriesJson {
    pub fn from_series<R: CoeffRing>(s: &QSeries<R>) -> Self {
        let (p, m) = match s.ring().tag() {
            RingTag::Zpm(modulus) => (Some(modulus.p()), Some(modulus.m())),
            _ => (None, None),
        };
        SeriesJson {
            ring: s.ring().tag().name().to_string(),
            p,
            m,
            precision: s.precision(),
            coeffs: s.coeffs().iter().map(|c| s.ring().format(c)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl std::fmt::Display for SeriesJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serde_json::to_string(self).expect("plain data serializes"))
    }
}

/// A series over whichever ring its serialized form names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Q(QSeries<Rationals>),
    Z(QSeries<Integers>),
    Zpm(QSeries<ZmodPm>),
}

fn build<R: CoeffRing>(ring: R, json: &SeriesJson) -> Result<QSeries<R>> {
    if json.coeffs.len() != json.precision {
        return Err(Error::Parse(format!(
            "precision {} disagrees with {} coefficients",
            json.precision,
            json.coeffs.len()
        )));
    }
    let coeffs = json.coeffs.iter().map(|c| ring.parse(c)).collect::<Result<Vec<_>>>()?;
    QSeries::new(ring, coeffs)
}

impl AnySeries {
    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        match json.ring.as_str() {
            "Q" => build(Rationals, json).map(AnySeries::Q),
            "Z" => build(Integers, json).map(AnySeries::Z),
            "Zpm" => {
                let (Some(p), Some(m)) = (json.p, json.m) else {
                    return Err(Error::Parse("Zpm series needs p and m".into()));
                };
                build(ZmodPm(PrimePowerModulus::new(p, m)?), json).map(AnySeries::Zpm)
            }
            other => Err(Error::Parse(format!("unknown ring {other:?}"))),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        match self {
            AnySeries::Q(s) => s.to_json(),
            AnySeries::Z(s) => s.to_json(),
            AnySeries::Zpm(s) => s.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn residue_series_layout() {
        let ring = ZmodPm(PrimePowerModulus::new(5, 2).unwrap());
        let s = QSeries::new(ring, vec![1, 24, 0]).unwrap();
        assert_eq!(
            s.to_json().to_string(),
            r#"{"ring":"Zpm","p":5,"m":2,"precision":3,"coeffs":["1","24","0"]}"#
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(SeriesJson::parse(r#"{"ring":"R","precision":1,"coeffs":["1"]}"#)
            .and_then(|j| AnySeries::from_json(&j))
            .is_err());
        assert!(SeriesJson::parse(r#"{"ring":"Q","precision":2,"coeffs":["1"]}"#)
            .and_then(|j| AnySeries::from_json(&j))
            .is_err());
        assert!(
            SeriesJson::parse(r#"{"ring":"Zpm","p":5,"m":1,"precision":1,"coeffs":["7"]}"#)
                .and_then(|j| AnySeries::from_json(&j))
                .is_err()
        );
    }

    proptest! {
        #[test]
        fn rational_round_trip_is_bit_exact(v in proptest::collection::vec((-10_000i64..10_000, 1i64..500), 1..20)) {
            let coeffs = v.iter().map(|&(n, d)| Rational::new(BigInt::from(n), BigInt::from(d))).collect();
            let s = AnySeries::Q(QSeries::new(Rationals, coeffs).unwrap());
            let text = s.to_json().to_string();
            let back = AnySeries::from_json(&SeriesJson::parse(&text).unwrap()).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_json().to_string(), text);
        }

        #[test]
        fn residue_round_trip_is_bit_exact(v in proptest::collection::vec(0u64..343, 1..20)) {
            let ring = ZmodPm(PrimePowerModulus::new(7, 3).unwrap());
            let s = AnySeries::Zpm(QSeries::new(ring, v).unwrap());
            let text = s.to_json().to_string();
            let back = AnySeries::from_json(&SeriesJson::parse(&text).unwrap()).unwrap();
            prop_assert_eq!(back.to_json().to_string(), text);
        }
    }
}

//! JSON rendering of canonical values.
//!
//! ```json
//! {"period": 2, "branches": [
//!   {"kind": "const", "value": {"sort": "R", "rational": "-1"}},
//!   {"kind": "rat", "num_coeffs": ["1", "0", "1"], "den_coeffs": ["0", "2"]}]}
//! ```

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{canonicalize, BranchTerm, Limits, Payload, RawSequence, Sort, UniverseElement, VirtualValue};
use crate::error::Error;
use crate::scalar::parse_rational;
use crate::{Poly, RatFunc};

#[derive(Serialize, Deserialize)]
pub(crate) struct ElementJson {
    sort: String,
    #[serde(flatten)]
    payload: PayloadJson,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PayloadJson {
    Rational(String),
    Integer(String),
    Atom(u32),
    Tuple(Vec<ElementJson>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BranchJson {
    Const { value: ElementJson },
    Rat { num_coeffs: Vec<String>, den_coeffs: Vec<String> },
}

#[derive(Serialize, Deserialize)]
pub(crate) struct ValueJson {
    period: usize,
    branches: Vec<BranchJson>,
}

impl From<&UniverseElement> for ElementJson {
    fn from(e: &UniverseElement) -> Self {
        let payload = match &e.payload {
            Payload::Rational(q) => PayloadJson::Rational(q.to_string()),
            Payload::Integer(k) => PayloadJson::Integer(k.to_string()),
            Payload::Atom(k) => PayloadJson::Atom(*k),
            Payload::Tuple(parts) => PayloadJson::Tuple(parts.iter().map(Into::into).collect()),
        };
        ElementJson { sort: e.sort.to_string(), payload }
    }
}

impl TryFrom<ElementJson> for UniverseElement {
    type Error = Error;

    fn try_from(j: ElementJson) -> Result<Self, Error> {
        let sort = Sort::new(j.sort.clone()).ok_or_else(|| Error::Malformed(format!("bad sort {:?}", j.sort)))?;
        let payload = match j.payload {
            PayloadJson::Rational(s) => {
                Payload::Rational(parse_rational(&s).ok_or_else(|| Error::Malformed(format!("bad rational {s:?}")))?)
            }
            PayloadJson::Integer(s) => Payload::Integer(
                s.parse::<BigInt>().map_err(|_| Error::Malformed(format!("bad integer {s:?}")))?,
            ),
            PayloadJson::Atom(k) => Payload::Atom(k),
            PayloadJson::Tuple(parts) => {
                Payload::Tuple(parts.into_iter().map(UniverseElement::try_from).collect::<Result<_, _>>()?)
            }
        };
        Ok(UniverseElement::new(sort, payload))
    }
}

fn coeffs(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn poly(cs: &[String]) -> Result<Poly, Error> {
    cs.iter()
        .map(|s| parse_rational(s).ok_or_else(|| Error::Malformed(format!("bad coefficient {s:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Poly::new)
}

impl From<&VirtualValue> for ValueJson {
    fn from(v: &VirtualValue) -> Self {
        let branches = v
            .branches()
            .iter()
            .map(|b| match b {
                BranchTerm::Const(e) => BranchJson::Const { value: e.into() },
                BranchTerm::Rat(rf) => BranchJson::Rat {
                    num_coeffs: coeffs(rf.numerator()),
                    den_coeffs: coeffs(rf.denominator()),
                },
            })
            .collect();
        ValueJson { period: v.period(), branches }
    }
}

impl TryFrom<ValueJson> for VirtualValue {
    type Error = Error;

    fn try_from(j: ValueJson) -> Result<Self, Error> {
        if j.period != j.branches.len() {
            return Err(Error::Malformed(format!(
                "period {} does not match {} branches",
                j.period,
                j.branches.len()
            )));
        }
        let tail = j
            .branches
            .into_iter()
            .map(|b| match b {
                BranchJson::Const { value } => Ok(BranchTerm::Const(value.try_into()?)),
                BranchJson::Rat { num_coeffs, den_coeffs } => {
                    Ok(BranchTerm::rat(RatFunc::new(poly(&num_coeffs)?, poly(&den_coeffs)?)?))
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        canonicalize(&RawSequence::cyclic(tail), &Limits::unbounded())
    }
}

impl Serialize for VirtualValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ValueJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VirtualValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ValueJson::deserialize(d)?;
        VirtualValue::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for UniverseElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniverseElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        UniverseElement::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::text::parse_value;

    #[test]
    fn json_shape() {
        let v = parse_value("cyc{-1; (n^2+1)/(2*n)}").unwrap();
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(
            j,
            r#"{"period":2,"branches":[{"kind":"const","value":{"sort":"R","rational":"-1"}},{"kind":"rat","num_coeffs":["1","0","1"],"den_coeffs":["0","2"]}]}"#
        );
        let back: VirtualValue = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn mismatched_period_is_rejected() {
        let j = r#"{"period":3,"branches":[{"kind":"const","value":{"sort":"Z","integer":"4"}}]}"#;
        assert!(serde_json::from_str::<VirtualValue>(j).is_err());
    }
}

//! JSON field specifications.
//!
//! ```json
//! { "defining_poly": ["1", "0", "-10", "0", "1"],
//!   "elements": { "sqrt2": { "num": ["0", "-9", "0", "1"], "den": "2" } },
//!   "generators": ["sqrt2", "sqrt3"] }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::polyarith::IntPolynomial;

fn one() -> BigInt {
    BigInt::one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    #[serde(with = "crate::io::bigint_vec")]
    pub num: Vec<BigInt>,
    #[serde(with = "crate::io::bigint_str", default = "one")]
    pub den: BigInt,
}

impl ElementSpec {
    pub fn to_element(&self, field: &Arc<NumberField>) -> Result<FieldElement> {
        if self.den.is_zero() {
            return Err(Error::Parse("element denominator is zero".into()));
        }
        if self.num.len() > field.degree() {
            return Err(Error::Parse(format!(
                "element has {} coordinates but the field has degree {}",
                self.num.len(),
                field.degree()
            )));
        }
        let coords = self
            .num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect();
        FieldElement::new(field, coords)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub defining_poly: IntPolynomial,
    #[serde(default)]
    pub elements: BTreeMap<String, ElementSpec>,
    #[serde(default)]
    pub generators: Vec<String>,
}

impl FieldSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The field `Q[x]/(f)` described by this spec.
    pub fn field(&self) -> Result<Arc<NumberField>> {
        NumberField::new(self.defining_poly.clone())
    }

    pub fn element(&self, field: &Arc<NumberField>, name: &str) -> Result<FieldElement> {
        match self.elements.get(name) {
            Some(e) => e.to_element(field),
            None => parse_inline_element(field, name),
        }
    }
}

/// Colon-separated rational coordinates, e.g. `1:1` for `1 + α` or
/// `0:1/2` for `α/2`.
pub fn parse_inline_element(field: &Arc<NumberField>, text: &str) -> Result<FieldElement> {
    let coords = text
        .split(':')
        .map(|part| {
            let part = part.trim();
            let (n, d) = part.split_once('/').unwrap_or((part, "1"));
            let n = crate::io::parse_bigint(n).map_err(Error::Parse)?;
            let d = crate::io::parse_bigint(d).map_err(Error::Parse)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{part}`")));
            }
            Ok(BigRational::new(n, d))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse(format!("unknown element `{text}` ({e})")))?;
    if coords.len() > field.degree() {
        return Err(Error::Parse(format!(
            "`{text}` has more coordinates than the field degree"
        )));
    }
    FieldElement::new(field, coords)
}

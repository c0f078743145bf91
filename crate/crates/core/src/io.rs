//! Decimal-string (de)serialization for arbitrary-precision integers.
//!
//! Integers travel as JSON strings so that no precision is lost; plain JSON
//! integers are accepted on input when they fit in 64 bits.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum IntLit {
    Str(String),
    Signed(i64),
    Unsigned(u64),
}

impl IntLit {
    fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntLit::Str(s) => parse_bigint(&s).map_err(E::custom),
            IntLit::Signed(v) => Ok(BigInt::from(v)),
            IntLit::Unsigned(v) => Ok(BigInt::from(v)),
        }
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| format!("invalid integer `{s}`: {e}"))
}

pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntLit::deserialize(d)?.into_bigint()
    }
}

pub mod bigint_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntLit>::deserialize(d)?
            .into_iter()
            .map(IntLit::into_bigint)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "bigint_vec")]
        v: Vec<BigInt>,
        #[serde(with = "bigint_str")]
        n: BigInt,
    }

    #[test]
    fn accepts_strings_and_numbers() {
        let w: Wrap =
            serde_json::from_str(r#"{"v": ["-123456789012345678901234567890", 4], "n": 7}"#)
                .unwrap();
        assert_eq!(w.v[1], BigInt::from(4));
        assert_eq!(w.n, BigInt::from(7));
        let out = serde_json::to_string(&w).unwrap();
        assert_eq!(
            out,
            r#"{"v":["-123456789012345678901234567890","4"],"n":"7"}"#
        );
        assert!(serde_json::from_str::<Wrap>(r#"{"v": ["1x"], "n": 1}"#).is_err());
    }
}

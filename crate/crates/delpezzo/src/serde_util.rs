//! Serde helpers: big integers as decimal strings on the wire.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

pub mod bigint_string {
    use super::*;

    pub fn serialize<S: Serializer>(b: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&b.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        super::parse(d)
    }
}

pub mod bigint_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|b| b.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<Number> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|n| n.0).collect())
    }
}

struct Number(BigInt);

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        parse(d).map(Number)
    }
}

fn parse<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    struct V;

    impl de::Visitor<'_> for V {
        type Value = BigInt;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(BigInt::from(v))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse()
                .map_err(|_| E::custom(format!("invalid integer {v:?}")))
        }
    }

    d.deserialize_any(V)
}

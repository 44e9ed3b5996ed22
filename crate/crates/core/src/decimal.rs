//! Serde adapter writing `f64` as its shortest round-trip decimal string, so
//! thresholds compare bit-for-bit after a JSON round trip.

use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let text = String::deserialize(d)?;
    text.parse()
        .map_err(|e| D::Error::custom(format!("bad decimal `{text}`: {e}")))
}

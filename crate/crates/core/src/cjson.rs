//! Serde helpers writing complex numbers as `[re, im]`.

use num_complex::Complex64 as C;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn pair(c: &C) -> [f64; 2] {
    [c.re, c.im]
}

pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(c: &C, s: S) -> Result<S::Ok, S::Error> {
        pair(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C::new(re, im))
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C::new(re, im)).collect())
    }
}

//! Serializes `DVector<f64>` as a plain JSON array.

use nalgebra::DVector;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &DVector<f64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<f64>, D::Error> {
    let raw = Vec::<f64>::deserialize(d)?;
    Ok(DVector::from_vec(raw))
}

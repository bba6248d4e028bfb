//! Float formatting shared by every emitted file: 17 significant digits.

use serde::Serializer;
use serde_json::value::RawValue;

/// `1.2345678901234567e-3` style; non-finite values become empty strings.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Serde helper writing an `f64` as a 17-significant-digit JSON number
/// (or `null` when non-finite).
pub fn serialize_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    let text = if x.is_finite() { sig17(*x) } else { "null".to_string() };
    let raw = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&raw, s)
}

pub fn serialize_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => serialize_f64(v, s),
        None => s.serialize_none(),
    }
}

//! Canonical JSON for reports: sorted keys, floats rounded to 12
//! significant digits, negative zero written as zero.

use serde::Serialize;
use serde_json::{Number, Value};

use crate::Result;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_float(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Rewrites every float in place. Integers are left alone.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_float(n.as_f64().unwrap_or_default());
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Pretty-printed canonical JSON followed by a newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let value = canonicalize(serde_json::to_value(report)?);
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_rounded() {
        assert_eq!(round_float(0.1 + 0.2), 0.3);
        assert_eq!(round_float(-0.0), 0.0);
        assert!(round_float(-0.0).is_sign_positive());
        assert_eq!(round_float(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_float(123456789.12345679), 123456789.123);
    }

    #[test]
    fn keys_are_sorted_and_stable() {
        let a = to_canonical_json(&json!({"z": 1, "a": [0.1, -0.0], "m": {"y": 2.0000000000001, "b": "x"}})).unwrap();
        assert_eq!(a, to_canonical_json(&json!({"m": {"b": "x", "y": 2.0}, "a": [0.1, 0.0], "z": 1})).unwrap());
        assert!(a.find("\"a\"").unwrap() < a.find("\"m\"").unwrap());
    }
}

//! Deterministic JSON output helpers.
//!
//! Floats are written with 17 significant digits in scientific notation and
//! object keys come out sorted, so identical inputs give identical bytes.

use serde_json::{Map, Number, Value};
use std::str::FromStr;

/// `x` as a JSON number with 17 significant digits. Non-finite values
/// become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    Value::Number(Number::from_str(&s).expect("formatted float is valid JSON"))
}

/// Builds an object from `(key, value)` pairs.
pub fn object<I, K>(pairs: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    Value::Object(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect::<Map<_, _>>())
}

/// Reads a number that may be stored either as a JSON number or as a
/// decimal string.
pub fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64().or_else(|| n.to_string().parse().ok()),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Pretty-printed JSON text ending in a newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_format() {
        assert!(num(0.1).to_string().starts_with("1.0000000000000001e-"));
        assert!(num(-2.0).to_string().starts_with("-2.0000000000000000e"));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn round_trip_through_text() {
        let x = 1.234_567_890_123_456_7e-200;
        let v: Value = serde_json::from_str(&num(x).to_string()).unwrap();
        assert_eq!(as_f64(&v), Some(x));
        assert_eq!(as_f64(&Value::String("2.5".into())), Some(2.5));
    }

    #[test]
    fn keys_sorted() {
        let v = object([("b", num(1.0)), ("a", num(2.0))]);
        assert!(serde_json::to_string(&v).unwrap().starts_with("{\"a\""));
    }
}

//! Deterministic JSON helpers.

use serde::Serialize;

/// Round to 12 significant digits; `-0.0` becomes `0.0`.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap();
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_floats),
        serde_json::Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with keys sorted (serde_json maps are ordered by key) and
/// every float rounded to 12 significant digits.
pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    serde_json::to_string_pretty(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(-1e-300 * 0.0), 0.0);
        assert_eq!(round12(123456789012345.0), 123456789012000.0);
    }

    #[test]
    fn nested_floats_rounded() {
        let v = serde_json::json!({"b": [0.1 + 0.2], "a": {"x": 1}});
        assert_eq!(canonical_json(&v).unwrap(), "{\n  \"a\": {\n    \"x\": 1\n  },\n  \"b\": [\n    0.3\n  ]\n}");
    }
}

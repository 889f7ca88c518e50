//! Instance files: a JSON object with `signature` and `initial` arrays and
//! optional `precision_bits`, `k_max` and `tol`.

use serde::Deserialize;
use serde_json::{Number, Value};

use crate::error::ParseNumberError;
use crate::numerics::{parse_decimal_rational, Exactness, GaussianRational};
use crate::recurrence::RecurrenceInstance;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    signature: Vec<Value>,
    initial: Vec<Value>,
    #[serde(default)]
    precision_bits: Option<usize>,
    #[serde(default)]
    k_max: Option<usize>,
    #[serde(default)]
    tol: Option<f64>,
}

/// A parsed instance and the per-instance settings it carried.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub instance: RecurrenceInstance,
    pub precision_bits: Option<usize>,
    pub k_max: Option<usize>,
    pub tol: Option<f64>,
}

/// Parses one instance record. Errors are human-readable and carry the
/// line and column for malformed JSON.
pub fn parse_instance(text: &str) -> Result<InstanceSpec, String> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut approximate = false;
    let mut convert = |field: &str, values: &[Value]| -> Result<Vec<GaussianRational>, String> {
        values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let (x, exact) = parse_number(v).map_err(|e| format!("{field}[{k}]: {e}"))?;
                approximate |= !exact;
                Ok(x)
            })
            .collect()
    };
    let signature = convert("signature", &raw.signature)?;
    let initial = convert("initial", &raw.initial)?;
    let exactness = if approximate {
        Exactness::Approximate
    } else {
        Exactness::Exact
    };
    let instance = RecurrenceInstance::with_exactness(signature, initial, exactness).map_err(|e| e.to_string())?;
    Ok(InstanceSpec {
        instance,
        precision_bits: raw.precision_bits,
        k_max: raw.k_max,
        tol: raw.tol,
    })
}

/// A JSON number or string as an exact value; the flag is false for
/// floating-point literals, which are taken as approximations.
fn parse_number(v: &Value) -> Result<(GaussianRational, bool), ParseNumberError> {
    match v {
        Value::Number(n) => parse_json_number(n),
        Value::String(s) => {
            let exact = s
                .parse::<GaussianRational>()
                .or_else(|e| parse_decimal_rational(s).map(GaussianRational::from_real).map_err(|_| e))?;
            Ok((exact, true))
        }
        other => Err(ParseNumberError::new(&other.to_string(), "expected a number or a string")),
    }
}

fn parse_json_number(n: &Number) -> Result<(GaussianRational, bool), ParseNumberError> {
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        let x: f64 = text
            .parse()
            .map_err(|_| ParseNumberError::new(&text, "not a floating-point number"))?;
        let g = GaussianRational::from_f64(x).ok_or_else(|| ParseNumberError::new(&text, "not finite"))?;
        Ok((g, false))
    } else {
        Ok((text.parse()?, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_strings_are_exact() {
        let spec = parse_instance(r#"{"signature": [1, "1/2+1 i"], "initial": ["0.25", 123456789012345678901234567890]}"#)
            .unwrap();
        assert_eq!(spec.instance.exactness(), Exactness::Exact);
        assert_eq!(spec.instance.signature()[1], "1/2+1 i".parse().unwrap());
        assert_eq!(spec.instance.initial()[0], "1/4".parse().unwrap());
        assert_eq!(spec.instance.initial()[1].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn floats_mark_the_instance_approximate() {
        let spec = parse_instance(r#"{"signature": [1.5, 2], "initial": [0, 1], "k_max": 50}"#).unwrap();
        assert_eq!(spec.instance.exactness(), Exactness::Approximate);
        assert_eq!(spec.instance.signature()[0], "3/2".parse().unwrap());
        assert_eq!(spec.k_max, Some(50));
    }

    #[test]
    fn errors_name_the_problem() {
        let e = parse_instance("{\"signature\": [1,\n 1], \"initial\": [0, }").unwrap_err();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_instance(r#"{"signature": [1, 0], "initial": [0, 1]}"#).unwrap_err();
        assert!(e.contains("zero"), "{e}");
        let e = parse_instance(r#"{"signature": [1, 1], "initial": [0]}"#).unwrap_err();
        assert!(e.contains("initial"), "{e}");
        let e = parse_instance(r#"{"signature": [1, "x"], "initial": [0, 1]}"#).unwrap_err();
        assert!(e.contains("signature[1]"), "{e}");
    }
}

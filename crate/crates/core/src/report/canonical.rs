//! Canonical JSON: sorted keys, compact separators, and every float
//! rendered as a fixed six-fractional-digit decimal with round-half-even.
//! Identical data always serializes to identical bytes, which is what the
//! report digest and the regression goldens lean on.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Fixed-point formatting with round-half-even, normalizing negative zero.
pub fn fixed(value: f64, decimals: usize) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.decimals$}")
}

/// Six fractional digits: the report's float encoding.
pub fn fixed6(value: f64) -> String {
    fixed(value, 6)
}

/// Four fractional digits: the heatmap cell encoding.
pub fn fixed4(value: f64) -> String {
    fixed(value, 4)
}

/// A probability as a whole percentage, e.g. `0.6` -> `60%`.
pub fn percent0(probability: f64) -> String {
    format!("{}%", fixed(probability * 100.0, 0))
}

/// Rounds to six fractional digits exactly as [`fixed6`] would print.
pub fn round6(value: f64) -> f64 {
    fixed6(value).parse().expect("fixed6 emits valid floats")
}

fn write_value(value: &Value, out: &mut Vec<u8>) {
    match value {
        Value::Null => out.extend_from_slice(b"null"),
        Value::Bool(true) => out.extend_from_slice(b"true"),
        Value::Bool(false) => out.extend_from_slice(b"false"),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.extend_from_slice(u.to_string().as_bytes());
            } else if let Some(i) = n.as_i64() {
                out.extend_from_slice(i.to_string().as_bytes());
            } else {
                let f = n.as_f64().expect("number is one of u64/i64/f64");
                out.extend_from_slice(fixed6(f).as_bytes());
            }
        }
        Value::String(s) => {
            serde_json::to_writer(&mut *out, s).expect("string serializes");
        }
        Value::Array(items) => {
            out.push(b'[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                write_value(item, out);
            }
            out.push(b']');
        }
        Value::Object(map) => {
            // serde_json's map is a BTreeMap, so iteration is key-sorted.
            out.push(b'{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                serde_json::to_writer(&mut *out, key).expect("key serializes");
                out.push(b':');
                write_value(item, out);
            }
            out.push(b'}');
        }
    }
}

/// Serializes any value to canonical JSON bytes, with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    let v = serde_json::to_value(value).expect("value serializes");
    let mut out = Vec::new();
    write_value(&v, &mut out);
    out.push(b'\n');
    out
}

/// Hex SHA-256 of a byte stream.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

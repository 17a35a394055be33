//! Deterministic report emission.
//!
//! Reports are emitted through a custom JSON writer: keys come out in
//! sorted order (serde_json's default map is a BTreeMap) and every float is
//! printed with 17 significant digits, enough for exact f64 round-trips.
//! Identical reports therefore serialize to identical bytes.

use ndarray::Array2;
use num_complex::Complex64;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// 17 significant digits; integers that fit exactly print as integers.
fn format_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        // Integral values print plainly so configs echo naturally.
        format!("{:.1}", x)
    } else {
        format!("{:.16e}", x)
    }
}

fn push_json(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = num.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = num.as_f64().expect("numeric JSON value");
                out.push_str(&format_f64(x));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push(':');
                push_json(item, out);
            }
            out.push('}');
        }
    }
}

/// Canonical byte-stable JSON text (sorted keys, 17-digit floats, trailing
/// newline).
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    push_json(value, &mut out);
    out.push('\n');
    out
}

/// Hex SHA-256 of the canonical serialization.
pub fn config_hash(config: &Value) -> String {
    let bytes = canonical_json(config);
    let digest = Sha256::digest(bytes.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// CSV spectrum: `index,eigenvalue` rows; header only when there is no
/// spectrum to report.
pub fn spectrum_csv(spectrum: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, lambda) in spectrum.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", format_f64(*lambda)));
    }
    out
}

/// Writes `text` to the destination path, or to stdout when absent.
pub fn write_output(text: &str, destination: Option<&std::path::Path>) -> Result<(), CliError> {
    match destination {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

// JSON value builders shared by the job runners.

pub fn complex_json(z: Complex64) -> Value {
    Value::Array(vec![json_f64(z.re), json_f64(z.im)])
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn matrix_json(mat: &Array2<Complex64>) -> Value {
    let rows: Vec<Value> = (0..mat.nrows())
        .map(|i| Value::Array((0..mat.ncols()).map(|j| complex_json(mat[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

pub fn spectrum_json(spectrum: &[f64]) -> Value {
    Value::Array(spectrum.iter().map(|&l| json_f64(l)).collect())
}

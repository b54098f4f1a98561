//! Number formatting shared by every emitter: 12 significant digits, '.' as the
//! decimal separator, no locale.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use thermo_core::{Error, Result};

/// `x` rounded to 12 significant digits.
pub fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Text form of [`sig`]: plain decimals in a moderate range, exponent otherwise.
pub fn fmt(x: f64) -> String {
    let r = sig(x);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e15).contains(&a) || !r.is_finite() {
        format!("{r}")
    } else {
        let s = format!("{r:.11e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                if let Some(m) = serde_json::Number::from_f64(sig(f)) {
                    *n = m;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    let mut j = serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))?;
    round_value(&mut j);
    Ok(j)
}

/// Pretty JSON with rounded numbers, newline terminated.
pub fn json_string<T: Serialize>(v: &T) -> Result<String> {
    let j = to_json(v)?;
    let mut s = serde_json::to_string_pretty(&j).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn print_json<T: Serialize>(v: &T) -> Result<()> {
    emit(&json_string(v)?)
}

pub fn emit(s: &str) -> Result<()> {
    std::io::stdout()
        .write_all(s.as_bytes())
        .map_err(|e| Error::Internal(format!("stdout: {e}")))
}

pub fn write_file(path: &str, s: &str) -> Result<()> {
    std::fs::write(path, s).map_err(|e| Error::Internal(format!("writing {path}: {e}")))
}

/// CSV with a header row; cells are preformatted strings.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Send to `path`, or stdout when `path` is `None` or `-`.
pub fn deliver(path: Option<&str>, s: &str) -> Result<()> {
    match path {
        Some(p) if p != "-" => write_file(p, s),
        _ => emit(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt(2.0), "2");
        assert_eq!(fmt(1.234567890123456e-7), "1.23456789012e-7");
        assert_eq!(sig(0.1 + 0.2), 0.3);
        let j = to_json(&serde_json::json!({"v": [0.1 + 0.2, 3]})).unwrap();
        assert_eq!(j.to_string(), r#"{"v":[0.3,3]}"#);
    }
}

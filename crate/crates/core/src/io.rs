//! JSON file formats.
//!
//! Polynomial file:
//! `{"p": 1, "m": 2, "q": 0, "n": 2, "coeffs": [B_1, ..., B_n]}` where each
//! `B_k` is a list of `p` rows of `m` entries `[re, im]`.
//!
//! Angle file:
//! `{"side": "iso", "p": 3, "m": 2, "d": 2, "gamma": 1, "angles": [...]}`.
//!
//! Numbers are written with 17 significant digits so that every `f64`
//! round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::blaschke::AngleParams;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{c, CMat};

/// Formats a finite float with 17 significant digits.
pub fn fmt_num(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Format(format!("cannot serialize non-finite number {x}")));
    }
    Ok(format!("{x:.16e}"))
}

/// `[[[re, im], ...], ...]` for a complex matrix.
pub fn matrix_json(mat: &CMat) -> Result<String> {
    let mut s = String::from("[");
    for i in 0..mat.nrows() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push('[');
        for j in 0..mat.ncols() {
            if j > 0 {
                s.push_str(", ");
            }
            let z = mat[(i, j)];
            write!(s, "[{}, {}]", fmt_num(z.re)?, fmt_num(z.im)?).expect("string write");
        }
        s.push(']');
    }
    s.push(']');
    Ok(s)
}

pub fn real_list_json(xs: &[f64]) -> Result<String> {
    let items: Result<Vec<String>> = xs.iter().map(|&x| fmt_num(x)).collect();
    Ok(format!("[{}]", items?.join(", ")))
}

/// `serde_json` formatter writing floats with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON text of a value, floats written with 17 significant digits.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    v.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn matrix_value(mat: &CMat) -> Value {
    Value::Array(
        (0..mat.nrows())
            .map(|i| {
                Value::Array(
                    (0..mat.ncols())
                        .map(|j| json!([mat[(i, j)].re, mat[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// The polynomial file structure as a JSON value.
pub fn poly_value(f: &LaurentPoly) -> Value {
    json!({
        "p": f.rows(),
        "m": f.cols(),
        "q": f.q(),
        "n": f.len(),
        "coeffs": f.coeffs().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

pub fn poly_from_value(v: &Value) -> Result<LaurentPoly> {
    poly_from_json(&v.to_string())
}

pub fn poly_to_json(f: &LaurentPoly) -> Result<String> {
    let mut s = format!(
        "{{\n  \"p\": {},\n  \"m\": {},\n  \"q\": {},\n  \"n\": {},\n  \"coeffs\": [\n",
        f.rows(),
        f.cols(),
        f.q(),
        f.len()
    );
    for (k, b) in f.coeffs().iter().enumerate() {
        let sep = if k + 1 == f.len() { "" } else { "," };
        writeln!(s, "    {}{sep}", matrix_json(b)?).expect("string write");
    }
    s.push_str("  ]\n}\n");
    Ok(s)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Format(format!("missing field \"{key}\"")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Format(format!("field \"{key}\" must be a nonnegative integer")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Format(format!("{what} must be a number")))
}

fn as_array<'a>(v: &'a Value, what: &str, len: usize) -> Result<&'a Vec<Value>> {
    let a = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be an array")))?;
    if a.len() != len {
        return Err(Error::Format(format!(
            "{what} has {} entries, expected {len}",
            a.len()
        )));
    }
    Ok(a)
}

/// Parses a `[[[re, im], ...], ...]` matrix of the given shape.
pub fn matrix_from_value(v: &Value, rows: usize, cols: usize, what: &str) -> Result<CMat> {
    let mut out = CMat::zeros(rows, cols);
    for (i, row) in as_array(v, what, rows)?.iter().enumerate() {
        for (j, entry) in as_array(row, &format!("{what} row {}", i + 1), cols)?.iter().enumerate() {
            let pair = as_array(entry, &format!("{what} entry ({}, {})", i + 1, j + 1), 2)?;
            out[(i, j)] = c(as_f64(&pair[0], "real part")?, as_f64(&pair[1], "imaginary part")?);
        }
    }
    Ok(out)
}

pub fn poly_from_json(text: &str) -> Result<LaurentPoly> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let p = as_usize(&v, "p")?;
    let m = as_usize(&v, "m")?;
    let n = as_usize(&v, "n")?;
    let q = field(&v, "q")?
        .as_i64()
        .ok_or_else(|| Error::Format("field \"q\" must be an integer".into()))?;
    if p == 0 || m == 0 || n == 0 {
        return Err(Error::Format("p, m and n must be positive".into()));
    }
    let coeffs = as_array(field(&v, "coeffs")?, "coeffs", n)?
        .iter()
        .enumerate()
        .map(|(k, b)| matrix_from_value(b, p, m, &format!("B_{}", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    LaurentPoly::new(q, coeffs)
}

pub fn read_poly(path: &Path) -> Result<LaurentPoly> {
    poly_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_poly(path: &Path, f: &LaurentPoly) -> Result<()> {
    Ok(std::fs::write(path, poly_to_json(f)?)?)
}

pub fn angles_to_json(a: &AngleParams) -> Result<String> {
    let side = match a.side {
        Role::Isometry => "iso",
        Role::CoIsometry => "coiso",
    };
    Ok(format!(
        "{{\n  \"side\": \"{side}\",\n  \"p\": {},\n  \"m\": {},\n  \"d\": {},\n  \"gamma\": {},\n  \"angles\": {}\n}}\n",
        a.p,
        a.m,
        a.d,
        a.gamma,
        real_list_json(&a.angles)?
    ))
}

pub fn angles_from_json(text: &str) -> Result<AngleParams> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_angles(path: &Path) -> Result<AngleParams> {
    angles_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn polynomial_round_trip_is_exact() {
        let f = reference::example_one(-2).scale(c(1.0 / 3.0, std::f64::consts::PI));
        let text = poly_to_json(&f).unwrap();
        assert_eq!(poly_from_json(&text).unwrap(), f);
        assert_eq!(poly_to_json(&poly_from_json(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn malformed_polynomials_rejected() {
        assert!(poly_from_json("{").is_err());
        assert!(poly_from_json(r#"{"p":1,"m":1,"q":0,"n":2,"coeffs":[[[[1,0]]]]}"#).is_err());
        assert!(poly_from_json(r#"{"p":1,"m":1,"q":0,"n":1,"coeffs":[[[[1]]]]}"#).is_err());
        assert!(poly_from_json(r#"{"p":1,"m":1,"n":1,"coeffs":[[[[1,0]]]]}"#).is_err());
        assert!(poly_from_json(r#"{"p":0,"m":1,"q":0,"n":1,"coeffs":[[]]}"#).is_err());
        let ok = poly_from_json(r#"{"p":1,"m":1,"q":-1,"n":1,"coeffs":[[[[1,0]]]]}"#).unwrap();
        assert_eq!(ok.q(), -1);
    }

    #[test]
    fn angle_round_trip() {
        let a = AngleParams { side: Role::CoIsometry, p: 1, m: 2, d: 1, gamma: 0, angles: vec![0.1, 1.0 / 7.0, 2.0, 3.0, 4.0] };
        let text = angles_to_json(&a).unwrap();
        assert_eq!(angles_from_json(&text).unwrap(), a);
        assert!(angles_from_json(r#"{"side":"sideways","p":1,"m":1,"d":0,"gamma":0,"angles":[]}"#).is_err());
    }

    #[test]
    fn value_form_round_trips() {
        let f = reference::example_two(3).scale(c(0.1, 0.7));
        let v: Value = serde_json::from_str(&to_json_string(&poly_value(&f))).unwrap();
        assert_eq!(poly_from_value(&v).unwrap(), f);
        assert_eq!(to_json_string(&json!({"x": 0.25})), r#"{"x":2.5000000000000000e-1}"#);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(fmt_num(f64::NAN).is_err());
        assert_eq!(fmt_num(0.5).unwrap(), "5.0000000000000000e-1");
    }
}

//! Text formats: elements as `a+b*w`, matrices as row-major JSON.
//!
//! ```
//! use gspin6::exact_rings::{text, QuadAlgebra};
//! let e = QuadAlgebra::gaussian();
//! let x = text::parse_eelem("1/2+-3*w", e).unwrap();
//! assert_eq!(x, e.elem(gspin6::exact_rings::rational::qr(1, 2), gspin6::exact_rings::rational::q(-3)));
//! assert_eq!(x.to_string(), "1/2+-3*w");
//! ```

use serde_json::{json, Value};

use super::algebra::{EElem, QuadAlgebra};
use super::hermitian::HermMat2;
use super::matrix::MatE;
use super::rational::{parse_rational, q, Q};
use super::RingError;

fn err(msg: impl Into<String>) -> RingError {
    RingError::Parse(msg.into())
}

/// Parses `a+b*w`, `a-b*w`, `b*w`, `w` or a bare rational `a`.
pub fn parse_eelem(s: &str, alg: QuadAlgebra) -> Result<EElem, RingError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err("empty element"));
    }
    let Some(body) = t.strip_suffix('w') else {
        return Ok(alg.rational(parse_rational(&t)?));
    };
    let starred = body.ends_with('*');
    let body = match body.strip_suffix('*') {
        Some("") => return Err(err(format!("missing coefficient in {s:?}"))),
        Some(b) => b,
        None => body,
    };
    let bytes = body.as_bytes();
    // the sign that separates the two coordinates follows a digit
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
    let (a_str, b_str) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let b_str = b_str.strip_prefix('+').unwrap_or(b_str);
    let b = match b_str {
        "" | "-" if starred => return Err(err(format!("missing coefficient in {s:?}"))),
        "" => q(1),
        "-" => q(-1),
        _ => parse_rational(b_str)?,
    };
    if b_str.starts_with('+') || b_str.starts_with("--") {
        return Err(err(format!("malformed element {s:?}")));
    }
    Ok(alg.elem(parse_rational(a_str)?, b))
}

pub fn mat_to_json(m: &MatE) -> Value {
    let alg = m.entries().first().map_or(QuadAlgebra::gaussian(), EElem::algebra);
    let rows: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    json!({ "algebra": alg.to_string(), "rows": rows })
}

pub fn mat_from_value(v: &Value) -> Result<MatE, RingError> {
    let alg: QuadAlgebra = v
        .get("algebra")
        .and_then(Value::as_str)
        .ok_or_else(|| err("missing \"algebra\""))?
        .parse()?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing \"rows\""))?;
    if rows.is_empty() {
        return Err(err("matrix has no rows"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| err("row is not an array"))?;
        let parsed = row
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_eelem(s, alg),
                Value::Number(n) => parse_eelem(&n.to_string(), alg),
                _ => Err(err("entry must be a string or integer")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    let cols = out[0].len();
    if cols == 0 || out.iter().any(|r| r.len() != cols) {
        return Err(RingError::Shape("ragged or empty rows".into()));
    }
    Ok(MatE::from_rows(out))
}

pub fn mat_from_json(s: &str) -> Result<MatE, RingError> {
    let v: Value = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
    mat_from_value(&v)
}

/// Hermitian matrix from `x,y,w` (with `w` in element syntax) or `x,y,a,b`.
pub fn parse_herm(s: &str, alg: QuadAlgebra) -> Result<HermMat2, RingError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let (x, y, w) = match parts.as_slice() {
        [x, y, w] => (parse_rational(x)?, parse_rational(y)?, parse_eelem(w, alg)?),
        [x, y, a, b] => (
            parse_rational(x)?,
            parse_rational(y)?,
            alg.elem(parse_rational(a)?, parse_rational(b)?),
        ),
        _ => return Err(err(format!("expected x,y,w or x,y,a,b: {s:?}"))),
    };
    Ok(HermMat2::new(x, y, w))
}

/// Comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>, RingError> {
    s.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_rings::rational::qr;

    #[test]
    fn element_syntax() {
        let e = QuadAlgebra::gaussian();
        assert_eq!(parse_eelem("3", e).unwrap(), e.int(3, 0));
        assert_eq!(parse_eelem("w", e).unwrap(), e.int(0, 1));
        assert_eq!(parse_eelem("-w", e).unwrap(), e.int(0, -1));
        assert_eq!(parse_eelem("2-w", e).unwrap(), e.int(2, -1));
        assert_eq!(parse_eelem("-2/3*w", e).unwrap(), e.elem(q(0), qr(-2, 3)));
        assert_eq!(parse_eelem(" 1 + 2*w ", e).unwrap(), e.int(1, 2));
        assert_eq!(parse_eelem("1/2-1/3*w", e).unwrap(), e.elem(qr(1, 2), qr(-1, 3)));
        for bad in ["", "*w", "1+", "1++2*w", "x", "1/0+w"] {
            assert!(parse_eelem(bad, e).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trip() {
        let e = QuadAlgebra::eisenstein();
        for x in [e.int(0, 0), e.int(-4, 7), e.elem(qr(5, 6), qr(-1, 9))] {
            assert_eq!(parse_eelem(&x.to_string(), e).unwrap(), x);
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let e = QuadAlgebra::split();
        let m = MatE::from_rows(vec![vec![e.int(1, 2), e.int(0, -1)], vec![e.int(3, 0), e.one()]]);
        let s = mat_to_json(&m).to_string();
        assert_eq!(mat_from_json(&s).unwrap(), m);
        assert!(mat_from_json(r#"{"algebra":"split","rows":[["1"],["1","2"]]}"#).is_err());
        assert!(mat_from_json(r#"{"algebra":"field:4","rows":[["1"]]}"#).is_err());
    }

    #[test]
    fn hermitian_arguments() {
        let e = QuadAlgebra::gaussian();
        assert_eq!(parse_herm("1,1,0,0", e).unwrap(), HermMat2::identity(e));
        assert_eq!(parse_herm("2,3,1+w", e).unwrap(), HermMat2::int(e, 2, 3, (1, 1)));
        assert!(parse_herm("1,2", e).is_err());
    }
}

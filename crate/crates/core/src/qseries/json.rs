//! Canonical JSON: exponents in increasing order, rationals and big integers
//! as decimal strings, so that equal series serialise to identical bytes.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use super::laurent::{Coef, WLaurent};
use super::pole::PoleSeries;
use super::series::{QExp, QSeries};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed series JSON: {0}")]
    Malformed(&'static str),
    #[error("bad rational '{0}'")]
    BadRational(String),
}

fn rat_str(num: impl ToString, den: impl ToString) -> String {
    let d = den.to_string();
    if d == "1" {
        num.to_string()
    } else {
        format!("{}/{}", num.to_string(), d)
    }
}

fn coef_to_string(c: &Coef) -> String {
    rat_str(c.numer(), c.denom())
}

fn parse_coef(s: &str) -> Result<Coef, JsonError> {
    let bad = || JsonError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Coef::new(n, d))
        }
        None => Ok(Coef::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn qexp_to_string(q: &QExp) -> String {
    rat_str(q.numer(), q.denom())
}

fn parse_qexp(s: &str) -> Result<QExp, JsonError> {
    let bad = || JsonError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(QExp::new(n.parse().map_err(|_| bad())?, d))
        }
        None => Ok(QExp::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn laurent_to_json(p: &WLaurent) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([e, coef_to_string(c)])).collect())
}

fn laurent_from_json(v: &Value) -> Result<WLaurent, JsonError> {
    let arr = v.as_array().ok_or(JsonError::Malformed("coefficient must be an array"))?;
    let mut p = WLaurent::zero();
    for t in arr {
        let e = t.get(0).and_then(Value::as_i64).ok_or(JsonError::Malformed("w exponent"))?;
        let c = t.get(1).and_then(Value::as_str).ok_or(JsonError::Malformed("coefficient string"))?;
        p.add_term(e, parse_coef(c)?);
    }
    Ok(p)
}

pub fn series_to_json(s: &QSeries) -> Value {
    let terms: Vec<Value> = s.terms().map(|(q, p)| json!([qexp_to_string(q), laurent_to_json(p)])).collect();
    json!({
        "qmax": s.qmax().map(|m| qexp_to_string(&m)),
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Result<QSeries, JsonError> {
    let qmax = match v.get("qmax") {
        Some(Value::String(s)) => Some(parse_qexp(s)?),
        Some(Value::Null) | None => None,
        _ => return Err(JsonError::Malformed("qmax")),
    };
    let terms = v.get("terms").and_then(Value::as_array).ok_or(JsonError::Malformed("terms"))?;
    let mut out = std::collections::BTreeMap::new();
    for t in terms {
        let q = t.get(0).and_then(Value::as_str).ok_or(JsonError::Malformed("q exponent"))?;
        let p = laurent_from_json(t.get(1).ok_or(JsonError::Malformed("term body"))?)?;
        out.insert(parse_qexp(q)?, p);
    }
    Ok(QSeries::from_parts(qmax, out))
}

pub fn pole_to_json(p: &PoleSeries) -> Value {
    let mut v = series_to_json(p.body());
    v["den"] = json!(p.den());
    v
}

pub fn pole_from_json(v: &Value) -> Result<PoleSeries, JsonError> {
    let den: Vec<u32> = match v.get("den") {
        Some(d) => serde_json::from_value(d.clone()).map_err(|_| JsonError::Malformed("den"))?,
        None => Vec::new(),
    };
    if den.contains(&0) {
        return Err(JsonError::Malformed("den factors must be positive"));
    }
    Ok(PoleSeries::new(den, series_from_json(v)?))
}

#[cfg(test)]
mod tests {
    use super::super::{coef_frac, theta1_inv};
    use super::*;

    #[test]
    fn roundtrip() {
        let mut s = QSeries::zero(QExp::new(7, 3));
        s.add_term(QExp::new(-1, 8), 3, coef_frac(-5, 2));
        s.add_term(QExp::new(2, 1), 0, coef_frac(1, 1));
        let v = series_to_json(&s);
        assert_eq!(series_from_json(&v).unwrap(), s);
        let p = theta1_inv(4, QExp::from_integer(2)).unwrap();
        assert_eq!(pole_from_json(&pole_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn canonical_text() {
        let s = QSeries::term(QExp::new(1, 2), -1, coef_frac(3, 2));
        let text = serde_json::to_string(&series_to_json(&s)).unwrap();
        assert_eq!(text, r#"{"qmax":null,"terms":[["1/2",[[-1,"3/2"]]]]}"#);
    }
}

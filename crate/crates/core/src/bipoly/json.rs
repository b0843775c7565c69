//! JSON encoding of polynomials.
//!
//! Exact form: `{"bidegree":[n,m],"coeffs":[[[re_num,re_den,im_num,im_den],…],…]}`
//! with integers written as JSON numbers when they fit in 64 bits and as
//! decimal strings otherwise. Float form: `{"coeffs":[[[re,im],…],…]}`.
//! Rows are powers of z, columns powers of w.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, C64};

use super::{BiPoly, ExactPoly, FloatPoly};

/// A polynomial read from JSON, in whichever form it was written.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(ExactPoly),
    Float(FloatPoly),
}

impl AnyPoly {
    /// Exact view; floating-point coefficients convert exactly to dyadic
    /// rationals.
    pub fn to_exact(&self) -> Result<ExactPoly> {
        match self {
            AnyPoly::Exact(q) => Ok(q.clone()),
            AnyPoly::Float(q) => ExactPoly::from_float(q).ok_or_else(|| Error::input("coeffs", "non-finite coefficient")),
        }
    }

    pub fn to_float(&self) -> FloatPoly {
        match self {
            AnyPoly::Exact(q) => q.to_float(),
            AnyPoly::Float(q) => q.clone(),
        }
    }
}

fn int_value(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

fn parse_int(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::input(path, "expected an integer")),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| Error::input(path, "expected an integer string")),
        _ => Err(Error::input(path, "expected an integer")),
    }
}

fn parse_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::input(path, "expected a number"))
}

fn rational(num: BigInt, den: BigInt, path: &str) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::input(path, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn exact_scalar_value(c: &ExactComplex) -> Value {
    json!([int_value(c.re.numer()), int_value(c.re.denom()), int_value(c.im.numer()), int_value(c.im.denom())])
}

pub fn parse_exact_scalar(v: &Value, path: &str) -> Result<ExactComplex> {
    let arr = v.as_array().ok_or_else(|| Error::input(path, "expected [re_num, re_den, im_num, im_den]"))?;
    if arr.len() != 4 {
        return Err(Error::input(path, "expected 4 integers [re_num, re_den, im_num, im_den]"));
    }
    let ints: Vec<BigInt> =
        arr.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{path}[{i}]"))).collect::<Result<_>>()?;
    Ok(ExactComplex::new(
        rational(ints[0].clone(), ints[1].clone(), &format!("{path}[1]"))?,
        rational(ints[2].clone(), ints[3].clone(), &format!("{path}[3]"))?,
    ))
}

pub fn parse_float_scalar(v: &Value, path: &str) -> Result<C64> {
    let arr = v.as_array().ok_or_else(|| Error::input(path, "expected [re, im]"))?;
    if arr.len() != 2 {
        return Err(Error::input(path, "expected [re, im]"));
    }
    let c = C64::new(parse_f64(&arr[0], &format!("{path}[0]"))?, parse_f64(&arr[1], &format!("{path}[1]"))?);
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::input(path, "non-finite coefficient"));
    }
    Ok(c)
}

pub fn exact_to_value(q: &ExactPoly) -> Value {
    let (n, m) = q.bidegree();
    let coeffs: Vec<Value> = q.grid().iter().map(|r| Value::Array(r.iter().map(exact_scalar_value).collect())).collect();
    json!({ "bidegree": [n, m], "coeffs": coeffs })
}

pub fn float_to_value(q: &FloatPoly) -> Value {
    let coeffs: Vec<Value> = q.grid().iter().map(|r| Value::Array(r.iter().map(|c| json!([c.re, c.im])).collect())).collect();
    json!({ "coeffs": coeffs })
}

/// Parse either polynomial form. `path` prefixes error locations.
pub fn poly_from_value(v: &Value, path: &str) -> Result<AnyPoly> {
    let obj = v.as_object().ok_or_else(|| Error::input(path, "expected a polynomial object"))?;
    let coeffs = obj
        .get("coeffs")
        .ok_or_else(|| Error::input(format!("{path}.coeffs"), "missing field"))?
        .as_array()
        .ok_or_else(|| Error::input(format!("{path}.coeffs"), "expected an array of rows"))?;
    let rows: Vec<&Vec<Value>> = coeffs
        .iter()
        .enumerate()
        .map(|(j, r)| r.as_array().ok_or_else(|| Error::input(format!("{path}.coeffs[{j}]"), "expected a row array")))
        .collect::<Result<_>>()?;
    match obj.get("bidegree") {
        Some(bd) => {
            let bd_path = format!("{path}.bidegree");
            let pair = bd.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::input(&bd_path, "expected [n, m]"))?;
            let n = pair[0].as_u64().ok_or_else(|| Error::input(format!("{bd_path}[0]"), "expected a nonnegative integer"))?;
            let m = pair[1].as_u64().ok_or_else(|| Error::input(format!("{bd_path}[1]"), "expected a nonnegative integer"))?;
            if !rows.is_empty() {
                if rows.len() as u64 != n + 1 {
                    return Err(Error::input(format!("{path}.coeffs"), format!("expected {} rows for bidegree", n + 1)));
                }
                if let Some((j, _)) = rows.iter().enumerate().find(|(_, r)| r.len() as u64 != m + 1) {
                    return Err(Error::input(format!("{path}.coeffs[{j}]"), format!("expected {} entries", m + 1)));
                }
            }
            let grid = rows
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(k, c)| parse_exact_scalar(c, &format!("{path}.coeffs[{j}][{k}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyPoly::Exact(BiPoly::from_grid(grid)))
        }
        None => {
            let grid = rows
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(k, c)| parse_float_scalar(c, &format!("{path}.coeffs[{j}][{k}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyPoly::Float(BiPoly::from_grid(grid)))
        }
    }
}

impl Serialize for BiPoly<ExactComplex> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        exact_to_value(self).serialize(s)
    }
}

impl Serialize for BiPoly<C64> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        float_to_value(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    #[test]
    fn exact_round_trip_is_bit_exact() {
        let mut q = parse_int_poly("z^3 - w^2 + 5zw").unwrap();
        q = q.scale(&ExactComplex::from_fractions(7, 3, -1, 9));
        let big = ExactComplex::new(
            BigRational::new(BigInt::from(10).pow(30), BigInt::from(7)),
            BigRational::zero(),
        );
        q = &q + &BiPoly::constant(big);
        let v = exact_to_value(&q);
        let text = serde_json::to_string(&v).unwrap();
        let back = poly_from_value(&serde_json::from_str(&text).unwrap(), "$").unwrap();
        assert_eq!(back, AnyPoly::Exact(q.clone()));
        assert_eq!(serde_json::to_string(&exact_to_value(&back.to_exact().unwrap())).unwrap(), text);
    }

    #[test]
    fn float_form() {
        let v: Value = serde_json::from_str(r#"{"coeffs":[[[0,0],[0,0],[-1,0]],[[0,0]],[[0,0]],[[1,0]]]}"#).unwrap();
        let q = poly_from_value(&v, "$").unwrap();
        assert_eq!(q.to_exact().unwrap(), parse_int_poly("z^3 - w^2").unwrap());
    }

    #[test]
    fn errors_point_at_the_field() {
        let v: Value = serde_json::from_str(r#"{"bidegree":[0,1],"coeffs":[[[1,1,0,1],[1,0,0,1]]]}"#).unwrap();
        match poly_from_value(&v, "$") {
            Err(Error::Input { path, .. }) => assert_eq!(path, "$.coeffs[0][1][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let v: Value = serde_json::from_str(r#"{"bidegree":[1,1],"coeffs":[[[1,1,0,1]]]}"#).unwrap();
        assert!(poly_from_value(&v, "$").is_err());
    }
}

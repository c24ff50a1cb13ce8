//! JSON text format for exact data: scalars are strings (`"p/q"` or
//! `"p/q+r/s i"`), vectors are arrays of scalars, matrices arrays of rows.

use serde_json::{json, Value};

use super::field::Field;
use super::mat::Mat;
use super::subspace::Subspace;
use crate::filtrations::{Filtration, HodgeFiltration};
use crate::Error;

pub fn scalar_to_json<T: Field>(x: &T) -> Value {
    Value::String(x.to_exact())
}

pub fn scalar_from_json<T: Field>(v: &Value) -> Result<T, Error> {
    match v {
        Value::String(s) => T::parse_exact(s),
        Value::Number(n) if n.is_i64() => Ok(T::from_int(n.as_i64().unwrap_or_default())),
        other => Err(Error::Parse(format!("expected exact scalar string, got {other}"))),
    }
}

pub fn vec_to_json<T: Field>(v: &[T]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vec_from_json<T: Field>(v: &Value) -> Result<Vec<T>, Error> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of scalars".into()))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

pub fn mat_to_json<T: Field>(m: &Mat<T>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vec_to_json(r)).collect())
}

pub fn mat_from_json<T: Field>(v: &Value) -> Result<Mat<T>, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?
        .iter()
        .map(vec_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(rows)
}

pub fn subspace_to_json<T: Field>(s: &Subspace<T>) -> Value {
    Value::Array(s.basis().iter().map(|b| vec_to_json(b)).collect())
}

pub fn subspace_from_json<T: Field>(ambient: usize, v: &Value) -> Result<Subspace<T>, Error> {
    let vs = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of vectors".into()))?
        .iter()
        .map(vec_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if vs.iter().any(|x: &Vec<T>| x.len() != ambient) {
        return Err(Error::Dimension(format!("vectors must have length {ambient}")));
    }
    Ok(Subspace::span(ambient, &vs))
}

pub fn mat_to_string<T: Field>(m: &Mat<T>) -> String {
    mat_to_json(m).to_string()
}

pub fn mat_from_str<T: Field>(s: &str) -> Result<Mat<T>, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    mat_from_json(&v)
}

/// `[[k, W_k], ...]` for every `k` from the lowest step to the first full one.
pub fn filtration_to_json<T: Field>(w: &Filtration<T>) -> Value {
    Value::Array((w.lowest()..=w.highest()).map(|k| json!([k, subspace_to_json(&w.get(k))])).collect())
}

fn steps_from_json<T: Field>(ambient: usize, v: &Value) -> Result<Vec<(i64, Subspace<T>)>, Error> {
    let items = v.as_array().ok_or_else(|| Error::Parse("expected an array of [index, vectors] steps".into()))?;
    items
        .iter()
        .map(|it| match it.as_array().map(|a| a.as_slice()) {
            Some([k, s]) => {
                let k = k.as_i64().ok_or_else(|| Error::Parse("step index must be an integer".into()))?;
                Ok((k, subspace_from_json(ambient, s)?))
            }
            _ => Err(Error::Parse("a step is [index, vectors]".into())),
        })
        .collect()
}

pub fn filtration_from_json<T: Field>(ambient: usize, v: &Value) -> Result<Filtration<T>, Error> {
    Filtration::from_steps(ambient, &steps_from_json(ambient, v)?)
}

/// `[[p, F^p], ...]` from the highest non-zero step down to the first full one.
pub fn hodge_to_json<T: Field>(f: &HodgeFiltration<T>) -> Value {
    Value::Array((f.lowest()..=f.highest()).rev().map(|p| json!([p, subspace_to_json(&f.get(p))])).collect())
}

pub fn hodge_from_json<T: Field>(ambient: usize, v: &Value) -> Result<HodgeFiltration<T>, Error> {
    HodgeFiltration::from_steps(ambient, &steps_from_json(ambient, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{Gaussian, Rational};

    #[test]
    fn matrix_text_round_trip() {
        let m: Mat<Gaussian> = mat_from_str(r#"[["1/2","0"],["3 i","-1/3+2 i"]]"#).unwrap();
        assert_eq!(mat_from_str::<Gaussian>(&mat_to_string(&m)).unwrap(), m);
        let r: Mat<Rational> = mat_from_str(r#"[["1","-7/2"]]"#).unwrap();
        assert_eq!(mat_to_string(&r), r#"[["1","-7/2"]]"#);
        assert!(mat_from_str::<Rational>(r#"[["1"],["1","2"]]"#).is_err());
    }
}

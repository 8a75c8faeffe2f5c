// Small helpers for reading JSON documents with path-qualified diagnostics.

use std::fmt::Display;

use num_bigint::BigUint;
use serde_json::{Map, Value};

use crate::error::Error;

pub(crate) fn err(path: &str, message: impl Display) -> Error {
    Error::Json {
        path: path.to_string(),
        message: message.to_string(),
    }
}

pub(crate) fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, Error> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

pub(crate) fn field<'a>(
    obj: &'a Map<String, Value>,
    name: &str,
    path: &str,
) -> Result<&'a Value, Error> {
    obj.get(name)
        .ok_or_else(|| err(path, format!("missing field {name:?}")))
}

pub(crate) fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

pub(crate) fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, Error> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

pub(crate) fn string_array(v: &Value, path: &str) -> Result<Vec<String>, Error> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("{path}[{i}]")).map(str::to_string))
        .collect()
}

/// Multiplicities are decimal strings; plain non-negative JSON integers are
/// accepted as well.
pub(crate) fn multiplicity(v: &Value, path: &str) -> Result<BigUint, Error> {
    match v {
        Value::String(s) => {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(path, format!("{s:?} is not a non-negative decimal integer")));
            }
            s.parse::<BigUint>().map_err(|e| err(path, e))
        }
        Value::Number(n) => n
            .as_u64()
            .map(BigUint::from)
            .ok_or_else(|| err(path, format!("{n} is not a non-negative integer"))),
        _ => Err(err(path, "expected a decimal string")),
    }
}

pub(crate) fn usize_value(v: &Value, path: &str) -> Result<usize, Error> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

//! JSON encoding of complex scalars and matrices.
//!
//! Complex numbers are `[re, im]` pairs, matrices are row-major nested arrays.
//! On input a bare number is accepted as a real entry.

use bp_core::CMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

pub fn real_matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| json!((0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<_>>())).collect())
}

fn entry(v: &Value) -> CliResult<Complex64> {
    match v {
        Value::Number(x) => Ok(Complex64::new(as_f64(x)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (&pair[0], &pair[1]) {
            (Value::Number(re), Value::Number(im)) => Ok(Complex64::new(as_f64(re)?, as_f64(im)?)),
            _ => Err(CliError::Usage(format!("expected [re, im] numbers, got {v}"))),
        },
        _ => Err(CliError::Usage(format!("expected a number or [re, im] pair, got {v}"))),
    }
}

fn as_f64(x: &serde_json::Number) -> CliResult<f64> {
    x.as_f64().ok_or_else(|| CliError::Usage(format!("not representable as f64: {x}")))
}

fn parse(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

/// A flat list of complex entries, e.g. `[[0.6, 0], [0, 0.8]]` or `[0.6]`.
pub fn parse_vector(text: &str) -> CliResult<Vec<Complex64>> {
    match parse(text)? {
        Value::Array(items) => items.iter().map(entry).collect(),
        other => Err(CliError::Usage(format!("expected a JSON array, got {other}"))),
    }
}

/// A square complex matrix as rows of entries.
pub fn parse_matrix(text: &str) -> CliResult<CMatrix> {
    let rows = match parse(text)? {
        Value::Array(rows) => rows,
        other => return Err(CliError::Usage(format!("expected an array of rows, got {other}"))),
    };
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Usage("empty matrix".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(items) = row else {
            return Err(CliError::Usage(format!("row {i} is not an array")));
        };
        if items.len() != n {
            return Err(CliError::Usage(format!("row {i} has {} entries, expected {n}", items.len())));
        }
        for (j, v) in items.iter().enumerate() {
            m[(i, j)] = entry(v)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_roundtrip() {
        let m = parse_matrix("[[[0.5, -1], 2], [[0, 1e-3], [3, 0]]]").unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(0.5, -1.0));
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 0.0));
        let again = parse_matrix(&matrix(&m).to_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(matches!(parse_matrix("[[1, 2], [3]]"), Err(CliError::Usage(_))));
        assert!(matches!(parse_matrix("[[1, [2, 3, 4]], [3, 4]]"), Err(CliError::Usage(_))));
        assert!(matches!(parse_vector("{\"a\": 1}"), Err(CliError::Usage(_))));
    }
}

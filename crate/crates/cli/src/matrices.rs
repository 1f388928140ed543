//! Matrix files: JSON arrays of `[re, im]` pairs in row-major order, either
//! flat (`N²` pairs) or nested by rows.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use crate::CliError;

fn pair(v: &Value) -> Result<Complex64, CliError> {
    let bad = || CliError::validation(format!("expected [re, im], got {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    match arr.as_slice() {
        [re, im] => Ok(Complex64::new(re.as_f64().ok_or_else(bad)?, im.as_f64().ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

/// Parses one matrix from its JSON form.
pub fn matrix(v: &Value) -> Result<DMatrix<Complex64>, CliError> {
    let items = v.as_array().ok_or_else(|| CliError::validation("matrix must be a JSON array"))?;
    let nested = items.first().and_then(Value::as_array).is_some_and(|a| a.first().is_some_and(Value::is_array));
    let flat: Vec<Complex64> = if nested {
        items
            .iter()
            .map(|row| row.as_array().ok_or_else(|| CliError::validation("ragged matrix rows")))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .map(pair)
            .collect::<Result<_, _>>()?
    } else {
        items.iter().map(pair).collect::<Result<_, _>>()?
    };
    let n = (flat.len() as f64).sqrt().round() as usize;
    if n * n != flat.len() || n == 0 {
        return Err(CliError::validation(format!("{} entries do not form a square matrix", flat.len())));
    }
    Ok(DMatrix::from_row_slice(n, n, &flat))
}

/// Serializes a matrix back to the flat row-major form.
pub fn to_json(m: &DMatrix<Complex64>) -> Value {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(serde_json::json!([m[(i, j)].re, m[(i, j)].im]));
        }
    }
    Value::Array(out)
}

pub fn read(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

/// Looks up `key` (case-insensitively) in a JSON object.
pub fn field<'a>(doc: &'a Value, key: &str) -> Option<&'a Value> {
    doc.as_object()?.iter().find(|(k, _)| k.eq_ignore_ascii_case(key)).map(|(_, v)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_nested_agree() {
        let flat = serde_json::json!([[1.0, 0.0], [2.0, 1.0], [0.0, -1.0], [3.0, 0.5]]);
        let nested = serde_json::json!([[[1.0, 0.0], [2.0, 1.0]], [[0.0, -1.0], [3.0, 0.5]]]);
        let a = matrix(&flat).unwrap();
        assert_eq!(a, matrix(&nested).unwrap());
        assert_eq!(a[(0, 1)], Complex64::new(2.0, 1.0));
        assert_eq!(matrix(&to_json(&a)).unwrap(), a);
        assert!(matrix(&serde_json::json!([[1.0, 0.0], [2.0, 0.0]])).is_err());
    }
}

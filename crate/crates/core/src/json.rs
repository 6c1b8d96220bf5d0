//! JSON codecs for matrices, paths and complex numbers.
//!
//! Matrices are row-major arrays of `[re, im]` pairs, either nested by rows
//! (`[[[1,0],[0,0]],[[0,0],[1,0]]]`) or flat (`[[1,0],[0,0],[0,0],[1,0]]`).

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matgroup::{AlgebraElement, CMat, GroupElement, PiecewisePath, Segment};

/// Largest accepted matrix dimension.
pub const MAX_DIM: usize = 32;
/// Largest accepted number of path segments.
pub const MAX_SEGMENTS: usize = 4096;

/// Round to 15 significant digits so that output is stable across platforms.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn complex_to_json(z: Complex64) -> Value {
    json!([sig15(z.re), sig15(z.im)])
}

pub fn complex_from_json(v: &Value) -> Result<Complex64> {
    let pair = v.as_array().ok_or_else(|| Error::Json("expected [re, im]".into()))?;
    if pair.len() != 2 {
        return Err(Error::Json(format!("expected [re, im], found {} entries", pair.len())));
    }
    let part = |x: &Value| {
        x.as_f64().filter(|f| f.is_finite()).ok_or_else(|| Error::Json("complex parts must be finite numbers".into()))
    };
    Ok(Complex64::new(part(&pair[0])?, part(&pair[1])?))
}

/// Nested row-major encoding.
pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows()).map(|r| Value::Array((0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())).collect(),
    )
}

/// Accepts the nested or the flat encoding of a square matrix.
pub fn matrix_from_json(v: &Value) -> Result<CMat> {
    let outer = v.as_array().ok_or_else(|| Error::Json("matrix must be an array".into()))?;
    if outer.is_empty() {
        return Err(Error::Json("matrix is empty".into()));
    }
    let nested = outer[0].as_array().is_some_and(|row| row.first().is_some_and(Value::is_array));
    let entries: Vec<Complex64> = if nested {
        let n = outer.len();
        if n > MAX_DIM {
            return Err(Error::Json(format!("matrix dimension {n} exceeds {MAX_DIM}")));
        }
        let mut out = Vec::with_capacity(n * n);
        for (r, row) in outer.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Json(format!("row {r} is not an array")))?;
            if row.len() != n {
                return Err(Error::Json(format!("row {r} has {} entries, expected {n}", row.len())));
            }
            for z in row {
                out.push(complex_from_json(z)?);
            }
        }
        out
    } else {
        if outer.len() > MAX_DIM * MAX_DIM {
            return Err(Error::Json("matrix has too many entries".into()));
        }
        outer.iter().map(complex_from_json).collect::<Result<_>>()?
    };
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n * n != entries.len() {
        return Err(Error::Json(format!("{} entries do not form a square matrix", entries.len())));
    }
    Ok(CMat::from_row_slice(n, n, &entries))
}

pub fn algebra_from_json(v: &Value) -> Result<AlgebraElement> {
    AlgebraElement::new(matrix_from_json(v)?)
}

pub fn group_from_json(v: &Value) -> Result<GroupElement> {
    GroupElement::new(matrix_from_json(v)?)
}

/// `{"segments":[{"generator": matrix, "duration": d}, …]}`.
pub fn path_to_json(p: &PiecewisePath) -> Value {
    json!({
        "segments": p.segments().iter().map(|s| json!({
            "generator": matrix_to_json(s.generator.matrix()),
            "duration": s.duration,
        })).collect::<Vec<_>>()
    })
}

pub fn path_from_json(v: &Value) -> Result<PiecewisePath> {
    let segs = v
        .get("segments")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("path needs a \"segments\" array".into()))?;
    if segs.len() > MAX_SEGMENTS {
        return Err(Error::Json(format!("more than {MAX_SEGMENTS} segments")));
    }
    let mut out = Vec::with_capacity(segs.len());
    for (i, s) in segs.iter().enumerate() {
        let g = s.get("generator").ok_or_else(|| Error::Json(format!("segment {i}: missing generator")))?;
        let d = s
            .get("duration")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Json(format!("segment {i}: missing numeric duration")))?;
        out.push(Segment { generator: algebra_from_json(g)?, duration: d });
    }
    PiecewisePath::new(out)
}

pub fn path_from_str(s: &str) -> Result<PiecewisePath> {
    path_from_json(&serde_json::from_str(s)?)
}

pub fn matrix_from_str(s: &str) -> Result<CMat> {
    matrix_from_json(&serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    #[test]
    fn sig15_rounds() {
        assert_eq!(sig15(0.1 + 0.2), 0.3);
        assert_eq!(sig15(-1.0), -1.0);
        assert_eq!(sig15(0.0), 0.0);
        assert_eq!(sig15(-0.0), 0.0);
        assert!(sig15(f64::NAN).is_nan());
    }

    #[test]
    fn matrix_round_trip_and_flat_form() {
        let mut s = Sampler::new(3);
        let a = s.algebra(3);
        let v = matrix_to_json(a.matrix());
        let back = matrix_from_json(&v).unwrap();
        assert!((back - a.matrix()).norm() < 1e-13);
        let flat = matrix_from_str("[[0,1],[0,0],[0,0],[0,-1]]").unwrap();
        let nested = matrix_from_str("[[[0,1],[0,0]],[[0,0],[0,-1]]]").unwrap();
        assert_eq!(flat, nested);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        for bad in ["[]", "[[0,1],[0,0],[0,0]]", "[[[0,1]],[[0,0]]]", "{}", "[[1]]", "[[[1,0,2]]]"] {
            assert!(matrix_from_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn path_round_trip() {
        let mut s = Sampler::new(4);
        let p = PiecewisePath::new(vec![
            Segment { generator: s.algebra(2), duration: 0.25 },
            Segment { generator: s.algebra(2), duration: 0.75 },
        ])
        .unwrap();
        let q = path_from_json(&path_to_json(&p)).unwrap();
        assert!((p.endpoint().matrix() - q.endpoint().matrix()).norm() < 1e-12);
        assert!(path_from_str(r#"{"segments":[]}"#).is_err());
        assert!(path_from_str(r#"{"segments":[{"generator":[[[0,1],[0,0]],[[0,0],[0,1]]],"duration":1}]}"#).is_err());
    }
}

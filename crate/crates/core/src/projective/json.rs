//! JSON form of cycles and matrices.
//!
//! ```json
//! {"ambient_dim": 1,
//!  "curves": [{"degree": 1, "coeffs": [[[1,0],[0,0]], [[0,0],[1,0]]], "mult": 1}],
//!  "points": [{"coords": [[1,0],[0,0]], "mult": 2}]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are lists of rows.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    Complex, HermitianMatrix, ProjectiveCycle, ProjectivePoint, RationalCurveChart,
};
use crate::error::{invalid, Result};

/// Row-major matrix of `[re, im]` pairs.
pub type MatrixDocument = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub degree: usize,
    /// `(N+1) x (degree+1)`; column `m` multiplies `t^m`.
    pub coeffs: MatrixDocument,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDocument {
    pub coords: Vec<[f64; 2]>,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleDocument {
    pub ambient_dim: usize,
    #[serde(default)]
    pub curves: Vec<CurveDocument>,
    #[serde(default)]
    pub points: Vec<PointDocument>,
}

pub fn matrix_to_document(m: &DMatrix<Complex>) -> MatrixDocument {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_document(doc: &MatrixDocument) -> Result<DMatrix<Complex>> {
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    if doc.iter().any(|r| r.len() != cols) {
        return invalid("matrix rows have different lengths");
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        Complex::new(doc[i][j][0], doc[i][j][1])
    }))
}

impl HermitianMatrix {
    pub fn to_document(&self) -> MatrixDocument {
        matrix_to_document(self.entries())
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        Self::new(matrix_from_document(doc)?)
    }
}

impl ProjectiveCycle {
    pub fn to_document(&self) -> CycleDocument {
        CycleDocument {
            ambient_dim: self.ambient_dim(),
            curves: self
                .curves()
                .iter()
                .map(|(c, m)| CurveDocument {
                    degree: c.degree(),
                    coeffs: matrix_to_document(c.coeffs()),
                    mult: *m,
                })
                .collect(),
            points: self
                .points()
                .iter()
                .map(|(p, m)| PointDocument {
                    coords: p.coords().iter().map(|z| [z.re, z.im]).collect(),
                    mult: *m,
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &CycleDocument) -> Result<Self> {
        let mut cycle = ProjectiveCycle::empty(doc.ambient_dim);
        for c in &doc.curves {
            let coeffs = matrix_from_document(&c.coeffs)?;
            if coeffs.ncols() != c.degree + 1 {
                return invalid(format!(
                    "curve of degree {} needs {} coefficient columns, got {}",
                    c.degree,
                    c.degree + 1,
                    coeffs.ncols()
                ));
            }
            cycle.add_curve(RationalCurveChart::new(coeffs)?, c.mult)?;
        }
        for p in &doc.points {
            let v = DVector::from_iterator(
                p.coords.len(),
                p.coords.iter().map(|z| Complex::new(z[0], z[1])),
            );
            cycle.add_point(ProjectivePoint::new(v)?, p.mult)?;
        }
        Ok(cycle)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("cycle serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CycleDocument = serde_json::from_str(text)
            .map_err(|e| crate::Error::InvalidArgument(format!("cycle JSON: {e}")))?;
        Self::from_document(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = r#"{"ambient_dim": 1,
            "curves": [{"degree": 1, "coeffs": [[[1,0],[0,0]], [[0,0],[1,0]]], "mult": 1}],
            "points": [{"coords": [[1,0],[0,0]], "mult": 2}]}"#;
        let cycle = ProjectiveCycle::from_json(text).unwrap();
        assert_eq!(cycle.curves().len(), 1);
        assert_eq!(cycle.points()[0].1, 2);
        assert_eq!(cycle.nominal_volume(), 3.0);
        let again = ProjectiveCycle::from_json(&cycle.to_json()).unwrap();
        assert_eq!(again, cycle);
    }

    #[test]
    fn rejects_malformed() {
        let wrong_cols = r#"{"ambient_dim": 1,
            "curves": [{"degree": 2, "coeffs": [[[1,0],[0,0]], [[0,0],[1,0]]], "mult": 1}]}"#;
        assert!(ProjectiveCycle::from_json(wrong_cols).is_err());
        let wrong_dim = r#"{"ambient_dim": 2, "points": [{"coords": [[1,0],[0,0]], "mult": 1}]}"#;
        assert!(ProjectiveCycle::from_json(wrong_dim).is_err());
        assert!(ProjectiveCycle::from_json("{").is_err());
    }
}

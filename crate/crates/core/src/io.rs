//! JSON matrix files: `{"dim": d, "re": [[..]], "im": [[..]]}`, row-major,
//! entry `(i, j)` is `re[i][j] + i·im[i][j]`.
//!
//! Floats are written in the shortest form that parses back to the same
//! bits, so a file read into a [`HermitianMatrix`] and written again is
//! byte-identical whenever its input was exactly Hermitian.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, DensityOperator, HermitianMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        debug_assert_eq!(rows, cols);
        Self {
            dim: rows,
            re: (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    pub fn from_hermitian(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.matrix())
    }

    pub fn from_density(a: &DensityOperator) -> Self {
        Self::from_matrix(a.entries())
    }

    /// The square complex matrix, after checking that both grids are
    /// `dim × dim`.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (name, grid) in [("re", &self.re), ("im", &self.im)] {
            if grid.len() != d || grid.iter().any(|row| row.len() != d) {
                return Err(Error::Malformed(format!("\"{name}\" is not a {d}x{d} grid")));
            }
        }
        Ok(CMatrix::from_fn(d, d, |i, j| Complex::new(self.re[i][j], self.im[i][j])))
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }

    pub fn to_density(&self, require_unit_trace: bool) -> Result<DensityOperator> {
        DensityOperator::new(self.to_hermitian()?, require_unit_trace)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

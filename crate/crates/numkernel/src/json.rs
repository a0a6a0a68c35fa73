use serde::{Deserialize, Serialize};

use crate::{CMat, DensityMatrix, KernelError, Result};

/// Wire form of a complex matrix: `{"rows","cols","re","im"}`, with an
/// optional `"dims"` list for density matrices. A missing `"im"` means a
/// real matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let re = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        Self { rows: m.nrows(), cols: m.ncols(), re, im: Some(im), dims: None }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        let mut j = Self::from_matrix(rho.mat());
        j.dims = Some(rho.dims().to_vec());
        j
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == self.rows && rows.iter().all(|r| r.len() == self.cols);
        if !shape_ok(&self.re) {
            return Err(KernelError::Format(format!("\"re\" is not {}x{}", self.rows, self.cols)));
        }
        if let Some(im) = &self.im {
            if !shape_ok(im) {
                return Err(KernelError::Format(format!("\"im\" is not {}x{}", self.rows, self.cols)));
            }
        }
        let m = CMat::from_fn(self.rows, self.cols, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |v| v[i][j]);
            crate::c64(self.re[i][j], im)
        });
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KernelError::Format("non-finite entry".into()));
        }
        Ok(m)
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let dims = self.dims.clone().unwrap_or_else(|| vec![self.rows]);
        DensityMatrix::new(self.to_matrix()?, dims)
    }
}

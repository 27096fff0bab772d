// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest operator dimension accepted anywhere in this module.
pub const MAX_DIM: usize = 64;

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix(pub DMatrix<Complex64>);

/// JSON form: rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

impl CMatrix {
    pub fn zeros(d: usize) -> Self {
        CMatrix(DMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        CMatrix(DMatrix::identity(d, d))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let d = rows.len();
        CMatrix(DMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(d: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        CMatrix(DMatrix::from_fn(d, d, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.0[(i, j)] = z;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix(self.0.map(|z| z * s))
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        CMatrix(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> Complex64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.0[(i, j)] * other.0[(j, i)];
            }
        }
        acc
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max(‖E² − E‖, ‖E − E†‖)` in Frobenius norm.
    pub fn projector_residual(&self) -> f64 {
        let idem = (&self.0 * &self.0 - &self.0).norm();
        let herm = (&self.0 - self.0.adjoint()).norm();
        idem.max(herm)
    }

    pub fn to_json(&self) -> MatrixJson {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect()
    }

    pub fn from_json(rows: &MatrixJson, d: usize) -> Result<CMatrix> {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension(format!("matrix must be {d}x{d}")));
        }
        let m = CMatrix::from_fn(d, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
        if !m.is_finite() {
            return Err(Error::Malformed("non-finite matrix entry".into()));
        }
        Ok(m)
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Dimension("operator dimension must be positive".into()));
    }
    if d > MAX_DIM {
        return Err(Error::SizeLimit {
            what: "operator dimension",
            size: d,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// Generic `{ "d": ..., "entries": [...] }` wrapper shared by the JSON files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile<E> {
    pub d: usize,
    pub entries: Vec<E>,
}

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::*;

    pub fn i2() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn y() -> CMatrix {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, Complex64::new(0.0, -1.0));
        m.set(1, 0, Complex64::new(0.0, 1.0));
        m
    }
}

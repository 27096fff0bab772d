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

//! Quantum isomorphism certificates and projective permutation matrices.
//!
//! A certificate is a family of `d x d` projectors `E_gh`, one per pair in
//! `V(G) x V(H)`. It is accepted when every row and column of the family
//! sums to the identity and `E_gh E_g'h' = 0` whenever `rel(g, g')` differs
//! from `rel(h, h')`. The same family, assembled as a block matrix `P`, must
//! then be unitary and satisfy `(A_G ⊗ I) P = P (A_H ⊗ I)`; both forms are
//! evaluated and compared.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cmatrix::{check_dim, CMatrix, MatrixJson, OperatorFile};
use crate::error::{Error, Result};
use crate::game::rel;
use crate::graph::Graph;
use crate::nonsignalling::{iso_game_tokens, Correlation};

/// Largest assembled block matrix (`n·d`) used for the unitarity check.
pub const MAX_ASSEMBLED: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumIsoCertificate {
    d: usize,
    ng: usize,
    nh: usize,
    /// Row-major over `(g, h)`.
    blocks: Vec<CMatrix>,
}

impl QuantumIsoCertificate {
    pub fn zeros(d: usize, ng: usize, nh: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(QuantumIsoCertificate {
            d,
            ng,
            nh,
            blocks: vec![CMatrix::zeros(d); ng * nh],
        })
    }

    /// `d = 1` certificate: `E_gh = 1` iff `h = φ(g)`.
    pub fn from_isomorphism(ng: usize, nh: usize, image: &[usize]) -> Result<Self> {
        let mut cert = Self::zeros(1, ng, nh)?;
        for (g, &h) in image.iter().enumerate() {
            cert.set(g, h, CMatrix::identity(1))?;
        }
        Ok(cert)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.ng, self.nh)
    }

    pub fn block(&self, g: usize, h: usize) -> &CMatrix {
        &self.blocks[g * self.nh + h]
    }

    pub fn block_mut(&mut self, g: usize, h: usize) -> &mut CMatrix {
        &mut self.blocks[g * self.nh + h]
    }

    pub fn set(&mut self, g: usize, h: usize, m: CMatrix) -> Result<()> {
        if m.dim() != self.d {
            return Err(Error::Dimension(format!(
                "block is {}x{}, certificate has d = {}",
                m.dim(),
                m.dim(),
                self.d
            )));
        }
        if g >= self.ng || h >= self.nh {
            return Err(Error::VertexOutOfRange {
                index: g.max(h),
                n: self.ng.max(self.nh),
            });
        }
        *self.block_mut(g, h) = m;
        Ok(())
    }

    pub fn nonzero_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| !b.is_zero()).count()
    }

    /// Blocks as an `n x n` array, for [`verify_ppm`].
    pub fn block_rows(&self) -> Vec<Vec<CMatrix>> {
        (0..self.ng)
            .map(|g| (0..self.nh).map(|h| self.block(g, h).clone()).collect())
            .collect()
    }

    pub fn to_json(&self, g: &Graph, h: &Graph) -> Result<String> {
        self.check_graphs(g, h)?;
        let entries = (0..self.ng)
            .flat_map(|a| (0..self.nh).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.block(a, b).is_zero())
            .map(|(a, b)| CertificateEntry {
                g: g.label(a).to_string(),
                h: h.label(b).to_string(),
                matrix: self.block(a, b).to_json(),
            })
            .collect();
        Ok(serde_json::to_string_pretty(&OperatorFile { d: self.d, entries })?)
    }

    pub fn from_json(text: &str, g: &Graph, h: &Graph) -> Result<Self> {
        let file: OperatorFile<CertificateEntry> = serde_json::from_str(text)?;
        let mut cert = Self::zeros(file.d, g.n(), h.n())?;
        let gi: HashMap<&str, usize> = g.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let hi: HashMap<&str, usize> = h.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        for e in file.entries {
            let a = *gi.get(e.g.as_str()).ok_or_else(|| Error::UnknownVertex(e.g.clone()))?;
            let b = *hi.get(e.h.as_str()).ok_or_else(|| Error::UnknownVertex(e.h.clone()))?;
            cert.set(a, b, CMatrix::from_json(&e.matrix, file.d)?)?;
        }
        Ok(cert)
    }

    fn check_graphs(&self, g: &Graph, h: &Graph) -> Result<()> {
        if (g.n(), h.n()) != (self.ng, self.nh) {
            return Err(Error::Dimension(format!(
                "certificate is {}x{}, graphs have {} and {} vertices",
                self.ng,
                self.nh,
                g.n(),
                h.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub g: String,
    pub h: String,
    pub matrix: MatrixJson,
}

/// Residuals of the two equivalent characterisations of a projective
/// permutation matrix.
#[derive(Debug, Clone, Serialize)]
pub struct PpmReport {
    pub n: usize,
    pub d: usize,
    /// Largest `max(‖E²−E‖, ‖E−E†‖)` over blocks.
    pub projector: f64,
    pub row_sums: f64,
    pub column_sums: f64,
    /// `max(‖PP† − I‖, ‖P†P − I‖)` of the assembled matrix.
    pub unitarity: f64,
    pub blocks_ok: bool,
    pub unitary_ok: bool,
    /// The two characterisations agree up to slack.
    pub consistent: bool,
    pub ok: bool,
}

fn sums(blocks: &[Vec<CMatrix>], d: usize) -> (f64, f64) {
    let n = blocks.len();
    let id = CMatrix::identity(d);
    let mut row = 0f64;
    let mut col = 0f64;
    for i in 0..n {
        let r = blocks[i].iter().fold(CMatrix::zeros(d), |acc, b| acc.add(b));
        row = row.max(r.sub(&id).frobenius());
        let c = (0..n).fold(CMatrix::zeros(d), |acc, j| acc.add(&blocks[j][i]));
        col = col.max(c.sub(&id).frobenius());
    }
    (row, col)
}

fn unitarity_residual(blocks: &[Vec<CMatrix>], d: usize) -> f64 {
    let n = blocks.len();
    let nd = n * d;
    let p = DMatrix::<Complex64>::from_fn(nd, nd, |r, c| blocks[r / d][c / d].get(r % d, c % d));
    let id = DMatrix::<Complex64>::identity(nd, nd);
    let pp = &p * p.adjoint() - &id;
    let pp2 = p.adjoint() * &p - &id;
    pp.norm().max(pp2.norm())
}

/// Linear slack allowed between two characterisations before a
/// disagreement counts as an inconsistency.
fn linear_slack(n: usize, d: usize, tol: f64) -> f64 {
    10.0 * (n * d) as f64 * tol
}

/// Checks a square block array both as "projector blocks with identity row
/// and column sums" and as "unitary with projector blocks".
pub fn verify_ppm(blocks: &[Vec<CMatrix>], tol: f64) -> Result<PpmReport> {
    let n = blocks.len();
    if n == 0 || blocks.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("block array must be square and nonempty".into()));
    }
    let d = blocks[0][0].dim();
    check_dim(d)?;
    if blocks.iter().flatten().any(|b| b.dim() != d) {
        return Err(Error::Dimension("blocks have different sizes".into()));
    }
    if n * d > MAX_ASSEMBLED {
        return Err(Error::SizeLimit {
            what: "assembled block matrix",
            size: n * d,
            limit: MAX_ASSEMBLED,
        });
    }
    let projector = blocks
        .iter()
        .flatten()
        .map(CMatrix::projector_residual)
        .fold(0.0, f64::max);
    let (row_sums, column_sums) = sums(blocks, d);
    let unitarity = unitarity_residual(blocks, d);

    let blocks_ok = projector <= tol && row_sums <= tol && column_sums <= tol;
    let unitary_ok = projector <= tol && unitarity <= tol;
    let slack = linear_slack(n, d, tol);
    let consistent = !(blocks_ok && unitarity > slack)
        && !(unitary_ok && (row_sums > slack || column_sums > slack));
    Ok(PpmReport {
        n,
        d,
        projector,
        row_sums,
        column_sums,
        unitarity,
        blocks_ok,
        unitary_ok,
        consistent,
        ok: blocks_ok && unitary_ok,
    })
}

/// Four vertex indices `(g, h, g', h')` naming an orthogonality condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairOfPairs {
    pub g: usize,
    pub h: usize,
    pub g2: usize,
    pub h2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QisoReport {
    pub d: usize,
    /// `|V(G)| != |V(H)|`; nothing else is evaluated.
    pub size_mismatch: bool,
    pub projector: f64,
    pub row_sums: f64,
    pub column_sums: f64,
    /// Largest `‖E_gh E_g'h'‖` over pairs with `rel(g,g') != rel(h,h')`.
    pub orthogonality: f64,
    pub worst_orthogonality: Option<PairOfPairs>,
    /// `‖(A_G ⊗ I) P − P (A_H ⊗ I)‖`.
    pub intertwining: f64,
    pub unitarity: f64,
    /// Projectors, row/column sums and orthogonality all within tolerance.
    pub projector_form_ok: bool,
    /// Projectors, unitarity and intertwining all within tolerance.
    pub matrix_form_ok: bool,
    pub consistent: bool,
    pub ok: bool,
}

impl QisoReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.projector,
            self.row_sums,
            self.column_sums,
            self.orthogonality,
            self.intertwining,
            self.unitarity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluates both forms of the certificate conditions.
///
/// The intertwining equation only controls the orthogonality conditions
/// through a trace argument, so a small orthogonality violation `ε` may show
/// up as an intertwining residual of order `ε²`. The report therefore calls
/// the two forms inconsistent only when one passes at `tol` and the other
/// fails by more than `n·d·√tol`.
pub fn verify_qiso_certificate(
    g: &Graph,
    h: &Graph,
    cert: &QuantumIsoCertificate,
    tol: f64,
) -> Result<QisoReport> {
    cert.check_graphs(g, h)?;
    let d = cert.d;
    if g.n() != h.n() {
        return Ok(QisoReport {
            d,
            size_mismatch: true,
            projector: f64::INFINITY,
            row_sums: f64::INFINITY,
            column_sums: f64::INFINITY,
            orthogonality: f64::INFINITY,
            worst_orthogonality: None,
            intertwining: f64::INFINITY,
            unitarity: f64::INFINITY,
            projector_form_ok: false,
            matrix_form_ok: false,
            consistent: true,
            ok: false,
        });
    }
    let n = g.n();
    let blocks = cert.block_rows();
    let ppm = verify_ppm(&blocks, tol)?;

    let nonzero: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !cert.block(a, b).is_zero())
        .collect();
    let mut orthogonality = 0f64;
    let mut worst = None;
    for &(a, b) in &nonzero {
        for &(a2, b2) in &nonzero {
            if rel(g, a, a2)? == rel(h, b, b2)? {
                continue;
            }
            let r = cert.block(a, b).mul(cert.block(a2, b2)).frobenius();
            if r > orthogonality {
                orthogonality = r;
                worst = Some(PairOfPairs { g: a, h: b, g2: a2, h2: b2 });
            }
        }
    }

    let mut inter_sq = 0f64;
    for a in 0..n {
        for b in 0..n {
            let lhs = g.neighbors(a).fold(CMatrix::zeros(d), |acc, a2| acc.add(cert.block(a2, b)));
            let rhs = h.neighbors(b).fold(CMatrix::zeros(d), |acc, b2| acc.add(cert.block(a, b2)));
            inter_sq += lhs.sub(&rhs).frobenius().powi(2);
        }
    }
    let intertwining = inter_sq.sqrt();

    let projector_form_ok = ppm.blocks_ok && orthogonality <= tol;
    let matrix_form_ok = ppm.unitary_ok && intertwining <= tol;
    let slack = (n * d) as f64 * tol.sqrt();
    let worst_a = ppm.projector.max(ppm.row_sums).max(ppm.column_sums).max(orthogonality);
    let worst_b = ppm.projector.max(ppm.unitarity).max(intertwining);
    let consistent = ppm.consistent
        && !(projector_form_ok && worst_b > slack)
        && !(matrix_form_ok && worst_a > slack);

    Ok(QisoReport {
        d,
        size_mismatch: false,
        projector: ppm.projector,
        row_sums: ppm.row_sums,
        column_sums: ppm.column_sums,
        orthogonality,
        worst_orthogonality: worst,
        intertwining,
        unitarity: ppm.unitarity,
        projector_form_ok,
        matrix_form_ok,
        consistent,
        ok: projector_form_ok && matrix_form_ok,
    })
}

/// The correlation of the strategy where both players measure on the
/// maximally entangled state: `p(y, y' | x, x') = tr(E_xy E_x'y') / d`,
/// with `E_hg = E_gh` and same-side operators zero. Bob's operators are the
/// transposes of Alice's, which is what turns the expectation into this
/// trace, so they are never formed.
pub fn certificate_correlation(
    g: &Graph,
    h: &Graph,
    cert: &QuantumIsoCertificate,
) -> Result<Correlation<f64>> {
    cert.check_graphs(g, h)?;
    let ng = g.n();
    let mut c = Correlation::<f64>::zeros(iso_game_tokens(g, h))?;
    // (question, answer, block) for every nonzero operator, both orientations.
    let mut ops: Vec<(usize, usize, &CMatrix)> = Vec::new();
    for a in 0..ng {
        for b in 0..h.n() {
            let e = cert.block(a, b);
            if !e.is_zero() {
                ops.push((a, ng + b, e));
                ops.push((ng + b, a, e));
            }
        }
    }
    let d = cert.d as f64;
    for &(x, y, e) in &ops {
        for &(x2, y2, f) in &ops {
            c.set(x, x2, y, y2, e.trace_product(f).re / d);
        }
    }
    Ok(c)
}

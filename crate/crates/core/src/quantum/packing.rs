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

//! Projective packings: projectors on vertices, orthogonal across edges.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::cmatrix::{check_dim, CMatrix, MatrixJson, OperatorFile};
use crate::equitable::Ratio;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest distance of a projector trace from an integer before it is
/// rejected as a rank.
pub const RANK_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePacking {
    d: usize,
    assignment: Vec<CMatrix>,
}

impl ProjectivePacking {
    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(ProjectivePacking {
            d,
            assignment: vec![CMatrix::zeros(d); n],
        })
    }

    /// `d = 1` packing of an independent set: `E_g = 1` on `set`.
    pub fn from_independent_set(n: usize, set: &[usize]) -> Result<Self> {
        let mut p = Self::zeros(1, n)?;
        for &v in set {
            p.set(v, CMatrix::identity(1))?;
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn get(&self, v: usize) -> &CMatrix {
        &self.assignment[v]
    }

    pub fn set(&mut self, v: usize, m: CMatrix) -> Result<()> {
        if m.dim() != self.d {
            return Err(Error::Dimension(format!(
                "projector is {0}x{0}, packing has d = {1}",
                m.dim(),
                self.d
            )));
        }
        let n = self.n();
        *self
            .assignment
            .get_mut(v)
            .ok_or(Error::VertexOutOfRange { index: v, n })? = m;
        Ok(())
    }

    pub fn to_json(&self, g: &Graph) -> Result<String> {
        self.check_graph(g)?;
        let entries = self
            .assignment
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(v, e)| PackingEntry {
                vertex: g.label(v).to_string(),
                matrix: e.to_json(),
            })
            .collect();
        Ok(serde_json::to_string_pretty(&OperatorFile { d: self.d, entries })?)
    }

    pub fn from_json(text: &str, g: &Graph) -> Result<Self> {
        let file: OperatorFile<PackingEntry> = serde_json::from_str(text)?;
        let mut p = Self::zeros(file.d, g.n())?;
        let idx: HashMap<&str, usize> = g.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        for e in file.entries {
            let v = *idx
                .get(e.vertex.as_str())
                .ok_or_else(|| Error::UnknownVertex(e.vertex.clone()))?;
            p.set(v, CMatrix::from_json(&e.matrix, file.d)?)?;
        }
        Ok(p)
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n() {
            return Err(Error::Dimension(format!(
                "packing has {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingEntry {
    pub vertex: String,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingValue {
    #[serde(serialize_with = "crate::equitable::serialize_ratio")]
    pub value: Ratio,
    /// Rank of each vertex's projector.
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PackingViolation {
    NotProjector { vertex: usize, residual: f64 },
    NonIntegralTrace { vertex: usize, trace: f64 },
    NotOrthogonal { u: usize, v: usize, residual: f64 },
}

/// Value `(1/d) Σ rk(E_g)`, with ranks read off as rounded traces.
pub fn verify_packing(
    g: &Graph,
    pack: &ProjectivePacking,
    tol: f64,
) -> Result<std::result::Result<PackingValue, PackingViolation>> {
    pack.check_graph(g)?;
    let mut ranks = Vec::with_capacity(g.n());
    for (v, e) in pack.assignment.iter().enumerate() {
        let residual = e.projector_residual();
        if residual.is_nan() || residual > tol {
            return Ok(Err(PackingViolation::NotProjector { vertex: v, residual }));
        }
        let trace = e.trace().re;
        let rank = trace.round();
        if trace.is_nan() || (trace - rank).abs() > RANK_TOLERANCE {
            return Ok(Err(PackingViolation::NonIntegralTrace { vertex: v, trace }));
        }
        ranks.push(rank as usize);
    }
    for (u, v) in g.edges() {
        let residual = pack.get(u).mul(pack.get(v)).frobenius();
        if residual.is_nan() || residual > tol {
            return Ok(Err(PackingViolation::NotOrthogonal { u, v, residual }));
        }
    }
    let total: usize = ranks.iter().sum();
    Ok(Ok(PackingValue {
        value: Ratio::new(total as i64, pack.d as i64),
        ranks,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_set_packing() {
        let g = Graph::cycle(6);
        let p = ProjectivePacking::from_independent_set(6, &[0, 2, 4]).unwrap();
        let v = verify_packing(&g, &p, 1e-9).unwrap().unwrap();
        assert_eq!(v.value, Ratio::from_integer(3));
        assert_eq!(v.ranks, vec![1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn zero_packing_has_value_zero() {
        let p = ProjectivePacking::zeros(3, 4).unwrap();
        let v = verify_packing(&Graph::complete(4), &p, 1e-9).unwrap().unwrap();
        assert_eq!(v.value, Ratio::from_integer(0));
    }

    #[test]
    fn violations() {
        let g = Graph::path(2);
        let p = ProjectivePacking::from_independent_set(2, &[0, 1]).unwrap();
        assert!(matches!(
            verify_packing(&g, &p, 1e-9).unwrap(),
            Err(PackingViolation::NotOrthogonal { u: 0, v: 1, .. })
        ));
        let mut p = ProjectivePacking::zeros(1, 2).unwrap();
        p.set(1, CMatrix::identity(1).scale(0.5)).unwrap();
        assert!(matches!(
            verify_packing(&g, &p, 1e-9).unwrap(),
            Err(PackingViolation::NotProjector { vertex: 1, .. })
        ));
        // Projector up to a loose tolerance, trace far from an integer.
        let mut p = ProjectivePacking::zeros(1, 2).unwrap();
        p.set(0, CMatrix::identity(1).scale(0.9)).unwrap();
        assert!(matches!(
            verify_packing(&g, &p, 0.2).unwrap(),
            Err(PackingViolation::NonIntegralTrace { vertex: 0, .. })
        ));
        assert!(verify_packing(&Graph::path(3), &p, 1e-9).is_err());
    }

    #[test]
    fn fractional_value_and_round_trip() {
        // Two orthogonal rank-1 projectors in d = 2 on an edge: value 1.
        let g = Graph::path(2);
        let mut p = ProjectivePacking::zeros(2, 2).unwrap();
        p.set(0, CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        p.set(1, CMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]])).unwrap();
        let v = verify_packing(&g, &p, 1e-12).unwrap().unwrap();
        assert_eq!(v.value, Ratio::from_integer(1));
        let text = p.to_json(&g).unwrap();
        assert_eq!(ProjectivePacking::from_json(&text, &g).unwrap(), p);

        let mut half = ProjectivePacking::zeros(2, 1).unwrap();
        half.set(0, CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        let v = verify_packing(&Graph::empty(1), &half, 1e-12).unwrap().unwrap();
        assert_eq!(v.value, Ratio::new(1, 2));
    }
}

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

//! Quantum strategies for linear binary constraint systems and their
//! reduction to isomorphism certificates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::certificate::QuantumIsoCertificate;
use super::cmatrix::{check_dim, pauli, CMatrix, MatrixJson, OperatorFile};
use super::packing::ProjectivePacking;
use crate::bcs::{bcs_graph, magic_square, LinBcs};
use crate::error::{Error, Result};
use crate::game::bcs_game_predicate;

/// Tolerance for the identities asserted while building the Mermin strategy.
const CONSTRUCTION_TOL: f64 = 1e-12;

/// One projective measurement per constraint, with outcomes indexed like
/// [`crate::bcs::Constraint::satisfying_assignments`].
#[derive(Debug, Clone, PartialEq)]
pub struct BcsQuantumStrategy {
    pub d: usize,
    pub ops: Vec<Vec<CMatrix>>,
}

impl BcsQuantumStrategy {
    pub fn op(&self, l: usize, k: usize) -> &CMatrix {
        &self.ops[l][k]
    }

    pub fn to_json(&self, bcs: &LinBcs) -> Result<String> {
        check_shape(bcs, self)?;
        let mut entries = Vec::new();
        for (l, c) in bcs.constraints().iter().enumerate() {
            for (f, e) in c.satisfying_assignments().iter().zip(&self.ops[l]) {
                if !e.is_zero() {
                    entries.push(StrategyEntry {
                        constraint: l,
                        f: bits(f),
                        matrix: e.to_json(),
                    });
                }
            }
        }
        Ok(serde_json::to_string_pretty(&OperatorFile { d: self.d, entries })?)
    }

    pub fn from_json(text: &str, bcs: &LinBcs) -> Result<Self> {
        let file: OperatorFile<StrategyEntry> = serde_json::from_str(text)?;
        check_dim(file.d)?;
        let positions = assignment_positions(bcs);
        let mut ops: Vec<Vec<CMatrix>> = positions
            .iter()
            .map(|p| vec![CMatrix::zeros(file.d); p.len()])
            .collect();
        for e in file.entries {
            let f = parse_bits(&e.f)
                .ok_or_else(|| Error::Malformed(format!("assignment {:?} is not a bit string", e.f)))?;
            let pos = positions
                .get(e.constraint)
                .ok_or(Error::VertexOutOfRange {
                    index: e.constraint,
                    n: bcs.m(),
                })?
                .get(&f)
                .ok_or_else(|| {
                    Error::Malformed(format!(
                        "{} is not a satisfying assignment of constraint {}",
                        e.f, e.constraint
                    ))
                })?;
            ops[e.constraint][*pos] = CMatrix::from_json(&e.matrix, file.d)?;
        }
        Ok(BcsQuantumStrategy { d: file.d, ops })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyEntry {
    pub constraint: usize,
    pub f: String,
    pub matrix: MatrixJson,
}

fn bits(f: &[bool]) -> String {
    f.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Per constraint, satisfying assignment → its position.
fn assignment_positions(bcs: &LinBcs) -> Vec<HashMap<Vec<bool>, usize>> {
    bcs.constraints()
        .iter()
        .map(|c| {
            c.satisfying_assignments()
                .into_iter()
                .enumerate()
                .map(|(i, f)| (f, i))
                .collect()
        })
        .collect()
}

fn check_shape(bcs: &LinBcs, strat: &BcsQuantumStrategy) -> Result<()> {
    check_dim(strat.d)?;
    if strat.ops.len() != bcs.m() {
        return Err(Error::Dimension(format!(
            "strategy has {} measurements, system has {} constraints",
            strat.ops.len(),
            bcs.m()
        )));
    }
    for (l, c) in bcs.constraints().iter().enumerate() {
        let expected = c.satisfying_assignments().len();
        if strat.ops[l].len() != expected {
            return Err(Error::Dimension(format!(
                "constraint {l} needs {expected} outcomes, strategy has {}",
                strat.ops[l].len()
            )));
        }
        if strat.ops[l].iter().any(|e| e.dim() != strat.d) {
            return Err(Error::Dimension(format!("constraint {l} has an operator of the wrong size")));
        }
    }
    Ok(())
}

/// The nine two-qubit observables of the magic square, row-major.
pub fn mermin_observables() -> Vec<CMatrix> {
    use pauli::{i2, x, y, z};
    vec![
        x().kron(&i2()),
        i2().kron(&x()),
        x().kron(&x()),
        i2().kron(&z()),
        z().kron(&i2()),
        z().kron(&z()),
        x().kron(&z()),
        z().kron(&x()),
        y().kron(&y()),
    ]
}

/// `Π_i (I + (−1)^{f_i} O_i) / 2` over the support of one constraint.
fn joint_projector(observables: &[CMatrix], support: &[usize], f: &[bool]) -> CMatrix {
    let d = observables[0].dim();
    let id = CMatrix::identity(d);
    support.iter().zip(f).fold(id.clone(), |acc, (&i, &fi)| {
        let o = if fi { observables[i].scale(-1.0) } else { observables[i].clone() };
        acc.mul(&id.add(&o).scale(0.5))
    })
}

/// Strategy from ±1 observables, one per variable.
///
/// Panics unless every observable squares to `I`, observables in a common
/// constraint commute, and each constraint's product is `(−1)^{b_l} I`.
pub fn strategy_from_observables(bcs: &LinBcs, observables: &[CMatrix]) -> BcsQuantumStrategy {
    assert_eq!(observables.len(), bcs.n(), "one observable per variable");
    let d = observables[0].dim();
    let id = CMatrix::identity(d);
    for (i, o) in observables.iter().enumerate() {
        assert!(o.mul(o).sub(&id).frobenius() <= CONSTRUCTION_TOL, "O_{i} does not square to I");
        assert!(o.sub(&o.adjoint()).frobenius() <= CONSTRUCTION_TOL, "O_{i} is not Hermitian");
    }
    for (l, c) in bcs.constraints().iter().enumerate() {
        for &i in &c.support {
            for &j in &c.support {
                let comm = observables[i].mul(&observables[j]).sub(&observables[j].mul(&observables[i]));
                assert!(comm.frobenius() <= CONSTRUCTION_TOL, "O_{i} and O_{j} do not commute in constraint {l}");
            }
        }
        let product = c.support.iter().fold(id.clone(), |acc, &i| acc.mul(&observables[i]));
        let sign = if c.rhs { -1.0 } else { 1.0 };
        assert!(
            product.sub(&id.scale(sign)).frobenius() <= CONSTRUCTION_TOL,
            "product over constraint {l} is not {sign} I"
        );
    }
    let ops = bcs
        .constraints()
        .iter()
        .map(|c| {
            c.satisfying_assignments()
                .iter()
                .map(|f| joint_projector(observables, &c.support, f))
                .collect()
        })
        .collect();
    BcsQuantumStrategy { d, ops }
}

/// The `d = 4` perfect strategy for [`magic_square`].
pub fn mermin_bcs_strategy() -> BcsQuantumStrategy {
    strategy_from_observables(&magic_square(), &mermin_observables())
}

/// `d = 1` strategy answering with the restriction of `assignment`.
pub fn classical_bcs_strategy(bcs: &LinBcs, assignment: &[bool]) -> Result<BcsQuantumStrategy> {
    if assignment.len() != bcs.n() {
        return Err(Error::Dimension(format!(
            "assignment has {} values, system has {} variables",
            assignment.len(),
            bcs.n()
        )));
    }
    let ops = bcs
        .constraints()
        .iter()
        .map(|c| {
            let fl = c.restrict(assignment);
            c.satisfying_assignments()
                .iter()
                .map(|f| if *f == fl { CMatrix::identity(1) } else { CMatrix::zeros(1) })
                .collect()
        })
        .collect();
    Ok(BcsQuantumStrategy { d: 1, ops })
}

#[derive(Debug, Clone, Serialize)]
pub struct BcsStrategyReport {
    pub d: usize,
    /// Largest `max(‖E²−E‖, ‖E−E†‖)`.
    pub projector: f64,
    /// Largest `‖Σ_f E_(l,f) − I‖`.
    pub sums: f64,
    /// Largest `‖E_(l,f) E_(l,f')‖` for `f ≠ f'`.
    pub orthogonality: f64,
    /// Largest `|tr(E_(l,f) E_(k,f'))| / d` over losing pairs, i.e. the
    /// largest losing probability on the maximally entangled state.
    pub losing_probability: f64,
    pub ok: bool,
}

pub fn verify_bcs_strategy(bcs: &LinBcs, strat: &BcsQuantumStrategy, tol: f64) -> Result<BcsStrategyReport> {
    check_shape(bcs, strat)?;
    let d = strat.d;
    let id = CMatrix::identity(d);
    let mut projector = 0f64;
    let mut sums = 0f64;
    let mut orthogonality = 0f64;
    for family in &strat.ops {
        for (i, e) in family.iter().enumerate() {
            projector = projector.max(e.projector_residual());
            for f in &family[i + 1..] {
                orthogonality = orthogonality.max(e.mul(f).frobenius());
            }
        }
        let sum = family.iter().fold(CMatrix::zeros(d), |acc, e| acc.add(e));
        sums = sums.max(sum.sub(&id).frobenius());
    }

    let assignments: Vec<Vec<Vec<bool>>> = bcs
        .constraints()
        .iter()
        .map(|c| c.satisfying_assignments())
        .collect();
    let mut losing_probability = 0f64;
    for l in 0..bcs.m() {
        for k in 0..bcs.m() {
            for (fa, ea) in assignments[l].iter().zip(&strat.ops[l]) {
                for (fb, eb) in assignments[k].iter().zip(&strat.ops[k]) {
                    if !bcs_game_predicate(bcs, l, k, fa, fb)? {
                        losing_probability = losing_probability.max(ea.trace_product(eb).norm() / d as f64);
                    }
                }
            }
        }
    }
    Ok(BcsStrategyReport {
        d,
        projector,
        sums,
        orthogonality,
        losing_probability,
        ok: projector <= tol && sums <= tol && orthogonality <= tol && losing_probability <= tol,
    })
}

/// Certificate for `(G_F, G_{F_0})` with
/// `E_((l,f),(k,g)) = [l = k] · E_(l, f ⊕ g)`.
pub fn strategy_to_certificate(bcs: &LinBcs, strat: &BcsQuantumStrategy) -> Result<QuantumIsoCertificate> {
    check_shape(bcs, strat)?;
    let gf = bcs_graph(bcs)?;
    let gf0 = bcs_graph(&bcs.homogenize())?;
    let positions = assignment_positions(bcs);
    let n = gf.graph.n();
    let mut cert = QuantumIsoCertificate::zeros(strat.d, n, gf0.graph.n())?;
    for (u, (l, f)) in gf.vertex_meta.iter().enumerate() {
        for v in gf0.block(*l) {
            let g = &gf0.vertex_meta[v].1;
            let shifted: Vec<bool> = f.iter().zip(g).map(|(a, b)| a ^ b).collect();
            let pos = positions[*l][&shifted];
            cert.set(u, v, strat.ops[*l][pos].clone())?;
        }
    }
    Ok(cert)
}

/// Packing of `G_F` placing `E_(l,f)` on vertex `(l, f)`.
pub fn strategy_to_packing(bcs: &LinBcs, strat: &BcsQuantumStrategy) -> Result<ProjectivePacking> {
    check_shape(bcs, strat)?;
    let mut pack = ProjectivePacking::zeros(strat.d, strat.ops.iter().map(Vec::len).sum())?;
    for (v, e) in strat.ops.iter().flatten().enumerate() {
        pack.set(v, e.clone())?;
    }
    Ok(pack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::{parse_bcs, solve_gf2};

    #[test]
    fn mermin_operators_are_rank_one() {
        let s = mermin_bcs_strategy();
        assert_eq!(s.d, 4);
        assert_eq!(s.ops.len(), 6);
        for family in &s.ops {
            assert_eq!(family.len(), 4);
            for e in family {
                assert!((e.trace().re - 1.0).abs() < 1e-12);
            }
        }
        let r = verify_bcs_strategy(&magic_square(), &s, 1e-12).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn inconsistent_pairs_are_trace_orthogonal() {
        let bcs = magic_square();
        let s = mermin_bcs_strategy();
        let gf = bcs_graph(&bcs).unwrap();
        for (u, v) in gf.graph.edges() {
            let (l, f) = &gf.vertex_meta[u];
            let (k, g) = &gf.vertex_meta[v];
            let pu = assignment_positions(&bcs)[*l][f];
            let pv = assignment_positions(&bcs)[*k][g];
            assert!(s.op(*l, pu).trace_product(s.op(*k, pv)).norm() < 1e-12);
        }
    }

    #[test]
    #[should_panic(expected = "product over constraint")]
    fn wrong_sign_is_caught_at_construction() {
        let mut obs = mermin_observables();
        obs[8] = obs[8].scale(-1.0);
        strategy_from_observables(&magic_square(), &obs);
    }

    #[test]
    fn classical_strategy_of_satisfiable_system() {
        let bcs = magic_square().homogenize();
        let a = solve_gf2(&bcs).unwrap();
        let s = classical_bcs_strategy(&bcs, &a).unwrap();
        assert!(verify_bcs_strategy(&bcs, &s, 1e-12).unwrap().ok);
        // A non-solution loses somewhere.
        let mut bad = a.clone();
        bad[0] = !bad[0];
        let s = classical_bcs_strategy(&bcs, &bad).unwrap();
        assert!(!verify_bcs_strategy(&bcs, &s, 1e-12).unwrap().ok);
    }

    #[test]
    fn identity_replacement_breaks_the_sum() {
        let mut s = mermin_bcs_strategy();
        s.ops[2][1] = CMatrix::identity(4);
        let r = verify_bcs_strategy(&magic_square(), &s, 1e-9).unwrap();
        assert!(!r.ok && r.sums > 1.0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let mut s = mermin_bcs_strategy();
        s.ops.pop();
        assert!(verify_bcs_strategy(&magic_square(), &s, 1e-9).is_err());
        let bcs = parse_bcs("x1 + x2 = 1").unwrap();
        assert!(verify_bcs_strategy(&bcs, &mermin_bcs_strategy(), 1e-9).is_err());
    }

    #[test]
    fn mermin_certificate_block_count() {
        let cert = strategy_to_certificate(&magic_square(), &mermin_bcs_strategy()).unwrap();
        assert_eq!(cert.d(), 4);
        assert_eq!(cert.shape(), (24, 24));
        // Nonzero exactly on same-constraint pairs: 6 blocks of 4 x 4.
        let expected: usize = magic_square()
            .constraints()
            .iter()
            .map(|c| c.satisfying_assignments().len().pow(2))
            .sum();
        assert_eq!(expected, 96);
        assert_eq!(cert.nonzero_blocks(), expected);
    }

    #[test]
    fn classical_certificate_is_the_assignment_permutation() {
        let bcs = parse_bcs("x1 + x2 = 1\nx2 + x3 = 0").unwrap();
        let a = solve_gf2(&bcs).unwrap();
        let cert = strategy_to_certificate(&bcs, &classical_bcs_strategy(&bcs, &a).unwrap()).unwrap();
        let gf = bcs_graph(&bcs).unwrap();
        let gf0 = bcs_graph(&bcs.homogenize()).unwrap();
        let phi = crate::bcs::isomorphism_from_assignment(&bcs, &gf, &gf0, &a);
        for u in 0..gf.graph.n() {
            for v in 0..gf0.graph.n() {
                let expected = if phi.image[u] == v { 1.0 } else { 0.0 };
                assert_eq!(cert.block(u, v).get(0, 0).re, expected);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let bcs = magic_square();
        let s = mermin_bcs_strategy();
        let text = s.to_json(&bcs).unwrap();
        assert_eq!(BcsQuantumStrategy::from_json(&text, &bcs).unwrap(), s);
        let bad = r#"{"d":1,"entries":[{"constraint":0,"f":"111","matrix":[[[1,0]]]}]}"#;
        assert!(BcsQuantumStrategy::from_json(bad, &bcs).is_err());
    }
}

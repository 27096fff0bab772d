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

//! End-to-end quantum reduction report for a linear BCS.

use std::fmt::{self, Write as _};

use serde::Serialize;

use super::bcs_strategy::{
    classical_bcs_strategy, mermin_bcs_strategy, strategy_to_certificate, strategy_to_packing,
    verify_bcs_strategy, BcsQuantumStrategy, BcsStrategyReport,
};
use super::certificate::{certificate_correlation, verify_qiso_certificate, QisoReport, QuantumIsoCertificate};
use super::packing::{verify_packing, PackingViolation};
use crate::bcs::{bcs_graph, classical_reduction_report, magic_square, ClassicalReport, LinBcs};
use crate::equitable::Ratio;
use crate::graph::{cospectral_mates, independence_number, CospectralReport, Graph, IndependentSet};
use crate::error::Result;
use crate::nonsignalling::{verify_nonsignalling, verify_perfect_iso_strategy, Correlation};

/// Largest allowed growth of the worst residual after a file round trip.
pub const ROUND_TRIP_GROWTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategySource {
    /// `d = 1`, from a satisfying assignment.
    Classical,
    /// Built-in `d = 4` magic-square operators.
    Mermin,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationChecks {
    pub tolerance: f64,
    /// First failure of each check, rendered; `None` when it passed.
    pub distribution: Option<String>,
    pub nonsignalling: Option<String>,
    pub perfect: Option<String>,
    /// Restriction to questions in `V(G_F)` wins the homomorphism game.
    pub homomorphism: Option<String>,
    /// Largest `p(h, h | g, g)`; `1/d` for rank-one blocks.
    pub max_diagonal: f64,
}

impl CorrelationChecks {
    pub fn ok(&self) -> bool {
        self.distribution.is_none()
            && self.nonsignalling.is_none()
            && self.perfect.is_none()
            && self.homomorphism.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PackingCheck {
    #[serde(serialize_with = "crate::equitable::serialize_ratio")]
    pub value: Ratio,
    pub m: usize,
    pub violation: Option<PackingViolation>,
}

impl PackingCheck {
    pub fn ok(&self) -> bool {
        self.violation.is_none() && self.value == Ratio::from_integer(self.m as i64)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumReport {
    pub tolerance: f64,
    pub classical: ClassicalReport,
    pub cospectral: CospectralReport,
    pub alpha_homogeneous: IndependentSet,
    pub strategy_source: Option<StrategySource>,
    pub strategy: Option<BcsStrategyReport>,
    pub certificate: Option<QisoReport>,
    pub nonzero_blocks: Option<usize>,
    pub correlation: Option<CorrelationChecks>,
    pub packing: Option<PackingCheck>,
    /// Worst-residual growth after writing and re-reading the certificate.
    pub round_trip_growth: Option<f64>,
    /// Every quantum check passed; `None` without a strategy.
    pub quantum_isomorphic: Option<bool>,
    /// Classical agreement and internal consistency of both certificate forms.
    pub consistent: bool,
    #[serde(skip)]
    pub certificate_data: Option<QuantumIsoCertificate>,
    #[serde(skip)]
    pub graphs: Option<(Graph, Graph)>,
}

/// Picks a strategy: `d = 1` for a satisfiable system, the Mermin operators
/// for the magic square, none otherwise.
pub fn default_strategy(bcs: &LinBcs, classical: &ClassicalReport) -> Result<Option<(StrategySource, BcsQuantumStrategy)>> {
    if let Some(a) = &classical.assignment {
        return Ok(Some((StrategySource::Classical, classical_bcs_strategy(bcs, a)?)));
    }
    if *bcs == magic_square() {
        return Ok(Some((StrategySource::Mermin, mermin_bcs_strategy())));
    }
    Ok(None)
}

fn check_correlation(c: &Correlation<f64>, g: &Graph, h: &Graph) -> Result<CorrelationChecks> {
    let distribution = c.verify_distribution().err().map(|v| format!("{v:?}"));
    let nonsignalling = verify_nonsignalling(c).err().map(|v| format!("{v:?}"));
    let perfect = verify_perfect_iso_strategy(c, g, h)?.err().map(|v| format!("{v:?}"));
    let ng = g.n();
    let mut homomorphism = None;
    let mut max_diagonal = 0f64;
    'outer: for (x_a, x_b, y_a, y_b, p) in c.support() {
        if x_a == x_b && y_a == y_b {
            max_diagonal = max_diagonal.max(*p);
        }
        if x_a >= ng || x_b >= ng || p.abs() <= c.tolerance() {
            continue;
        }
        let lost = y_a < ng
            || y_b < ng
            || (x_a == x_b && y_a != y_b)
            || (g.adjacent(x_a, x_b) && !h.adjacent(y_a - ng, y_b - ng));
        if lost {
            homomorphism = Some(format!(
                "p({}, {} | {}, {}) = {p}",
                c.tokens()[y_a],
                c.tokens()[y_b],
                c.tokens()[x_a],
                c.tokens()[x_b]
            ));
            break 'outer;
        }
    }
    Ok(CorrelationChecks {
        tolerance: c.tolerance(),
        distribution,
        nonsignalling,
        perfect,
        homomorphism,
        max_diagonal,
    })
}

/// Builds both graphs, runs the classical checks, and when a strategy is
/// available verifies the certificate, its correlation (at `10·tol`), the
/// induced packing and a file round trip.
pub fn quantum_reduction_report(bcs: &LinBcs, tol: f64) -> Result<QuantumReport> {
    let classical = classical_reduction_report(bcs)?;
    let gf = bcs_graph(bcs)?.graph;
    let gf0 = bcs_graph(&bcs.homogenize())?.graph;
    let cospectral = cospectral_mates(&gf, &gf0);
    let alpha_homogeneous = independence_number(&gf0)?;

    let mut report = QuantumReport {
        tolerance: tol,
        classical,
        cospectral,
        alpha_homogeneous,
        strategy_source: None,
        strategy: None,
        certificate: None,
        nonzero_blocks: None,
        correlation: None,
        packing: None,
        round_trip_growth: None,
        quantum_isomorphic: None,
        consistent: false,
        certificate_data: None,
        graphs: None,
    };
    let Some((source, strat)) = default_strategy(bcs, &report.classical)? else {
        report.consistent = report.classical.consistent;
        report.graphs = Some((gf, gf0));
        return Ok(report);
    };

    let strategy = verify_bcs_strategy(bcs, &strat, tol)?;
    let cert = strategy_to_certificate(bcs, &strat)?;
    let qiso = verify_qiso_certificate(&gf, &gf0, &cert, tol)?;
    let correlation = certificate_correlation(&gf, &gf0, &cert)?.with_tolerance(10.0 * tol);
    let correlation = check_correlation(&correlation, &gf, &gf0)?;

    let pack = strategy_to_packing(bcs, &strat)?;
    let packing = match verify_packing(&gf, &pack, tol)? {
        Ok(v) => PackingCheck { value: v.value, m: bcs.m(), violation: None },
        Err(v) => PackingCheck { value: Ratio::from_integer(0), m: bcs.m(), violation: Some(v) },
    };

    let reread = QuantumIsoCertificate::from_json(&cert.to_json(&gf, &gf0)?, &gf, &gf0)?;
    let after = verify_qiso_certificate(&gf, &gf0, &reread, tol)?;
    let growth = (after.max_residual() - qiso.max_residual()).max(0.0);

    let quantum_isomorphic = strategy.ok
        && qiso.ok
        && correlation.ok()
        && packing.ok()
        && growth <= ROUND_TRIP_GROWTH;
    report.consistent = report.classical.consistent && qiso.consistent;
    report.strategy_source = Some(source);
    report.strategy = Some(strategy);
    report.nonzero_blocks = Some(cert.nonzero_blocks());
    report.certificate = Some(qiso);
    report.correlation = Some(correlation);
    report.packing = Some(packing);
    report.round_trip_growth = Some(growth);
    report.quantum_isomorphic = Some(quantum_isomorphic);
    report.certificate_data = Some(cert);
    report.graphs = Some((gf, gf0));
    Ok(report)
}

impl QuantumReport {
    /// Every check that was run passed.
    pub fn ok(&self) -> bool {
        self.consistent && self.quantum_isomorphic != Some(false)
    }
}

impl fmt::Display for QuantumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let pass = |o: &Option<String>| o.as_deref().unwrap_or("pass").to_string();
        let mut s = self.classical.to_string();
        let _ = writeln!(s, "alpha(G_F0):              {}", self.alpha_homogeneous.alpha);
        let _ = writeln!(s, "cospectral:               {}", yn(self.cospectral.cospectral));
        let _ = writeln!(s, "complements cospectral:   {}", yn(self.cospectral.complements_cospectral));
        let Some(source) = self.strategy_source else {
            let _ = writeln!(s, "quantum strategy:         none available");
            return f.write_str(&s);
        };
        let _ = writeln!(s, "quantum strategy:         {source:?}");
        if let Some(st) = &self.strategy {
            let _ = writeln!(s, "strategy d:               {}", st.d);
            let _ = writeln!(s, "strategy projector:       {:e}", st.projector);
            let _ = writeln!(s, "strategy sums:            {:e}", st.sums);
            let _ = writeln!(s, "strategy losing prob:     {:e}", st.losing_probability);
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(s, "certificate blocks:       {} nonzero of {}", self.nonzero_blocks.unwrap_or(0), self.classical.vertices.pow(2));
            let _ = writeln!(s, "projector residual:       {:e}", c.projector);
            let _ = writeln!(s, "row sum residual:         {:e}", c.row_sums);
            let _ = writeln!(s, "column sum residual:      {:e}", c.column_sums);
            let _ = writeln!(s, "orthogonality residual:   {:e}", c.orthogonality);
            let _ = writeln!(s, "intertwining residual:    {:e}", c.intertwining);
            let _ = writeln!(s, "unitarity residual:       {:e}", c.unitarity);
            let _ = writeln!(s, "certificate ok:           {}", yn(c.ok));
            let _ = writeln!(s, "forms agree:              {}", yn(c.consistent));
        }
        if let Some(c) = &self.correlation {
            let _ = writeln!(s, "correlation distribution: {}", pass(&c.distribution));
            let _ = writeln!(s, "non-signalling:           {}", pass(&c.nonsignalling));
            let _ = writeln!(s, "perfect iso strategy:     {}", pass(&c.perfect));
            let _ = writeln!(s, "homomorphism restriction: {}", pass(&c.homomorphism));
            let _ = writeln!(s, "max p(h,h|g,g):           {}", c.max_diagonal);
        }
        if let Some(p) = &self.packing {
            let _ = writeln!(s, "packing value:            {} (m = {})", p.value, p.m);
        }
        if let Some(g) = self.round_trip_growth {
            let _ = writeln!(s, "round-trip growth:        {g:e}");
        }
        let _ = writeln!(s, "quantum isomorphic:       {}", yn(self.quantum_isomorphic == Some(true)));
        f.write_str(&s)
    }
}

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

use proptest::prelude::*;
use qiso_core::bcs::{bcs_graph, classical_reduction_report, magic_square, solve_gf2};
use qiso_core::equitable::Ratio;
use qiso_core::generate::{gnp, random_bcs, shuffled};
use qiso_core::graph::{find_isomorphism, independence_number};
use qiso_core::nonsignalling::{verify_nonsignalling, verify_perfect_iso_strategy};
use qiso_core::quantum::{
    certificate_correlation, classical_bcs_strategy, mermin_bcs_strategy, strategy_to_certificate,
    strategy_to_packing, verify_packing, verify_ppm, verify_qiso_certificate, ProjectivePacking,
    QuantumIsoCertificate,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::brute_alpha;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn classical_reduction_agrees(seed: u64, n in 3usize..=10, m in 1usize..=8, planted: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bcs = random_bcs(&mut rng, n, m, 3, planted);
        let r = classical_reduction_report(&bcs).unwrap();
        prop_assert!(r.consistent, "{r:?}");
        prop_assert_eq!(r.satisfiable, solve_gf2(&bcs).is_some());
        prop_assert!(r.alpha.alpha <= m);
        if planted {
            prop_assert!(r.satisfiable && r.graphs_isomorphic);
        }
        if let Some(phi) = &r.assignment_isomorphism {
            let gf = bcs_graph(&bcs).unwrap();
            let gf0 = bcs_graph(&bcs.homogenize()).unwrap();
            prop_assert!(phi.is_isomorphism(&gf.graph, &gf0.graph));
        }
    }

    #[test]
    fn constraint_graph_structure(seed: u64, n in 3usize..=8, m in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bcs = random_bcs(&mut rng, n, m, 3, false);
        let gf = bcs_graph(&bcs).unwrap();
        for l in 0..m {
            let block: Vec<usize> = gf.block(l).collect();
            prop_assert_eq!(block.len(), 4);
            for &u in &block {
                for &v in &block {
                    prop_assert!(u == v || gf.graph.adjacent(u, v));
                }
            }
        }
        prop_assert_eq!(independence_number(&gf.graph).unwrap().alpha, brute_alpha(&gf.graph));

        // Zero assignments of the homogeneous system are pairwise consistent.
        let gf0 = bcs_graph(&bcs.homogenize()).unwrap();
        let zeros: Vec<usize> = (0..m).map(|l| gf0.vertex_index(l, &[false; 3]).unwrap()).collect();
        for &u in &zeros {
            for &v in &zeros {
                prop_assert!(!gf0.graph.adjacent(u, v));
            }
        }
        prop_assert_eq!(independence_number(&gf0.graph).unwrap().alpha, m);
    }

    #[test]
    fn classical_certificates_pass_both_forms(seed: u64, n in 1usize..=9, p in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(&mut rng, n, p);
        let h = shuffled(&mut rng, &g);
        let phi = find_isomorphism(&g, &h).unwrap().unwrap();
        let cert = QuantumIsoCertificate::from_isomorphism(n, n, &phi.image).unwrap();
        let r = verify_qiso_certificate(&g, &h, &cert, 1e-9).unwrap();
        prop_assert!(r.ok && r.consistent);
        let ppm = verify_ppm(&cert.block_rows(), 1e-9).unwrap();
        prop_assert!(ppm.ok && ppm.consistent);
        let c = certificate_correlation(&g, &h, &cert).unwrap().with_tolerance(1e-8);
        prop_assert!(c.verify_distribution().is_ok());
        prop_assert!(verify_nonsignalling(&c).is_ok());
        prop_assert!(verify_perfect_iso_strategy(&c, &g, &h).unwrap().is_ok());
    }

    #[test]
    fn packing_value_is_bounded_by_m(seed: u64, n in 3usize..=8, m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bcs = random_bcs(&mut rng, n, m, 3, true);
        let a = solve_gf2(&bcs).unwrap();
        let strat = classical_bcs_strategy(&bcs, &a).unwrap();
        let gf = bcs_graph(&bcs).unwrap();
        let v = verify_packing(&gf.graph, &strategy_to_packing(&bcs, &strat).unwrap(), 1e-9).unwrap().unwrap();
        prop_assert_eq!(v.value, Ratio::from_integer(m as i64));

        let alpha = independence_number(&gf.graph).unwrap();
        let pack = ProjectivePacking::from_independent_set(gf.graph.n(), &alpha.witness).unwrap();
        let v = verify_packing(&gf.graph, &pack, 1e-9).unwrap().unwrap();
        prop_assert_eq!(v.value, Ratio::from_integer(alpha.alpha as i64));
        prop_assert!(alpha.alpha <= m);
    }
}

#[test]
fn mermin_certificate_survives_a_round_trip() {
    let bcs = magic_square();
    let cert = strategy_to_certificate(&bcs, &mermin_bcs_strategy()).unwrap();
    let gf = bcs_graph(&bcs).unwrap().graph;
    let gf0 = bcs_graph(&bcs.homogenize()).unwrap().graph;
    let before = verify_qiso_certificate(&gf, &gf0, &cert, 1e-9).unwrap();
    let text = cert.to_json(&gf, &gf0).unwrap();
    let reread = QuantumIsoCertificate::from_json(&text, &gf, &gf0).unwrap();
    let after = verify_qiso_certificate(&gf, &gf0, &reread, 1e-9).unwrap();
    assert!(before.ok && after.ok);
    assert!(after.max_residual() - before.max_residual() <= 1e-12);
    assert!(verify_ppm(&reread.block_rows(), 1e-9).unwrap().ok);
}

#[test]
fn mermin_packing_has_value_m() {
    let bcs = magic_square();
    let gf = bcs_graph(&bcs).unwrap().graph;
    let pack = strategy_to_packing(&bcs, &mermin_bcs_strategy()).unwrap();
    let v = verify_packing(&gf, &pack, 1e-9).unwrap().unwrap();
    assert_eq!(v.value, Ratio::from_integer(6));
    assert!(v.ranks.iter().all(|&r| r == 1));
    // Exceeds the classical independence number.
    assert_eq!(independence_number(&gf).unwrap().alpha, 5);
}

#[test]
fn mermin_correlation_diagonal() {
    let bcs = magic_square();
    let cert = strategy_to_certificate(&bcs, &mermin_bcs_strategy()).unwrap();
    let gf = bcs_graph(&bcs).unwrap().graph;
    let gf0 = bcs_graph(&bcs.homogenize()).unwrap().graph;
    let c = certificate_correlation(&gf, &gf0, &cert).unwrap();
    let n = gf.n();
    for g in 0..n {
        for h in 0..n {
            let p = *c.get(g, g, n + h, n + h);
            let expected = cert.block(g, h).trace().re / 4.0;
            assert!((p - expected).abs() < 1e-15);
            assert!(p == 0.0 || (p - 0.25).abs() < 1e-12);
            for h2 in 0..n {
                if h2 != h {
                    assert!(c.get(g, g, n + h, n + h2).abs() < 1e-12);
                }
            }
        }
    }
}

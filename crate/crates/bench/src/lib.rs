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

//! Fixtures for the `oracles` benchmarks.

use qiso_core::bcs::{bcs_graph, magic_square};
use qiso_core::generate::{random_regular, shuffled};
use qiso_core::quantum::{mermin_bcs_strategy, strategy_to_certificate, QuantumIsoCertificate};
use qiso_core::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(G_F, G_F0)` for the magic square.
pub fn magic_pair() -> (Graph, Graph) {
    let bcs = magic_square();
    (
        bcs_graph(&bcs).expect("small supports").graph,
        bcs_graph(&bcs.homogenize()).expect("small supports").graph,
    )
}

/// The `d = 4` certificate for [`magic_pair`].
pub fn mermin_certificate() -> QuantumIsoCertificate {
    strategy_to_certificate(&magic_square(), &mermin_bcs_strategy()).expect("strategy matches the system")
}

/// A random `r`-regular graph and a relabelled copy.
pub fn regular_relabelled(n: usize, r: usize, seed: u64) -> (Graph, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_regular(&mut rng, n, r);
    let h = shuffled(&mut rng, &g);
    (g, h)
}

/// Two independent random `r`-regular graphs on `n` vertices.
pub fn regular_pair(n: usize, r: usize, seed: u64) -> (Graph, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_regular(&mut rng, n, r), random_regular(&mut rng, n, r))
}

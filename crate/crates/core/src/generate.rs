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

//! Seeded random instances: graphs, fractionally isomorphic pairs and
//! linear constraint systems.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::bcs::{Constraint, LinBcs};
use crate::graph::Graph;

/// `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(p))
        .collect::<Vec<_>>();
    Graph::from_index_edges(n, edges).expect("indices are in range")
}

/// Uniform random relabelling of `g`.
pub fn shuffled<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    g.permuted(&perm)
}

/// Edge list as an adjacency matrix, for in-place switching.
struct Adj {
    m: Vec<Vec<bool>>,
}

impl Adj {
    fn new(n: usize) -> Self {
        Adj { m: vec![vec![false; n]; n] }
    }

    fn add(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.m[u][v]);
        self.m[u][v] = true;
        self.m[v][u] = true;
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.m[u][v] = false;
        self.m[v][u] = false;
    }

    fn edges_between(&self, a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &u in a {
            for &v in b {
                if self.m[u][v] && (a != b || u < v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Degree-preserving double-edge switches among edges from `a` to `b`.
    fn switch<R: Rng + ?Sized>(&mut self, rng: &mut R, a: &[usize], b: &[usize], rounds: usize) {
        let same = a == b;
        for _ in 0..rounds {
            let edges = self.edges_between(a, b);
            if edges.len() < 2 {
                return;
            }
            let (u1, v1) = edges[rng.random_range(0..edges.len())];
            let (mut u2, mut v2) = edges[rng.random_range(0..edges.len())];
            if same && rng.random_bool(0.5) {
                std::mem::swap(&mut u2, &mut v2);
            }
            let distinct = u1 != u2 && v1 != v2 && u1 != v2 && u2 != v1;
            if distinct && !self.m[u1][v2] && !self.m[u2][v1] {
                self.remove(u1, v1);
                self.remove(u2, v2);
                self.add(u1, v2);
                self.add(u2, v1);
            }
        }
    }

    fn into_graph(self) -> Graph {
        let n = self.m.len();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Graph::from_adjacency(labels, self.m).expect("symmetric, loop-free")
    }
}

/// Adds a circulant `c`-regular graph on `cell`; needs `c < |cell|` and
/// `c·|cell|` even.
fn circulant_into<R: Rng + ?Sized>(rng: &mut R, adj: &mut Adj, cell: &[usize], c: usize) {
    let n = cell.len();
    assert!(c < n && (c * n).is_multiple_of(2), "no {c}-regular graph on {n} vertices");
    let mut dists: Vec<usize> = (1..=(n - 1) / 2).collect();
    dists.shuffle(rng);
    dists.truncate(c / 2);
    if c % 2 == 1 {
        dists.push(n / 2);
    }
    for i in 0..n {
        for &s in &dists {
            let j = (i + s) % n;
            if !adj.m[cell[i]][cell[j]] {
                adj.add(cell[i], cell[j]);
            }
        }
    }
}

/// Random `r`-regular graph on `n` vertices: a circulant followed by switches.
pub fn random_regular<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> Graph {
    let cell: Vec<usize> = (0..n).collect();
    let mut adj = Adj::new(n);
    circulant_into(rng, &mut adj, &cell, r);
    adj.switch(rng, &cell, &cell, 4 * n * r.max(1));
    adj.into_graph()
}

/// Cell sizes and partition numbers of an equitable partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionParameters {
    pub sizes: Vec<usize>,
    pub c: Vec<Vec<usize>>,
}

impl PartitionParameters {
    /// Random feasible parameters with `k` cells of size `2..=max_size`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize, max_size: usize) -> Self {
        let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(2..=max_size)).collect();
        let mut c = vec![vec![0; k]; k];
        for i in 0..k {
            let n = sizes[i];
            let choices: Vec<usize> = (0..n).filter(|d| (d * n).is_multiple_of(2)).collect();
            c[i][i] = *choices.choose(rng).expect("0 is always feasible");
            for j in i + 1..k {
                let (ni, nj) = (sizes[i], sizes[j]);
                let choices: Vec<usize> = (0..=nj).filter(|d| (ni * d) % nj == 0).collect();
                let cij = *choices.choose(rng).expect("0 is always feasible");
                c[i][j] = cij;
                c[j][i] = ni * cij / nj;
            }
        }
        PartitionParameters { sizes, c }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// A random graph with these parameters on consecutive vertex blocks.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        let mut cells = Vec::new();
        let mut next = 0;
        for &s in &self.sizes {
            cells.push((next..next + s).collect::<Vec<usize>>());
            next += s;
        }
        let mut adj = Adj::new(next);
        let k = self.sizes.len();
        for i in 0..k {
            circulant_into(rng, &mut adj, &cells[i], self.c[i][i]);
            for j in i + 1..k {
                let (ci, cj) = (&cells[i], &cells[j]);
                let cij = self.c[i][j];
                // Edge t joins the (t / c_ij)-th vertex of C_i to the
                // (t mod n_j)-th of C_j.
                for t in 0..ci.len() * cij {
                    adj.add(ci[t / cij], cj[t % cj.len()]);
                }
            }
        }
        for i in 0..k {
            for j in i..k {
                let rounds = 4 * self.sizes[i] * self.sizes[j];
                adj.switch(rng, &cells[i], &cells[j], rounds);
            }
        }
        adj.into_graph()
    }
}

/// Two independently switched realisations of the same parameters, the
/// second one relabelled.
pub fn fractional_pair<R: Rng + ?Sized>(rng: &mut R, params: &PartitionParameters) -> (Graph, Graph) {
    let g = params.realize(rng);
    let h = params.realize(rng);
    let h = shuffled(rng, &h);
    (g, h)
}

/// Random system with `m` constraints on `arity` distinct variables out of
/// `n`. With `satisfiable`, right-hand sides are read off a hidden
/// assignment; otherwise they are uniform.
pub fn random_bcs<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, arity: usize, satisfiable: bool) -> LinBcs {
    assert!(arity >= 1 && arity <= n);
    let hidden: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let vars: Vec<usize> = (0..n).collect();
    let constraints = (0..m)
        .map(|_| {
            let mut support: Vec<usize> = vars.choose_multiple(rng, arity).copied().collect();
            support.sort_unstable();
            let rhs = if satisfiable {
                support.iter().fold(false, |acc, &i| acc ^ hidden[i])
            } else {
                rng.random_bool(0.5)
            };
            Constraint { support, rhs }
        })
        .collect();
    LinBcs::new(n, constraints).expect("supports are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equitable::verify_equitable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regular_graphs_are_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, r) in [(6, 3), (7, 2), (10, 4), (9, 0), (8, 7)] {
            assert_eq!(random_regular(&mut rng, n, r).is_regular(), Some(r));
        }
    }

    #[test]
    fn realisations_have_the_requested_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let k = rng.random_range(1..=3);
            let p = PartitionParameters::random(&mut rng, k, 5);
            let g = p.realize(&mut rng);
            let mut cells = Vec::new();
            let mut next = 0;
            for &s in &p.sizes {
                cells.push((next..next + s).collect::<Vec<usize>>());
                next += s;
            }
            let ep = verify_equitable(&g, &cells).unwrap().unwrap();
            assert_eq!(ep.partition_numbers, p.c);
        }
    }

    #[test]
    fn satisfiable_systems_are_satisfiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = random_bcs(&mut rng, 8, 6, 3, true);
            assert!(crate::bcs::solve_gf2(&b).is_some());
            assert!(b.constraints().iter().all(|c| c.support.len() == 3));
        }
    }
}

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

//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use qiso_core::Graph;

/// Calls `f` on every permutation of `0..n` (Heap's algorithm) until it
/// returns true.
pub fn any_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    if f(&p) {
        return true;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            if f(&p) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let n = g.n();
    any_permutation(n, |p| {
        (0..n).all(|u| (u + 1..n).all(|v| g.adjacent(u, v) == h.adjacent(p[u], p[v])))
    })
}

pub fn brute_alpha(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s & 1 << v == 0 || nbr[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Graph on `n` vertices whose edges are the set bits of `mask` in
/// lexicographic pair order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges = pairs.enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e);
    Graph::from_index_edges(n, edges).unwrap()
}

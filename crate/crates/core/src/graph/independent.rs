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

//! Maximum independent set by branch and bound.

use serde::Serialize;

use super::Graph;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentSet {
    pub alpha: usize,
    /// Vertex indices in increasing order; `witness.len() == alpha`.
    pub witness: Vec<usize>,
}

impl IndependentSet {
    pub fn is_independent_in(&self, g: &Graph) -> bool {
        self.witness.len() == self.alpha
            && self.witness.iter().all(|&v| v < g.n())
            && self.witness.iter().enumerate().all(|(i, &u)| {
                self.witness[i + 1..]
                    .iter()
                    .all(|&v| u != v && !g.adjacent(u, v))
            })
    }
}

/// Independence number with a verified witness.
///
/// Depth-first branch and bound over `u128` vertex masks; the bound at each
/// node is the size of the current set plus the number of cliques in a
/// greedy clique cover of the remaining candidates.
pub fn independence_number(g: &Graph) -> Result<IndependentSet> {
    g.check_oracle_size()?;
    let n = g.n();
    let nbr: Vec<u128> = (0..n)
        .map(|v| g.neighbors(v).fold(0u128, |m, u| m | (1u128 << u)))
        .collect();
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut bb = BranchAndBound {
        nbr: &nbr,
        best: 0,
        best_len: 0,
    };
    bb.expand(all, 0, 0);
    let witness: Vec<usize> = (0..n).filter(|&v| bb.best >> v & 1 == 1).collect();
    let out = IndependentSet {
        alpha: witness.len(),
        witness,
    };
    assert!(out.is_independent_in(g), "witness is not independent");
    Ok(out)
}

struct BranchAndBound<'a> {
    nbr: &'a [u128],
    best: u128,
    best_len: usize,
}

impl BranchAndBound<'_> {
    fn expand(&mut self, cand: u128, chosen: u128, size: usize) {
        if cand == 0 {
            if size > self.best_len {
                self.best = chosen;
                self.best_len = size;
            }
            return;
        }
        if size + self.clique_cover(cand) <= self.best_len {
            return;
        }
        // Branch on the candidate with most neighbours among the candidates;
        // low-degree vertices are taken in the include branch first anyway.
        let v = iter_bits(cand)
            .max_by_key(|&v| ((self.nbr[v] & cand).count_ones(), std::cmp::Reverse(v)))
            .expect("cand is nonempty");
        let bit = 1u128 << v;
        self.expand(cand & !bit & !self.nbr[v], chosen | bit, size + 1);
        self.expand(cand & !bit, chosen, size);
    }

    fn clique_cover(&self, mut rest: u128) -> usize {
        let mut cliques = 0;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= !(1u128 << u);
            let mut grow = rest & self.nbr[u];
            while grow != 0 {
                let w = grow.trailing_zeros() as usize;
                rest &= !(1u128 << w);
                grow &= self.nbr[w] & !(1u128 << w);
            }
            cliques += 1;
        }
        cliques
    }
}

fn iter_bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graphs() {
        for n in 1..8 {
            assert_eq!(independence_number(&Graph::complete(n)).unwrap().alpha, 1);
        }
    }

    #[test]
    fn c5_has_alpha_two() {
        let s = independence_number(&Graph::cycle(5)).unwrap();
        assert_eq!(s.alpha, 2);
        assert!(s.is_independent_in(&Graph::cycle(5)));
    }

    #[test]
    fn empty_and_star() {
        assert_eq!(independence_number(&Graph::empty(7)).unwrap().alpha, 7);
        assert_eq!(independence_number(&Graph::star(5)).unwrap().alpha, 5);
    }

    #[test]
    fn full_width_masks() {
        let g = Graph::empty(128);
        assert_eq!(independence_number(&g).unwrap().alpha, 128);
        assert!(independence_number(&Graph::empty(129)).is_err());
    }
}

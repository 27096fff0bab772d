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

//! Exact isomorphism search by individualisation and refinement.

use serde::Serialize;

use super::refine::refine;
use super::{disjoint_union, Graph};
use crate::error::Result;
use crate::game::rel;

/// A map from the vertices of one graph to those of another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexMap {
    /// `image[v]` is the codomain vertex assigned to domain vertex `v`.
    pub image: Vec<usize>,
}

impl VertexMap {
    pub fn new(image: Vec<usize>) -> Self {
        VertexMap { image }
    }

    pub fn is_bijection(&self, codomain_size: usize) -> bool {
        if self.image.len() != codomain_size {
            return false;
        }
        let mut hit = vec![false; codomain_size];
        self.image
            .iter()
            .all(|&w| w < codomain_size && !std::mem::replace(&mut hit[w], true))
    }

    /// True iff this is a bijection with `rel(g, g') = rel(φ(g), φ(g'))` for all pairs.
    pub fn is_isomorphism(&self, g: &Graph, h: &Graph) -> bool {
        g.n() == self.image.len()
            && self.is_bijection(h.n())
            && (0..g.n()).all(|a| {
                (0..g.n()).all(|b| {
                    rel(g, a, b).ok() == rel(h, self.image[a], self.image[b]).ok()
                })
            })
    }

    pub fn inverse(&self) -> VertexMap {
        let mut inv = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            inv[w] = v;
        }
        VertexMap { image: inv }
    }

    /// `(domain label, codomain label)` pairs in domain order.
    pub fn label_pairs<'a>(&self, g: &'a Graph, h: &'a Graph) -> Vec<(&'a str, &'a str)> {
        self.image
            .iter()
            .enumerate()
            .map(|(v, &w)| (g.label(v), h.label(w)))
            .collect()
    }
}

/// Finds an isomorphism `g -> h` or proves that none exists.
///
/// Search runs on the disjoint union so that refined colours are shared by
/// both sides. At each node the smallest non-singleton colour class is
/// split: its first `g`-vertex (in label order) is individualised together
/// with each `h`-vertex of that class in turn (also in label order). A
/// branch dies as soon as some colour has unequal counts on the two sides.
/// Any map found is re-verified before it is returned.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<VertexMap>> {
    g.check_oracle_size()?;
    h.check_oracle_size()?;
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let union = disjoint_union(g, h);
    let ng = g.n();
    let mut label_order_g: Vec<usize> = (0..ng).collect();
    label_order_g.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut label_order_h: Vec<usize> = (0..h.n()).collect();
    label_order_h.sort_by(|&a, &b| h.label(a).cmp(h.label(b)));

    let search = Search {
        union: &union.graph,
        ng,
        order_g: &label_order_g,
        order_h: &label_order_h,
    };
    let found = search.run(vec![0; union.graph.n()]);
    let found = found.map(VertexMap::new);
    if let Some(m) = &found {
        assert!(m.is_isomorphism(g, h), "search produced an invalid isomorphism");
    }
    Ok(found)
}

struct Search<'a> {
    union: &'a Graph,
    ng: usize,
    order_g: &'a [usize],
    order_h: &'a [usize],
}

impl Search<'_> {
    fn run(&self, colors: Vec<u32>) -> Option<Vec<usize>> {
        let colors = refine(self.union, &colors);
        let k = colors.iter().max().map_or(0, |&m| m as usize + 1);
        let mut count_g = vec![0usize; k];
        let mut count_h = vec![0usize; k];
        for (v, &c) in colors.iter().enumerate() {
            if v < self.ng {
                count_g[c as usize] += 1;
            } else {
                count_h[c as usize] += 1;
            }
        }
        if count_g != count_h {
            return None;
        }
        if k == self.ng {
            let mut by_color = vec![0usize; k];
            for v in self.ng..colors.len() {
                by_color[colors[v] as usize] = v - self.ng;
            }
            return Some((0..self.ng).map(|v| by_color[colors[v] as usize]).collect());
        }

        let target = (0..k)
            .filter(|&c| count_g[c] > 1)
            .min_by_key(|&c| (count_g[c], c))
            .expect("non-discrete colouring has a non-singleton class") as u32;
        let v = *self
            .order_g
            .iter()
            .find(|&&v| colors[v] == target)
            .expect("class is nonempty on the g side");
        let fresh = k as u32;
        for &w in self.order_h {
            if colors[self.ng + w] != target {
                continue;
            }
            let mut next = colors.clone();
            next[v] = fresh;
            next[self.ng + w] = fresh;
            if let Some(m) = self.run(next) {
                return Some(m);
            }
        }
        None
    }
}

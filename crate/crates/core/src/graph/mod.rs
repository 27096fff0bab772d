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

//! Simple undirected graphs with labelled vertices.
//!
//! [`Graph`] is an immutable value: a list of distinct labels and a
//! symmetric, loopless boolean adjacency matrix. The exact oracles that work
//! on it live in the submodules.

mod charpoly;
mod independent;
mod io;
mod iso;
pub(crate) mod refine;

pub use charpoly::{char_poly, cospectral_mates, CharPoly, CospectralReport};
pub use independent::{independence_number, IndependentSet};
pub use io::{parse_graph, write_graph};
pub use iso::{find_isomorphism, VertexMap};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Largest vertex count accepted by the exponential oracles.
pub const MAX_ORACLE_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    /// Builds a graph from labels and an edge list over vertex indices.
    ///
    /// Duplicate edges are rejected, as are self-loops and repeated labels.
    pub fn from_edges<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Malformed(format!("duplicate label {l:?}")));
            }
        }
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { index: w, n });
                }
            }
            if u == v {
                return Err(Error::Malformed(format!("self-loop at {}", labels[u])));
            }
            if adj[u][v] {
                return Err(Error::Malformed(format!(
                    "duplicate edge {} {}",
                    labels[u], labels[v]
                )));
            }
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Ok(Graph { labels, adj })
    }

    /// Graph on vertices `0..n` labelled by their index.
    pub fn from_index_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges((0..n).map(|i| i.to_string()), edges)
    }

    /// Builds a graph from a full adjacency matrix, checking symmetry and looplessness.
    pub fn from_adjacency(labels: Vec<String>, adj: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if adj.len() != n || adj.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "adjacency must be {n}x{n} to match the labels"
            )));
        }
        for i in 0..n {
            if adj[i][i] {
                return Err(Error::Malformed(format!("self-loop at {}", labels[i])));
            }
            for j in 0..i {
                if adj[i][j] != adj[j][i] {
                    return Err(Error::Malformed("adjacency is not symmetric".into()));
                }
            }
        }
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| adj[i][j])
            .collect();
        Self::from_edges(labels, edges)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_index_edges(n, []).expect("empty graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::from_index_edges(n, edges).expect("complete graph is valid")
    }

    /// Cycle `C_n`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_index_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        Self::from_index_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        Self::from_index_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is valid")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adj
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &a)| a.then_some(u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adj[i][j])
            .collect()
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = (self.n() > 0).then(|| self.degree(0))?;
        (1..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Flips every off-diagonal entry; labels are kept.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|i| (0..n).map(|j| i != j && !self.adj[i][j]).collect())
            .collect();
        Graph {
            labels: self.labels.clone(),
            adj,
        }
    }

    /// Relabels vertex `v` as `perm[v]`-th vertex of the result; labels travel with vertices.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        let mut adj = vec![vec![false; n]; n];
        for u in 0..n {
            labels[perm[u]] = self.labels[u].clone();
            for v in 0..n {
                adj[perm[u]][perm[v]] = self.adj[u][v];
            }
        }
        Graph { labels, adj }
    }

    /// Copy of the graph with every label prefixed by `prefix`.
    pub fn with_label_prefix(&self, prefix: &str) -> Graph {
        Graph {
            labels: self.labels.iter().map(|l| format!("{prefix}{l}")).collect(),
            adj: self.adj.clone(),
        }
    }

    pub(crate) fn check_oracle_size(&self) -> Result<()> {
        if self.n() > MAX_ORACLE_VERTICES {
            return Err(Error::SizeLimit {
                what: "graph",
                size: self.n(),
                limit: MAX_ORACLE_VERTICES,
            });
        }
        Ok(())
    }
}

/// Tag prepended to the labels of the first operand of [`disjoint_union`].
pub const LEFT_TAG: &str = "G:";
/// Tag prepended to the labels of the second operand of [`disjoint_union`].
pub const RIGHT_TAG: &str = "H:";

/// The union of two graphs, with index offsets for each part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointUnion {
    pub graph: Graph,
    /// `offsets[0] = 0`, `offsets[1] = |V(g)|`.
    pub offsets: [usize; 2],
}

/// `g` followed by `h`, no cross edges. Labels are prefixed with
/// [`LEFT_TAG`] / [`RIGHT_TAG`] so the two parts never collide.
pub fn disjoint_union(g: &Graph, h: &Graph) -> DisjointUnion {
    let (ng, nh) = (g.n(), h.n());
    let n = ng + nh;
    let mut labels = Vec::with_capacity(n);
    labels.extend(g.labels.iter().map(|l| format!("{LEFT_TAG}{l}")));
    labels.extend(h.labels.iter().map(|l| format!("{RIGHT_TAG}{l}")));
    let mut adj = vec![vec![false; n]; n];
    for i in 0..ng {
        adj[i][..ng].copy_from_slice(&g.adj[i]);
    }
    for i in 0..nh {
        adj[ng + i][ng..].copy_from_slice(&h.adj[i]);
    }
    DisjointUnion {
        graph: Graph { labels, adj },
        offsets: [0, ng],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_triangle_is_empty() {
        let c = Graph::complete(3).complement();
        assert_eq!(c.edge_count(), 0);
        assert_eq!(c.labels(), Graph::complete(3).labels());
    }

    #[test]
    fn complement_is_an_involution() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.complement().complement(), c5);
    }

    #[test]
    fn complement_of_c5_is_isomorphic_to_c5() {
        let c5 = Graph::cycle(5);
        let map = find_isomorphism(&c5, &c5.complement()).unwrap();
        assert!(map.is_some());
    }

    #[test]
    fn union_counts() {
        let u = disjoint_union(&Graph::complete(1), &Graph::complete(1));
        assert_eq!((u.graph.n(), u.graph.edge_count()), (2, 0));
        let u = disjoint_union(&Graph::complete(3), &Graph::complete(3));
        assert_eq!((u.graph.n(), u.graph.edge_count()), (6, 6));
        assert_eq!(u.offsets, [0, 3]);
        let two_k3 = disjoint_union(&Graph::complete(3), &Graph::complete(3)).graph;
        let u = disjoint_union(&Graph::cycle(6), &two_k3);
        assert_eq!((u.graph.n(), u.graph.edge_count()), (12, 12));
    }

    #[test]
    fn union_has_no_cross_edges_and_distinct_labels() {
        let u = disjoint_union(&Graph::complete(2), &Graph::complete(2));
        assert!(!u.graph.adjacent(0, 2));
        assert_eq!(u.graph.labels(), ["G:0", "G:1", "H:0", "H:1"]);
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::from_index_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_index_edges(2, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(["a", "a"], []).is_err());
    }
}

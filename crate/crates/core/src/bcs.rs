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

//! Linear binary constraint systems over GF(2) and their constraint graphs.
//!
//! For a system `F` the graph `G_F` has one vertex `(l, f)` per constraint
//! `l` and satisfying assignment `f` of that constraint, and an edge between
//! two vertices whose assignments disagree on a shared variable. `G_F` and
//! the graph of the homogenised system are isomorphic exactly when `F` is
//! satisfiable; [`classical_reduction_report`] checks all three facets of
//! that statement independently.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{find_isomorphism, independence_number, Graph, IndependentSet, VertexMap};

/// Largest constraint support accepted by [`bcs_graph`].
pub const MAX_SUPPORT: usize = 20;

/// One parity constraint `Σ_{i ∈ support} x_i = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Constraint {
    /// Sorted, distinct variable indices.
    pub support: Vec<usize>,
    pub rhs: bool,
}

impl Constraint {
    /// `f` is aligned with `support`.
    pub fn is_satisfied_by(&self, f: &[bool]) -> bool {
        f.len() == self.support.len() && f.iter().fold(false, |acc, &b| acc ^ b) == self.rhs
    }

    /// True iff `f` (on this support) and `g` (on `other`'s support) agree on
    /// every shared variable.
    pub fn agrees_with(&self, f: &[bool], other: &Constraint, g: &[bool]) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if f[i] != g[j] {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        true
    }

    /// Satisfying assignments in lexicographic order of their bit strings
    /// (first support variable most significant).
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        let s = self.support.len();
        (0u64..1 << s)
            .map(|mask| (0..s).map(|i| mask >> (s - 1 - i) & 1 == 1).collect::<Vec<bool>>())
            .filter(|f| self.is_satisfied_by(f))
            .collect()
    }

    pub fn restrict(&self, assignment: &[bool]) -> Vec<bool> {
        self.support.iter().map(|&v| assignment[v]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LinBcs {
    /// Variable `i` is printed as `x{names[i]}`.
    names: Vec<u32>,
    constraints: Vec<Constraint>,
}

impl LinBcs {
    /// Variables are named `x1..xn`.
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        Self::with_names((1..=n as u32).collect(), constraints)
    }

    pub fn with_names(names: Vec<u32>, constraints: Vec<Constraint>) -> Result<Self> {
        let n = names.len();
        if constraints.is_empty() {
            return Err(Error::Malformed("a system needs at least one constraint".into()));
        }
        for (l, c) in constraints.iter().enumerate() {
            if c.support.is_empty() {
                return Err(Error::Malformed(format!("constraint {l} has empty support")));
            }
            if c.support.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(format!(
                    "constraint {l} support must be sorted and distinct"
                )));
            }
            if let Some(&v) = c.support.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { index: v, n });
            }
        }
        Ok(LinBcs { names, constraints })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, l: usize) -> Result<&Constraint> {
        self.constraints.get(l).ok_or(Error::VertexOutOfRange {
            index: l,
            n: self.m(),
        })
    }

    pub fn variable_name(&self, i: usize) -> String {
        format!("x{}", self.names[i])
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n()
            && self
                .constraints
                .iter()
                .all(|c| c.is_satisfied_by(&c.restrict(assignment)))
    }

    /// Same supports, every right-hand side set to 0.
    pub fn homogenize(&self) -> LinBcs {
        LinBcs {
            names: self.names.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    support: c.support.clone(),
                    rhs: false,
                })
                .collect(),
        }
    }
}

impl fmt::Display for LinBcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            let lhs: Vec<String> = c.support.iter().map(|&v| self.variable_name(v)).collect();
            writeln!(f, "{} = {}", lhs.join(" + "), u8::from(c.rhs))?;
        }
        Ok(())
    }
}

pub fn homogenize(bcs: &LinBcs) -> LinBcs {
    bcs.homogenize()
}

/// Parses one constraint per line, `x<i> + x<j> + ... = <0|1>`, with `#`
/// comments. Variables are numbered by their numeric suffix.
pub fn parse_bcs(text: &str) -> Result<LinBcs> {
    let mut raw: Vec<(usize, Vec<u32>, bool)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, "expected `<sum> = <0|1>`"))?;
        let rhs = match rhs.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(line_no, format!("rhs must be 0 or 1, got {other:?}"))),
        };
        if lhs.trim().is_empty() {
            return Err(Error::parse(line_no, "empty support"));
        }
        let mut vars = Vec::new();
        for term in lhs.split('+') {
            let term = term.trim();
            let idx = term
                .strip_prefix('x')
                .and_then(|d| (!d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())).then_some(d))
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| Error::parse(line_no, format!("malformed term {term:?}")))?;
            if vars.contains(&idx) {
                return Err(Error::parse(line_no, format!("variable x{idx} repeated")));
            }
            vars.push(idx);
        }
        raw.push((line_no, vars, rhs));
    }
    if raw.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "no constraints"));
    }
    let index: BTreeMap<u32, usize> = {
        let mut names: Vec<u32> = raw.iter().flat_map(|r| r.1.iter().copied()).collect();
        names.sort_unstable();
        names.dedup();
        names.into_iter().enumerate().map(|(i, v)| (v, i)).collect()
    };
    let constraints = raw
        .into_iter()
        .map(|(_, vars, rhs)| {
            let mut support: Vec<usize> = vars.iter().map(|v| index[v]).collect();
            support.sort_unstable();
            Constraint { support, rhs }
        })
        .collect();
    LinBcs::with_names(index.keys().copied().collect(), constraints)
}

/// The 3x3 magic-square system: rows, then columns, only the last column odd.
pub fn magic_square() -> LinBcs {
    let c = |s: [usize; 3], rhs: bool| Constraint {
        support: s.to_vec(),
        rhs,
    };
    LinBcs::new(
        9,
        vec![
            c([0, 1, 2], false),
            c([3, 4, 5], false),
            c([6, 7, 8], false),
            c([0, 3, 6], false),
            c([1, 4, 7], false),
            c([2, 5, 8], true),
        ],
    )
    .expect("magic square is well formed")
}

/// Gaussian elimination over GF(2). Free variables are set to 0 and the
/// returned assignment is checked against every constraint.
pub fn solve_gf2(bcs: &LinBcs) -> Option<Vec<bool>> {
    let n = bcs.n();
    let words = (n + 1).div_ceil(64);
    let rhs_bit = n;
    let mut rows: Vec<Vec<u64>> = bcs
        .constraints()
        .iter()
        .map(|c| {
            let mut r = vec![0u64; words];
            for &v in &c.support {
                r[v / 64] |= 1 << (v % 64);
            }
            if c.rhs {
                r[rhs_bit / 64] |= 1 << (rhs_bit % 64);
            }
            r
        })
        .collect();
    let bit = |r: &[u64], i: usize| r[i / 64] >> (i % 64) & 1 == 1;

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for col in 0..n {
        let Some(p) = (next..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(next, p);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && bit(row, col) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    if rows[next..].iter().any(|r| bit(r, rhs_bit)) {
        return None;
    }
    let mut x = vec![false; n];
    for (r, col) in pivots {
        x[col] = bit(&rows[r], rhs_bit);
    }
    assert!(bcs.is_satisfied_by(&x), "elimination produced a non-solution");
    Some(x)
}

/// `G_F` together with the `(l, f)` pair behind each vertex.
#[derive(Debug, Clone)]
pub struct BcsGraph {
    pub graph: Graph,
    /// `(constraint, assignment aligned with its support)` per vertex.
    pub vertex_meta: Vec<(usize, Vec<bool>)>,
    index: HashMap<(usize, Vec<bool>), usize>,
}

impl BcsGraph {
    pub fn vertex_index(&self, l: usize, f: &[bool]) -> Option<usize> {
        self.index.get(&(l, f.to_vec())).copied()
    }

    /// Vertices belonging to constraint `l`, in enumeration order.
    pub fn block(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertex_meta
            .iter()
            .enumerate()
            .filter(move |(_, (c, _))| *c == l)
            .map(|(v, _)| v)
    }
}

pub fn vertex_label(l: usize, f: &[bool]) -> String {
    let mut s = format!("c{l}:");
    for &b in f {
        s.push(if b { '1' } else { '0' });
    }
    s
}

/// Parses a `c<l>:<bits>` label.
pub fn parse_vertex_label(label: &str) -> Option<(usize, Vec<bool>)> {
    let (l, bits) = label.strip_prefix('c')?.split_once(':')?;
    let l = l.parse().ok()?;
    let f = bits
        .chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect::<Option<Vec<bool>>>()?;
    Some((l, f))
}

pub fn bcs_graph(bcs: &LinBcs) -> Result<BcsGraph> {
    if let Some(c) = bcs.constraints().iter().find(|c| c.support.len() > MAX_SUPPORT) {
        return Err(Error::SizeLimit {
            what: "constraint support",
            size: c.support.len(),
            limit: MAX_SUPPORT,
        });
    }
    let vertex_meta: Vec<(usize, Vec<bool>)> = bcs
        .constraints()
        .iter()
        .enumerate()
        .flat_map(|(l, c)| c.satisfying_assignments().into_iter().map(move |f| (l, f)))
        .collect();
    let nv = vertex_meta.len();
    let mut edges = Vec::new();
    for u in 0..nv {
        for v in u + 1..nv {
            let (l, f) = &vertex_meta[u];
            let (k, g) = &vertex_meta[v];
            let (cl, ck) = (&bcs.constraints()[*l], &bcs.constraints()[*k]);
            if !cl.agrees_with(f, ck, g) {
                edges.push((u, v));
            }
        }
    }
    let labels: Vec<String> = vertex_meta.iter().map(|(l, f)| vertex_label(*l, f)).collect();
    let graph = Graph::from_edges(labels, edges)?;
    let index = vertex_meta
        .iter()
        .cloned()
        .enumerate()
        .map(|(v, key)| (key, v))
        .collect();
    Ok(BcsGraph {
        graph,
        vertex_meta,
        index,
    })
}

/// `φ(l, f) = (l, f ⊕ F_l)` from `G_F` to `G_{F_0}` for a satisfying assignment `F`.
pub fn isomorphism_from_assignment(
    bcs: &LinBcs,
    gf: &BcsGraph,
    gf0: &BcsGraph,
    assignment: &[bool],
) -> VertexMap {
    let image = gf
        .vertex_meta
        .iter()
        .map(|(l, f)| {
            let fl = bcs.constraints()[*l].restrict(assignment);
            let shifted: Vec<bool> = f.iter().zip(&fl).map(|(a, b)| a ^ b).collect();
            gf0.vertex_index(*l, &shifted)
                .expect("f xor F_l satisfies the homogeneous constraint")
        })
        .collect();
    VertexMap::new(image)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalReport {
    pub m: usize,
    pub vertices: usize,
    pub satisfiable: bool,
    pub assignment: Option<Vec<bool>>,
    pub graphs_isomorphic: bool,
    pub isomorphism: Option<VertexMap>,
    /// Isomorphism built from the satisfying assignment, when there is one.
    pub assignment_isomorphism: Option<VertexMap>,
    pub alpha: IndependentSet,
    pub alpha_equals_m: bool,
    /// All three booleans agree and every witness checked out.
    pub consistent: bool,
}

impl fmt::Display for ClassicalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut s = String::new();
        writeln!(s, "constraints (m):          {}", self.m).unwrap();
        writeln!(s, "vertices per graph:       {}", self.vertices).unwrap();
        writeln!(s, "satisfiable:              {}", yn(self.satisfiable)).unwrap();
        writeln!(s, "G_F ~ G_F0 (exhaustive):  {}", yn(self.graphs_isomorphic)).unwrap();
        writeln!(s, "alpha(G_F):               {}", self.alpha.alpha).unwrap();
        writeln!(s, "alpha(G_F) = m:           {}", yn(self.alpha_equals_m)).unwrap();
        writeln!(s, "three-way agreement:      {}", yn(self.consistent)).unwrap();
        f.write_str(&s)
    }
}

/// Computes satisfiability, isomorphism of `G_F` and `G_{F_0}`, and
/// `α(G_F) = m` independently and records whether they agree.
pub fn classical_reduction_report(bcs: &LinBcs) -> Result<ClassicalReport> {
    let f0 = bcs.homogenize();
    let gf = bcs_graph(bcs)?;
    let gf0 = bcs_graph(&f0)?;
    let assignment = solve_gf2(bcs);
    let isomorphism = find_isomorphism(&gf.graph, &gf0.graph)?;
    let alpha = independence_number(&gf.graph)?;
    let m = bcs.m();

    let assignment_isomorphism = assignment
        .as_deref()
        .map(|a| isomorphism_from_assignment(bcs, &gf, &gf0, a));
    let witnesses_ok = assignment_isomorphism
        .as_ref()
        .is_none_or(|phi| phi.is_isomorphism(&gf.graph, &gf0.graph))
        && isomorphism
            .as_ref()
            .is_none_or(|phi| phi.is_isomorphism(&gf.graph, &gf0.graph))
        && alpha.is_independent_in(&gf.graph);

    let satisfiable = assignment.is_some();
    let graphs_isomorphic = isomorphism.is_some();
    let alpha_equals_m = alpha.alpha == m;
    Ok(ClassicalReport {
        m,
        vertices: gf.graph.n(),
        satisfiable,
        assignment,
        graphs_isomorphic,
        isomorphism,
        assignment_isomorphism,
        consistent: witnesses_ok
            && satisfiable == graphs_isomorphic
            && graphs_isomorphic == alpha_equals_m,
        alpha,
        alpha_equals_m,
    })
}

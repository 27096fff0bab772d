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

//! Equitable partitions, colour refinement and fractional isomorphism.
//!
//! A YES answer from [`fractional_iso`] always carries a doubly stochastic
//! matrix `D` with `A_G D = D A_H`, checked in exact rational arithmetic. A
//! NO answer means colour refinement of the disjoint union produced a colour
//! class with different sizes on the two sides.

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::refine::refine;
use crate::graph::{disjoint_union, Graph};

pub type Ratio = Rational64;

/// A partition of `V(G)` with its partition numbers: every vertex of
/// `cells[i]` has exactly `partition_numbers[i][j]` neighbours in `cells[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitablePartition {
    pub cells: Vec<Vec<usize>>,
    pub partition_numbers: Vec<Vec<usize>>,
}

impl EquitablePartition {
    pub fn k(&self) -> usize {
        self.cells.len()
    }
}

/// The first place a candidate partition fails to be equitable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitableViolation {
    pub vertex: usize,
    pub cell: usize,
    pub expected: usize,
    pub found: usize,
}

/// Checks equitability of `cells` and returns the partition numbers.
///
/// The outer `Err` is for input that is not a partition of `V(g)`; the inner
/// `Err` names the first vertex whose neighbour count into some cell differs
/// from that of the first vertex of its own cell.
pub fn verify_equitable(
    g: &Graph,
    cells: &[Vec<usize>],
) -> Result<std::result::Result<EquitablePartition, EquitableViolation>> {
    let n = g.n();
    let mut cell_of = vec![usize::MAX; n];
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::NotAPartition(format!("cell {i} is empty")));
        }
        for &v in cell {
            if v >= n {
                return Err(Error::VertexOutOfRange { index: v, n });
            }
            if cell_of[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} appears twice")));
            }
            cell_of[v] = i;
        }
    }
    if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} is not covered")));
    }

    let k = cells.len();
    let counts = |v: usize| {
        let mut row = vec![0usize; k];
        for u in g.neighbors(v) {
            row[cell_of[u]] += 1;
        }
        row
    };
    let mut numbers = Vec::with_capacity(k);
    for cell in cells {
        let reference = counts(cell[0]);
        for &v in &cell[1..] {
            let row = counts(v);
            if let Some(j) = (0..k).find(|&j| row[j] != reference[j]) {
                return Ok(Err(EquitableViolation {
                    vertex: v,
                    cell: j,
                    expected: reference[j],
                    found: row[j],
                }));
            }
        }
        numbers.push(reference);
    }
    Ok(Ok(EquitablePartition {
        cells: cells.to_vec(),
        partition_numbers: numbers,
    }))
}

fn cells_from_colors(colors: &[u32], range: std::ops::Range<usize>, k: usize) -> Vec<Vec<usize>> {
    let offset = range.start;
    let mut cells = vec![Vec::new(); k];
    for v in range {
        cells[colors[v] as usize].push(v - offset);
    }
    cells
}

/// Coarsest equitable partition, cells ordered by refined colour.
pub fn color_refinement(g: &Graph) -> EquitablePartition {
    let colors = refine(g, &vec![0; g.n()]);
    let k = colors.iter().max().map_or(0, |&m| m as usize + 1);
    let cells = cells_from_colors(&colors, 0..g.n(), k);
    verify_equitable(g, &cells)
        .expect("refinement yields a partition")
        .expect("stable colouring is equitable")
}

/// Aligned equitable partitions of `G` and `H` with shared partition numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonEquitablePartition {
    pub cells_g: Vec<Vec<usize>>,
    pub cells_h: Vec<Vec<usize>>,
    /// `sizes[i] = |C_i| = |D_i|`.
    pub sizes: Vec<usize>,
    /// Shared partition numbers `c[i][j]`.
    pub c: Vec<Vec<usize>>,
    /// Non-neighbour counts `n_j - c[i][j] - δ_ij`.
    pub cbar: Vec<Vec<usize>>,
}

impl CommonEquitablePartition {
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Cell index of every vertex of `G` and of `H`.
    pub fn cell_maps(&self, ng: usize, nh: usize) -> (Vec<usize>, Vec<usize>) {
        let mut cg = vec![usize::MAX; ng];
        let mut ch = vec![usize::MAX; nh];
        for (i, cell) in self.cells_g.iter().enumerate() {
            cell.iter().for_each(|&v| cg[v] = i);
        }
        for (i, cell) in self.cells_h.iter().enumerate() {
            cell.iter().for_each(|&v| ch[v] = i);
        }
        (cg, ch)
    }

    /// Re-checks both sides independently against this structure.
    pub fn verify(&self, g: &Graph, h: &Graph) -> Result<bool> {
        let k = self.k();
        if self.cells_g.len() != k || self.cells_h.len() != k {
            return Ok(false);
        }
        for (cells, graph) in [(&self.cells_g, g), (&self.cells_h, h)] {
            match verify_equitable(graph, cells)? {
                Ok(ep) if ep.partition_numbers == self.c => {}
                _ => return Ok(false),
            }
            if cells.iter().map(Vec::len).ne(self.sizes.iter().copied()) {
                return Ok(false);
            }
        }
        Ok((0..k).all(|i| {
            (0..k).all(|j| self.cbar[i][j] + self.c[i][j] + usize::from(i == j) == self.sizes[j])
        }))
    }
}

/// Runs colour refinement on `G ⊎ H` and aligns colour classes across the
/// two sides; `None` iff some class has unequal sizes on the two sides.
pub fn common_equitable_partition(g: &Graph, h: &Graph) -> Option<CommonEquitablePartition> {
    let (ng, nh) = (g.n(), h.n());
    if ng != nh {
        return None;
    }
    let union = disjoint_union(g, h);
    let colors = refine(&union.graph, &vec![0; ng + nh]);
    let k = colors.iter().max().map_or(0, |&m| m as usize + 1);
    let cells_g = cells_from_colors(&colors, 0..ng, k);
    let cells_h = cells_from_colors(&colors, ng..ng + nh, k);
    if cells_g.iter().zip(&cells_h).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let ep = verify_equitable(g, &cells_g)
        .expect("aligned cells partition V(G)")
        .expect("stable colouring is equitable");
    let sizes: Vec<usize> = cells_g.iter().map(Vec::len).collect();
    let c = ep.partition_numbers;
    let cbar = (0..k)
        .map(|i| (0..k).map(|j| sizes[j] - c[i][j] - usize::from(i == j)).collect())
        .collect();
    let cep = CommonEquitablePartition {
        cells_g,
        cells_h,
        sizes,
        c,
        cbar,
    };
    assert!(
        cep.verify(g, h).expect("cells are partitions"),
        "aligned colour classes do not form a common equitable partition"
    );
    Some(cep)
}

/// Exact doubly stochastic matrix, rows indexed by `V(G)`, columns by `V(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyStochasticWitness {
    pub d: Vec<Vec<Ratio>>,
}

impl DoublyStochasticWitness {
    /// `D[g][h] = 1/n_i` when `g ∈ C_i` and `h ∈ D_i`, zero otherwise.
    pub fn from_partition(cep: &CommonEquitablePartition, ng: usize, nh: usize) -> Self {
        let (cg, ch) = cep.cell_maps(ng, nh);
        let d = (0..ng)
            .map(|g| {
                (0..nh)
                    .map(|h| {
                        if cg[g] == ch[h] {
                            Ratio::new(1, cep.sizes[cg[g]] as i64)
                        } else {
                            Ratio::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        DoublyStochasticWitness { d }
    }

    pub fn rows(&self) -> usize {
        self.d.len()
    }

    pub fn cols(&self) -> usize {
        self.d.first().map_or(0, Vec::len)
    }
}

/// How a candidate doubly stochastic witness fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DsViolation {
    Negative { row: usize, col: usize, value: String },
    RowSum { row: usize, sum: String },
    ColumnSum { col: usize, sum: String },
    Intertwining { row: usize, col: usize, ag_d: String, d_ah: String },
}

pub fn verify_ds_witness(
    g: &Graph,
    h: &Graph,
    w: &DoublyStochasticWitness,
) -> Result<std::result::Result<(), DsViolation>> {
    let (ng, nh) = (g.n(), h.n());
    if w.d.len() != ng || w.d.iter().any(|r| r.len() != nh) {
        return Err(Error::Dimension(format!(
            "witness must be {ng}x{nh}, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let d = &w.d;
    for (r, row) in d.iter().enumerate() {
        if let Some(c) = row.iter().position(|x| *x < Ratio::zero()) {
            return Ok(Err(DsViolation::Negative {
                row: r,
                col: c,
                value: row[c].to_string(),
            }));
        }
    }
    for (r, row) in d.iter().enumerate() {
        let sum: Ratio = row.iter().sum();
        if !sum.is_one() {
            return Ok(Err(DsViolation::RowSum {
                row: r,
                sum: sum.to_string(),
            }));
        }
    }
    for c in 0..nh {
        let sum: Ratio = d.iter().map(|row| row[c]).sum();
        if !sum.is_one() {
            return Ok(Err(DsViolation::ColumnSum {
                col: c,
                sum: sum.to_string(),
            }));
        }
    }
    for gv in 0..ng {
        for hv in 0..nh {
            let lhs: Ratio = g.neighbors(gv).map(|u| d[u][hv]).sum();
            let rhs: Ratio = h.neighbors(hv).map(|u| d[gv][u]).sum();
            if lhs != rhs {
                return Ok(Err(DsViolation::Intertwining {
                    row: gv,
                    col: hv,
                    ag_d: lhs.to_string(),
                    d_ah: rhs.to_string(),
                }));
            }
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Clone)]
pub enum FractionalVerdict {
    Yes {
        partition: CommonEquitablePartition,
        witness: DoublyStochasticWitness,
    },
    No,
}

impl FractionalVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, FractionalVerdict::Yes { .. })
    }
}

/// Decides fractional isomorphism; YES answers carry a verified witness.
pub fn fractional_iso(g: &Graph, h: &Graph) -> FractionalVerdict {
    let Some(partition) = common_equitable_partition(g, h) else {
        return FractionalVerdict::No;
    };
    let witness = DoublyStochasticWitness::from_partition(&partition, g.n(), h.n());
    match verify_ds_witness(g, h, &witness) {
        Ok(Ok(())) => {}
        other => panic!("constructed witness failed verification: {other:?}"),
    }
    FractionalVerdict::Yes { partition, witness }
}

/// `ds <rows> <cols>` followed by one line of `p/q` entries per row.
pub fn write_ds(w: &DoublyStochasticWitness) -> String {
    let mut out = format!("ds {} {}\n", w.rows(), w.cols());
    for row in &w.d {
        let line: Vec<String> = row
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn parse_ds(text: &str) -> Result<DoublyStochasticWitness> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `ds` header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (rows, cols) = match parts[..] {
        ["ds", r, c] => (
            r.parse::<usize>().map_err(|_| Error::parse(hl + 1, "bad row count"))?,
            c.parse::<usize>().map_err(|_| Error::parse(hl + 1, "bad column count"))?,
        ),
        _ => return Err(Error::parse(hl + 1, "expected `ds <rows> <cols>`")),
    };
    let mut entries = Vec::with_capacity(rows * cols);
    let mut last_line = hl + 1;
    for (i, line) in lines {
        last_line = i + 1;
        for tok in line.split_whitespace() {
            entries.push(parse_ratio(tok).ok_or_else(|| {
                Error::parse(i + 1, format!("bad rational {tok:?}"))
            })?);
        }
    }
    if entries.len() != rows * cols {
        return Err(Error::parse(
            last_line,
            format!("expected {} entries, found {}", rows * cols, entries.len()),
        ));
    }
    let d = if cols == 0 {
        vec![Vec::new(); rows]
    } else {
        entries.chunks(cols).map(<[Ratio]>::to_vec).collect()
    };
    Ok(DoublyStochasticWitness { d })
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(r: &Ratio, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Parses `p/q` or an integer.
pub fn parse_ratio(tok: &str) -> Option<Ratio> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.parse::<i64>().ok()?, q.parse::<i64>().ok()?);
            (q != 0).then(|| Ratio::new(p, q))
        }
        None => tok.parse::<i64>().ok().map(Ratio::from_integer),
    }
}

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

//! Correlations, the non-signalling conditions and perfect strategies for
//! the isomorphism game.
//!
//! A [`Correlation`] is a dense table `p(y_A, y_B | x_A, x_B)` over a single
//! token alphabet shared by questions and answers. For the isomorphism game
//! the alphabet is `V(G) ⊎ V(H)` with the labels produced by
//! [`disjoint_union`], `G` first.

use std::fmt::{self, Debug, Display, Write as _};
use std::iter::Sum;
use std::ops::{Add, Sub};

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::equitable::{
    fractional_iso, parse_ratio, CommonEquitablePartition, DoublyStochasticWitness,
    FractionalVerdict, Ratio,
};
use crate::error::{Error, Result};
use crate::game::iso_game_predicate_idx;
use crate::graph::{disjoint_union, Graph};

/// Largest token alphabet a dense table may have (`64^4` entries).
pub const MAX_TOKENS: usize = 64;

/// Default tolerance for floating-point tables.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Number type of a correlation table.
pub trait Probability:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Sum + Display + Debug
{
    /// Tag used in the file header.
    const MODE: &'static str;
    /// Tolerance a fresh table of this type uses.
    const DEFAULT_TOL: f64;

    fn within(&self, other: &Self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    fn parse_value(tok: &str) -> Option<Self>;
    fn format_value(&self) -> String;
}

impl Probability for Ratio {
    const MODE: &'static str = "exact";
    const DEFAULT_TOL: f64 = 0.0;

    fn within(&self, other: &Self, tol: f64) -> bool {
        if tol == 0.0 {
            self == other
        } else {
            (Probability::to_f64(self) - Probability::to_f64(other)).abs() <= tol
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_value(tok: &str) -> Option<Self> {
        parse_ratio(tok)
    }

    fn format_value(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Probability for f64 {
    const MODE: &'static str = "float";
    const DEFAULT_TOL: f64 = DEFAULT_TOLERANCE;

    fn within(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_value(tok: &str) -> Option<Self> {
        tok.parse::<f64>().ok().filter(|x| x.is_finite())
    }

    fn format_value(&self) -> String {
        format!("{self}")
    }
}

#[derive(Clone, PartialEq)]
pub struct Correlation<P> {
    tokens: Vec<String>,
    entries: Vec<P>,
    tol: f64,
}

impl<P: Debug> Debug for Correlation<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Correlation")
            .field("tokens", &self.tokens)
            .field("tol", &self.tol)
            .finish_non_exhaustive()
    }
}

impl<P: Probability> Correlation<P> {
    /// All-zero table over `tokens`.
    pub fn zeros(tokens: Vec<String>) -> Result<Self> {
        let t = tokens.len();
        if t > MAX_TOKENS {
            return Err(Error::SizeLimit {
                what: "correlation alphabet",
                size: t,
                limit: MAX_TOKENS,
            });
        }
        Ok(Correlation {
            tokens,
            entries: vec![P::zero(); t.pow(4)],
            tol: P::DEFAULT_TOL,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn size(&self) -> usize {
        self.tokens.len()
    }

    #[inline]
    fn idx(&self, x_a: usize, x_b: usize, y_a: usize, y_b: usize) -> usize {
        let t = self.tokens.len();
        ((x_a * t + x_b) * t + y_a) * t + y_b
    }

    /// `p(y_a, y_b | x_a, x_b)`.
    #[inline]
    pub fn get(&self, x_a: usize, x_b: usize, y_a: usize, y_b: usize) -> &P {
        &self.entries[self.idx(x_a, x_b, y_a, y_b)]
    }

    #[inline]
    pub fn set(&mut self, x_a: usize, x_b: usize, y_a: usize, y_b: usize, p: P) {
        let i = self.idx(x_a, x_b, y_a, y_b);
        self.entries[i] = p;
    }

    /// Nonzero entries as `(x_a, x_b, y_a, y_b, p)` in index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, usize, usize, &P)> + '_ {
        let t = self.tokens.len();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (i / (t * t * t), i / (t * t) % t, i / t % t, i % t, p))
    }

    /// Nonnegativity and normalisation within the table's tolerance.
    pub fn verify_distribution(&self) -> std::result::Result<(), DistributionViolation> {
        let t = self.size();
        let neg_floor = P::zero();
        for x_a in 0..t {
            for x_b in 0..t {
                let mut total = P::zero();
                for y_a in 0..t {
                    for y_b in 0..t {
                        let p = self.get(x_a, x_b, y_a, y_b);
                        if *p < neg_floor && !p.within(&neg_floor, self.tol) {
                            return Err(DistributionViolation::Negative {
                                tuple: self.name_tuple(x_a, x_b, y_a, y_b),
                                value: p.format_value(),
                            });
                        }
                        total = total + p.clone();
                    }
                }
                if !total.within(&P::one(), self.tol) {
                    return Err(DistributionViolation::Normalization {
                        x_a: self.tokens[x_a].clone(),
                        x_b: self.tokens[x_b].clone(),
                        total: total.format_value(),
                    });
                }
            }
        }
        Ok(())
    }

    fn name_tuple(&self, x_a: usize, x_b: usize, y_a: usize, y_b: usize) -> [String; 4] {
        [x_a, x_b, y_a, y_b].map(|i| self.tokens[i].clone())
    }

    /// `Σ_{y_B} p(y_A, y_B | x_A, x_B)`.
    pub fn alice_marginal(&self, x_a: usize, x_b: usize, y_a: usize) -> P {
        (0..self.size()).map(|y_b| self.get(x_a, x_b, y_a, y_b).clone()).sum()
    }

    /// `Σ_{y_A} p(y_A, y_B | x_A, x_B)`.
    pub fn bob_marginal(&self, x_a: usize, x_b: usize, y_b: usize) -> P {
        (0..self.size()).map(|y_a| self.get(x_a, x_b, y_a, y_b).clone()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionViolation {
    Negative { tuple: [String; 4], value: String },
    Normalization { x_a: String, x_b: String, total: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Alice,
    Bob,
}

/// A marginal of one player that depends on the other player's input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignallingViolation {
    /// Whose marginal moved.
    pub side: Player,
    /// That player's input and output.
    pub input: String,
    pub output: String,
    /// Two inputs of the other player giving different marginals.
    pub other_inputs: [String; 2],
    pub marginals: [String; 2],
}

/// Checks both families of non-signalling identities and reports the first
/// one that fails, comparing every marginal against the one for the other
/// player's first input.
pub fn verify_nonsignalling<P: Probability>(
    c: &Correlation<P>,
) -> std::result::Result<(), SignallingViolation> {
    let t = c.size();
    let tok = |i: usize| c.tokens[i].clone();
    for x_a in 0..t {
        for y_a in 0..t {
            let reference = c.alice_marginal(x_a, 0, y_a);
            for x_b in 1..t {
                let m = c.alice_marginal(x_a, x_b, y_a);
                if !m.within(&reference, c.tol) {
                    return Err(SignallingViolation {
                        side: Player::Alice,
                        input: tok(x_a),
                        output: tok(y_a),
                        other_inputs: [tok(0), tok(x_b)],
                        marginals: [reference.format_value(), m.format_value()],
                    });
                }
            }
        }
    }
    for x_b in 0..t {
        for y_b in 0..t {
            let reference = c.bob_marginal(0, x_b, y_b);
            for x_a in 1..t {
                let m = c.bob_marginal(x_a, x_b, y_b);
                if !m.within(&reference, c.tol) {
                    return Err(SignallingViolation {
                        side: Player::Bob,
                        input: tok(x_b),
                        output: tok(y_b),
                        other_inputs: [tok(0), tok(x_a)],
                        marginals: [reference.format_value(), m.format_value()],
                    });
                }
            }
        }
    }
    Ok(())
}

/// A tuple on which the isomorphism game is lost but the table is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LosingTuple {
    pub x_a: String,
    pub x_b: String,
    pub y_a: String,
    pub y_b: String,
    pub p: String,
}

/// The token alphabet of the `(G, H)` isomorphism game.
pub fn iso_game_tokens(g: &Graph, h: &Graph) -> Vec<String> {
    disjoint_union(g, h).graph.labels().to_vec()
}

/// Checks that `p` vanishes (within tolerance) on every losing tuple.
pub fn verify_perfect_iso_strategy<P: Probability>(
    c: &Correlation<P>,
    g: &Graph,
    h: &Graph,
) -> Result<std::result::Result<(), LosingTuple>> {
    if c.tokens != iso_game_tokens(g, h) {
        return Err(Error::Dimension(
            "correlation tokens are not V(G) ⊎ V(H) in union order".into(),
        ));
    }
    let zero = P::zero();
    for (x_a, x_b, y_a, y_b, p) in c.support() {
        if p.within(&zero, c.tol) {
            continue;
        }
        if !iso_game_predicate_idx(g, h, x_a, x_b, y_a, y_b) {
            let [x_a, x_b, y_a, y_b] = c.name_tuple(x_a, x_b, y_a, y_b);
            return Ok(Err(LosingTuple {
                x_a,
                x_b,
                y_a,
                y_b,
                p: p.format_value(),
            }));
        }
    }
    Ok(Ok(()))
}

/// Deterministic strategy answering with `φ` on `V(G)` and `φ⁻¹` on `V(H)`.
pub fn correlation_from_isomorphism(g: &Graph, h: &Graph, image: &[usize]) -> Result<Correlation<Ratio>> {
    let ng = g.n();
    let mut c = Correlation::zeros(iso_game_tokens(g, h))?;
    let mut answer = vec![0usize; ng + h.n()];
    for (a, &b) in image.iter().enumerate() {
        answer[a] = ng + b;
        answer[ng + b] = a;
    }
    for x_a in 0..ng + h.n() {
        for x_b in 0..ng + h.n() {
            c.set(x_a, x_b, answer[x_a], answer[x_b], Ratio::one());
        }
    }
    Ok(c)
}

/// The explicit non-signalling correlation of a common equitable partition.
///
/// For `g ∈ C_i, g' ∈ C_j, h ∈ D_i, h' ∈ D_j`:
/// `p(h,h'|g,g')` is `1/(n_i c_ij)` when both pairs are adjacent,
/// `1/(n_i c̄_ij)` when both are distinct and non-adjacent, `1/n_i` when
/// both are equal, and 0 otherwise. The same value is written to the three
/// reflected positions `p(h,g'|g,h')`, `p(g,h'|h,g')` and `p(g,g'|h,h')`.
/// Every other entry is 0.
pub fn build_ns_correlation(
    g: &Graph,
    h: &Graph,
    cep: &CommonEquitablePartition,
) -> Result<Correlation<Ratio>> {
    if g.n() != h.n() || !cep.verify(g, h)? {
        return Err(Error::Malformed(
            "common equitable partition does not match the graphs".into(),
        ));
    }
    let ng = g.n();
    let mut c = Correlation::zeros(iso_game_tokens(g, h))?;
    let mut written = vec![false; c.entries.len()];
    let mut put = |c: &mut Correlation<Ratio>, x_a, x_b, y_a, y_b, p: Ratio| {
        let i = c.idx(x_a, x_b, y_a, y_b);
        if written[i] {
            assert_eq!(c.entries[i], p, "two defining clauses disagree at one tuple");
        }
        written[i] = true;
        c.entries[i] = p;
    };

    let k = cep.k();
    for i in 0..k {
        let n_i = cep.sizes[i] as i64;
        for j in 0..k {
            for &gv in &cep.cells_g[i] {
                for &gw in &cep.cells_g[j] {
                    for &hv in &cep.cells_h[i] {
                        for &hw in &cep.cells_h[j] {
                            let g_eq = gv == gw;
                            let h_eq = hv == hw;
                            let g_adj = !g_eq && g.adjacent(gv, gw);
                            let h_adj = !h_eq && h.adjacent(hv, hw);
                            let p = if g_adj && h_adj {
                                Ratio::new(1, n_i * cep.c[i][j] as i64)
                            } else if g_eq && h_eq {
                                Ratio::new(1, n_i)
                            } else if !g_eq && !g_adj && !h_eq && !h_adj {
                                Ratio::new(1, n_i * cep.cbar[i][j] as i64)
                            } else {
                                Ratio::zero()
                            };
                            let (g1, g2, h1, h2) = (gv, gw, ng + hv, ng + hw);
                            put(&mut c, g1, g2, h1, h2, p);
                            put(&mut c, g1, h2, h1, g2, p);
                            put(&mut c, h1, g2, g1, h2, p);
                            put(&mut c, h1, h2, g1, g2, p);
                        }
                    }
                }
            }
        }
    }
    Ok(c)
}

/// The two-input, two-output PR box: `p(y, y' | x, x') = 1/2` iff
/// `y + y' ≡ x x' (mod 2)`.
pub fn pr_box() -> Correlation<Ratio> {
    let mut c = Correlation::zeros(vec!["0".into(), "1".into()]).expect("2 tokens");
    for x in 0..2 {
        for xp in 0..2 {
            for y in 0..2 {
                for yp in 0..2 {
                    if (y ^ yp) == (x & xp) {
                        c.set(x, xp, y, yp, Ratio::new(1, 2));
                    }
                }
            }
        }
    }
    c
}

/// `D[g][h] = p(h, h | g, g)` read off a perfect correlation.
pub fn ds_witness_from_correlation(c: &Correlation<Ratio>, g: &Graph, h: &Graph) -> DoublyStochasticWitness {
    let ng = g.n();
    let d = (0..ng)
        .map(|gv| (0..h.n()).map(|hv| *c.get(gv, gv, ng + hv, ng + hv)).collect())
        .collect();
    DoublyStochasticWitness { d }
}

#[derive(Debug, Clone)]
pub enum NsVerdict {
    Yes {
        partition: CommonEquitablePartition,
        correlation: Correlation<Ratio>,
    },
    No,
}

impl NsVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, NsVerdict::Yes { .. })
    }
}

/// Decides non-signalling isomorphism through fractional isomorphism; on
/// YES the correlation has passed the distribution, non-signalling and
/// perfect-strategy checks.
pub fn ns_iso(g: &Graph, h: &Graph) -> Result<NsVerdict> {
    let FractionalVerdict::Yes { partition, .. } = fractional_iso(g, h) else {
        return Ok(NsVerdict::No);
    };
    let correlation = build_ns_correlation(g, h, &partition)?;
    if let Err(v) = correlation.verify_distribution() {
        panic!("constructed correlation is not a distribution: {v:?}");
    }
    if let Err(v) = verify_nonsignalling(&correlation) {
        panic!("constructed correlation signals: {v:?}");
    }
    if let Err(v) = verify_perfect_iso_strategy(&correlation, g, h)? {
        panic!("constructed correlation loses: {v:?}");
    }
    Ok(NsVerdict::Yes {
        partition,
        correlation,
    })
}

/// A table read from disk, in whichever number mode its header names.
#[derive(Debug, Clone)]
pub enum AnyCorrelation {
    Exact(Correlation<Ratio>),
    Float(Correlation<f64>),
}

/// `corr <t> <mode>`, the token line, then `x_A x_B y_A y_B p` for every
/// nonzero entry in index order.
pub fn write_correlation<P: Probability>(c: &Correlation<P>) -> String {
    let mut out = format!("corr {} {}\n{}\n", c.size(), P::MODE, c.tokens.join(" "));
    for (x_a, x_b, y_a, y_b, p) in c.support() {
        let [a, b, ya, yb] = c.name_tuple(x_a, x_b, y_a, y_b);
        writeln!(out, "{a} {b} {ya} {yb} {}", p.format_value()).unwrap();
    }
    out
}

pub fn parse_correlation(text: &str) -> Result<AnyCorrelation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `corr` header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let ["corr", t, mode] = parts[..] else {
        return Err(Error::parse(hl, "expected `corr <num-inputs> <mode>`"));
    };
    let t: usize = t.parse().map_err(|_| Error::parse(hl, "bad input count"))?;
    let (tl, token_line) = lines.next().ok_or_else(|| Error::parse(hl, "missing token line"))?;
    let tokens: Vec<String> = token_line.split_whitespace().map(String::from).collect();
    if tokens.len() != t {
        return Err(Error::parse(tl, format!("expected {t} tokens, found {}", tokens.len())));
    }
    match mode {
        "exact" => parse_body::<Ratio>(tokens, lines, tl).map(AnyCorrelation::Exact),
        "float" => parse_body::<f64>(tokens, lines, tl).map(AnyCorrelation::Float),
        other => Err(Error::parse(hl, format!("unknown mode {other:?}"))),
    }
}

fn parse_body<'a, P: Probability>(
    tokens: Vec<String>,
    lines: impl Iterator<Item = (usize, &'a str)>,
    token_line: usize,
) -> Result<Correlation<P>> {
    let mut c = Correlation::<P>::zeros(tokens).map_err(|e| Error::parse(token_line, e.to_string()))?;
    let lookup = |c: &Correlation<P>, line: usize, tok: &str| {
        c.tokens
            .iter()
            .position(|t| t == tok)
            .ok_or_else(|| Error::parse(line, format!("unknown token {tok:?}")))
    };
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [a, b, ya, yb, p] = parts[..] else {
            return Err(Error::parse(line, "expected `x_A x_B y_A y_B p`"));
        };
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip([a, b, ya, yb]) {
            *slot = lookup(&c, line, tok)?;
        }
        let [a, b, ya, yb] = idx;
        let p = P::parse_value(p).ok_or_else(|| Error::parse(line, format!("bad value {p:?}")))?;
        c.set(a, b, ya, yb, p);
    }
    Ok(c)
}

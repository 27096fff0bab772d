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

//! Winning rules shared by every verifier: the vertex relationship, the
//! isomorphism game and the linear BCS game.

use serde::Serialize;

use crate::bcs::LinBcs;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relationship between two vertices of the same graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rel {
    Equal,
    Adjacent,
    DistinctNonAdjacent,
}

pub fn rel(g: &Graph, x: usize, y: usize) -> Result<Rel> {
    for v in [x, y] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { index: v, n: g.n() });
        }
    }
    Ok(if x == y {
        Rel::Equal
    } else if g.adjacent(x, y) {
        Rel::Adjacent
    } else {
        Rel::DistinctNonAdjacent
    })
}

/// A question or answer in the isomorphism game: a vertex of either graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    G(usize),
    H(usize),
}

impl Token {
    /// Decodes an index into `V(G) ⊎ V(H)` where `G` comes first.
    pub fn from_index(i: usize, ng: usize, nh: usize) -> Result<Token> {
        if i < ng {
            Ok(Token::G(i))
        } else if i < ng + nh {
            Ok(Token::H(i - ng))
        } else {
            Err(Error::VertexOutOfRange {
                index: i,
                n: ng + nh,
            })
        }
    }

    pub fn index(self, ng: usize) -> usize {
        match self {
            Token::G(v) => v,
            Token::H(v) => ng + v,
        }
    }
}

/// Checks that a question/answer pair crosses sides and returns `(g, h)`.
fn split(x: Token, y: Token) -> Option<(usize, usize)> {
    match (x, y) {
        (Token::G(g), Token::H(h)) | (Token::H(h), Token::G(g)) => Some((g, h)),
        _ => None,
    }
}

/// True iff both players answer from the opposite graph and the relationship
/// of their `G`-vertices equals that of their `H`-vertices.
pub fn iso_game_predicate(
    g: &Graph,
    h: &Graph,
    x_a: Token,
    x_b: Token,
    y_a: Token,
    y_b: Token,
) -> Result<bool> {
    for t in [x_a, x_b, y_a, y_b] {
        match t {
            Token::G(v) if v >= g.n() => return Err(Error::VertexOutOfRange { index: v, n: g.n() }),
            Token::H(v) if v >= h.n() => return Err(Error::VertexOutOfRange { index: v, n: h.n() }),
            _ => {}
        }
    }
    let (Some((g_a, h_a)), Some((g_b, h_b))) = (split(x_a, y_a), split(x_b, y_b)) else {
        return Ok(false);
    };
    Ok(rel(g, g_a, g_b)? == rel(h, h_a, h_b)?)
}

/// Index-based form of [`iso_game_predicate`] for tables over `V(G) ⊎ V(H)`.
/// Inputs must already be in range.
#[inline]
pub(crate) fn iso_game_predicate_idx(
    g: &Graph,
    h: &Graph,
    x_a: usize,
    x_b: usize,
    y_a: usize,
    y_b: usize,
) -> bool {
    let ng = g.n();
    let side = |i: usize| i < ng;
    if side(x_a) == side(y_a) || side(x_b) == side(y_b) {
        return false;
    }
    let (g_a, h_a) = if side(x_a) { (x_a, y_a - ng) } else { (y_a, x_a - ng) };
    let (g_b, h_b) = if side(x_b) { (x_b, y_b - ng) } else { (y_b, x_b - ng) };
    let rg = (g_a == g_b, g_a != g_b && g.adjacent(g_a, g_b));
    let rh = (h_a == h_b, h_a != h_b && h.adjacent(h_a, h_b));
    rg == rh
}

/// True iff each assignment satisfies its own constraint and the two agree
/// on the shared variables.
///
/// Assignments are bit vectors aligned with the (sorted) support of their
/// constraint.
pub fn bcs_game_predicate(
    bcs: &LinBcs,
    l_a: usize,
    l_b: usize,
    f_a: &[bool],
    f_b: &[bool],
) -> Result<bool> {
    let (ca, cb) = (bcs.constraint(l_a)?, bcs.constraint(l_b)?);
    if f_a.len() != ca.support.len() || f_b.len() != cb.support.len() {
        return Err(Error::Dimension(
            "assignment length differs from constraint support".into(),
        ));
    }
    if !ca.is_satisfied_by(f_a) || !cb.is_satisfied_by(f_b) {
        return Ok(false);
    }
    Ok(ca.agrees_with(f_a, cb, f_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::magic_square;
    use crate::graph::find_isomorphism;
    use proptest::prelude::*;

    #[test]
    fn rel_on_triangle_plus_isolated() {
        let g = Graph::from_index_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(rel(&g, 0, 0).unwrap(), Rel::Equal);
        assert_eq!(rel(&g, 0, 1).unwrap(), Rel::Adjacent);
        assert_eq!(rel(&g, 0, 3).unwrap(), Rel::DistinctNonAdjacent);
        assert!(rel(&g, 0, 4).is_err());
    }

    #[test]
    fn isomorphism_answers_always_win() {
        let g = Graph::cycle(5);
        let h = g.complement();
        let phi = find_isomorphism(&g, &h).unwrap().unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let ok = iso_game_predicate(
                    &g,
                    &h,
                    Token::G(a),
                    Token::G(b),
                    Token::H(phi.image[a]),
                    Token::H(phi.image[b]),
                )
                .unwrap();
                assert!(ok);
            }
        }
    }

    #[test]
    fn same_question_needs_same_answer() {
        let (g, h) = (Graph::complete(3), Graph::complete(3));
        assert!(!iso_game_predicate(&g, &h, Token::G(0), Token::G(0), Token::H(0), Token::H(1)).unwrap());
        assert!(iso_game_predicate(&g, &h, Token::G(0), Token::G(0), Token::H(1), Token::H(1)).unwrap());
    }

    #[test]
    fn answers_must_cross_sides() {
        let (g, h) = (Graph::complete(3), Graph::complete(3));
        assert!(!iso_game_predicate(&g, &h, Token::G(0), Token::G(1), Token::G(2), Token::H(0)).unwrap());
        assert!(iso_game_predicate(&g, &h, Token::G(0), Token::G(5), Token::H(0), Token::H(0)).is_err());
    }

    #[test]
    fn bcs_predicate_cases() {
        let ms = magic_square();
        // Same row, same satisfying answer.
        assert!(bcs_game_predicate(&ms, 0, 0, &[false, true, true], &[false, true, true]).unwrap());
        // Row 1 (x1,x2,x3) -> 000 vs column 1 (x1,x4,x7) -> 110 disagree on x1.
        assert!(!bcs_game_predicate(&ms, 0, 3, &[false, false, false], &[true, true, false]).unwrap());
        // Row 1 answer violating its parity.
        assert!(!bcs_game_predicate(&ms, 0, 3, &[true, false, false], &[true, true, false]).unwrap());
        assert!(bcs_game_predicate(&ms, 0, 3, &[true], &[true, true, false]).is_err());
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                Graph::from_index_edges(n, pairs.zip(bits).filter(|p| p.1).map(|p| p.0)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn predicate_symmetries(g in small_graph(), h in small_graph(), t in proptest::collection::vec(0usize..64, 4)) {
            let (ng, nh) = (g.n(), h.n());
            let tok = |i: usize| Token::from_index(i % (ng + nh), ng, nh).unwrap();
            let (xa, xb, ya, yb) = (tok(t[0]), tok(t[1]), tok(t[2]), tok(t[3]));
            let base = iso_game_predicate(&g, &h, xa, xb, ya, yb).unwrap();
            let swap = |t: Token| match t { Token::G(v) => Token::H(v), Token::H(v) => Token::G(v) };
            prop_assert_eq!(base, iso_game_predicate(&h, &g, swap(xa), swap(xb), swap(ya), swap(yb)).unwrap());
            prop_assert_eq!(base, iso_game_predicate(&g.complement(), &h.complement(), xa, xb, ya, yb).unwrap());
            let idx = |t: Token| t.index(ng);
            prop_assert_eq!(base, iso_game_predicate_idx(&g, &h, idx(xa), idx(xb), idx(ya), idx(yb)));
            // Same question to both players: win iff both give the same cross-side answer.
            let same = iso_game_predicate(&g, &h, xa, xa, ya, ya).unwrap();
            let crosses = matches!((xa, ya), (Token::G(_), Token::H(_)) | (Token::H(_), Token::G(_)));
            prop_assert_eq!(same, crosses);
        }
    }
}

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

//! Exact characteristic polynomials of adjacency matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::Graph;

/// `det(xI - A)` with exact integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    /// `coeffs[k]` is the coefficient of `x^k`; `coeffs[n] = 1`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        CharPoly { coeffs }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CharPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(mut a: Poly, b: &Poly) -> Poly {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
    trim(&mut a);
    a
}

/// Exact quotient by a monic divisor. Panics if the remainder is nonzero,
/// which would mean the elimination invariant is broken.
fn div_exact_monic(num: &Poly, den: &Poly) -> Poly {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    if num.len() <= dd {
        assert!(num.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut rem = num.clone();
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    trim(&mut q);
    q
}

/// Characteristic polynomial by fraction-free (Bareiss) elimination on
/// `xI - A` over `Z[x]`.
///
/// Every pivot is a leading principal minor of `xI - A`, i.e. a monic
/// polynomial, so no pivoting is needed and each division is exact.
pub fn char_poly(g: &Graph) -> CharPoly {
    let n = g.n();
    if n == 0 {
        return CharPoly {
            coeffs: vec![BigInt::one()],
        };
    }
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![BigInt::zero(), BigInt::one()]
                    } else if g.adjacent(i, j) {
                        vec![-BigInt::one()]
                    } else {
                        vec![BigInt::zero()]
                    }
                })
                .collect()
        })
        .collect();
    let mut prev: Poly = vec![BigInt::one()];
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let t = sub(mul(&m[i][j], &m[k][k]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact_monic(&t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let mut coeffs = m[n - 1][n - 1].clone();
    coeffs.resize(n + 1, BigInt::zero());
    debug_assert!(coeffs[n].is_one());
    CharPoly { coeffs }
}

#[derive(Debug, Clone, Serialize)]
pub struct CospectralReport {
    pub cospectral: bool,
    pub complements_cospectral: bool,
    pub g: CharPoly,
    pub h: CharPoly,
    pub g_complement: CharPoly,
    pub h_complement: CharPoly,
}

pub fn cospectral_mates(g: &Graph, h: &Graph) -> CospectralReport {
    let (pg, ph) = (char_poly(g), char_poly(h));
    let (pgc, phc) = (char_poly(&g.complement()), char_poly(&h.complement()));
    CospectralReport {
        cospectral: pg == ph,
        complements_cospectral: pgc == phc,
        g: pg,
        h: ph,
        g_complement: pgc,
        h_complement: phc,
    }
}

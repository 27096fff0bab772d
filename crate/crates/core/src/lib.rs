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

//! Certified checks for graph isomorphism and its relaxations.
//!
//! Every decision procedure returns a witness that an independent verifier
//! re-checks:
//!
//! * [`graph`]: exact isomorphism, characteristic polynomials, independence
//!   numbers.
//! * [`equitable`]: common equitable partitions and doubly stochastic
//!   witnesses for fractional isomorphism, in exact rational arithmetic.
//! * [`nonsignalling`]: correlation tables for the isomorphism game.
//! * [`bcs`]: linear binary constraint systems and their constraint graphs.
//! * [`quantum`]: projector-valued certificates, including the magic-square
//!   pair of 24-vertex graphs that are quantum isomorphic but not isomorphic.
//! * [`generate`]: seeded random instances for tests and benchmarks.

pub mod bcs;
pub mod equitable;
pub mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod nonsignalling;
pub mod quantum;

pub use bcs::{bcs_graph, magic_square, parse_bcs, BcsGraph, Constraint, LinBcs};
pub use equitable::{fractional_iso, CommonEquitablePartition, DoublyStochasticWitness, FractionalVerdict, Ratio};
pub use error::{Error, Result};
pub use graph::{
    char_poly, cospectral_mates, find_isomorphism, independence_number, parse_graph, write_graph, CharPoly,
    Graph, IndependentSet, VertexMap,
};
pub use nonsignalling::{Correlation, NsVerdict, Probability};
pub use quantum::{CMatrix, QuantumIsoCertificate};

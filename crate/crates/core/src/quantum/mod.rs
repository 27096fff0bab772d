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

//! Complex-matrix certificates: projective permutation matrices, quantum
//! isomorphism certificates, projective packings and BCS strategies.

mod bcs_strategy;
mod certificate;
mod cmatrix;
mod packing;
mod report;

pub use bcs_strategy::{
    classical_bcs_strategy, mermin_bcs_strategy, mermin_observables, strategy_from_observables,
    strategy_to_certificate, strategy_to_packing, verify_bcs_strategy, BcsQuantumStrategy,
    BcsStrategyReport, StrategyEntry,
};
pub use certificate::{
    certificate_correlation, verify_ppm, verify_qiso_certificate, CertificateEntry, PairOfPairs,
    PpmReport, QisoReport, QuantumIsoCertificate, MAX_ASSEMBLED,
};
pub use cmatrix::{pauli, CMatrix, MatrixJson, OperatorFile, MAX_DIM};
pub use packing::{verify_packing, PackingEntry, PackingValue, PackingViolation, ProjectivePacking, RANK_TOLERANCE};
pub use report::{
    default_strategy, quantum_reduction_report, CorrelationChecks, PackingCheck, QuantumReport,
    StrategySource, ROUND_TRIP_GROWTH,
};

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

//! `qiso`: decide and certify graph isomorphism and its relaxations.
//!
//! Exit status: 0 when the property holds or verification passed, 1 when it
//! is refuted or verification failed, 2 on usage, parse or size errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qiso", version, about = "Certified checks for graph isomorphism and its relaxations")]
struct Cli {
    /// Tolerance for floating-point verification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the command's witness or artefact here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append per-stage wall-clock timings to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Classical and fractional checks on two graph files.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Non-signalling correlations of the isomorphism game.
    #[command(subcommand)]
    Ns(NsCmd),
    /// Linear binary constraint systems.
    #[command(subcommand)]
    Bcs(BcsCmd),
    /// Quantum certificates, correlations and packings.
    #[command(subcommand)]
    Quantum(QuantumCmd),
}

#[derive(Subcommand)]
pub enum GraphCmd {
    /// Exhaustive isomorphism search.
    Iso { g: PathBuf, h: PathBuf },
    /// Common equitable partition and doubly stochastic witness.
    FractionalIso { g: PathBuf, h: PathBuf },
    /// Compare characteristic polynomials of the graphs and their complements.
    Cospectral { g: PathBuf, h: PathBuf },
    /// Exact independence number with a witness.
    Alpha { g: PathBuf },
}

#[derive(Subcommand)]
pub enum NsCmd {
    /// Build an exact perfect non-signalling correlation.
    Build { g: PathBuf, h: PathBuf },
    /// Check a correlation file; with --graphs, also check it wins the game.
    Verify {
        correlation: PathBuf,
        #[arg(long, num_args = 2, value_names = ["G", "H"])]
        graphs: Option<Vec<PathBuf>>,
    },
}

#[derive(Subcommand)]
pub enum BcsCmd {
    /// Solve over GF(2).
    Check { system: PathBuf },
    /// Print the constraint graph G_F as a graph file.
    ToGraph {
        system: PathBuf,
        /// Use the homogenised system.
        #[arg(long)]
        homogeneous: bool,
    },
    /// Classical and quantum reduction report.
    Report { system: PathBuf },
    /// Print the magic-square system.
    MagicSquare,
}

#[derive(Subcommand)]
pub enum QuantumCmd {
    /// Verify a quantum isomorphism certificate.
    Certify { g: PathBuf, h: PathBuf, certificate: PathBuf },
    /// Verify a certificate and derive its correlation.
    Correlation { g: PathBuf, h: PathBuf, certificate: PathBuf },
    /// Verify a projective packing and report its value.
    Packing { g: PathBuf, packing: PathBuf },
    /// Build and verify the magic-square pair end to end.
    MerminDemo,
}

pub struct Ctx {
    pub tol: f64,
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        eprintln!("error: --tol must be a finite non-negative number");
        return ExitCode::from(2);
    }
    let ctx = Ctx { tol: cli.tol, out: cli.out };
    let result = match cli.group {
        Group::Graph(c) => commands::graph(&ctx, c),
        Group::Ns(c) => commands::ns(&ctx, c),
        Group::Bcs(c) => commands::bcs(&ctx, c),
        Group::Quantum(c) => commands::quantum(&ctx, c),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.json, cli.timings));
            if report.holds() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

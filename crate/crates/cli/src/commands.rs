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

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qiso_core::bcs::{bcs_graph, magic_square, parse_bcs, solve_gf2, LinBcs};
use qiso_core::equitable::{fractional_iso, write_ds, FractionalVerdict};
use qiso_core::graph::{cospectral_mates, find_isomorphism, independence_number, parse_graph, write_graph};
use qiso_core::nonsignalling::{
    ns_iso, parse_correlation, verify_nonsignalling, verify_perfect_iso_strategy, write_correlation, AnyCorrelation,
    NsVerdict, Probability,
};
use qiso_core::quantum::{
    certificate_correlation, mermin_bcs_strategy, quantum_reduction_report, verify_packing, verify_qiso_certificate,
    ProjectivePacking, QisoReport, QuantumIsoCertificate, QuantumReport,
};
use qiso_core::{Correlation, Graph};

use crate::output::Report;
use crate::{BcsCmd, Ctx, GraphCmd, NsCmd, QuantumCmd};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_bcs(path: &Path) -> Result<LinBcs> {
    parse_bcs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(ctx: &Ctx, contents: &str, r: &mut Report) -> Result<()> {
    if let Some(path) = &ctx.out {
        fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
        r.line(format!("wrote {}", path.display()));
    }
    Ok(())
}

fn labels<'a>(g: &'a Graph, vs: &[usize]) -> Vec<&'a str> {
    vs.iter().map(|&v| g.label(v)).collect()
}

pub fn graph(ctx: &Ctx, cmd: GraphCmd) -> Result<Report> {
    match cmd {
        GraphCmd::Iso { g, h } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let mut r = Report::new("graph iso");
            let phi = r.time("search", || find_isomorphism(&g, &h))?;
            r.line(format!("vertices: {} / {}", g.n(), h.n()));
            r.line(format!("edges: {} / {}", g.edge_count(), h.edge_count()));
            match phi {
                Some(phi) => {
                    r.verdict(true, "ISOMORPHIC");
                    let pairs = phi.label_pairs(&g, &h);
                    let mut file = String::new();
                    for (a, b) in &pairs {
                        r.line(format!("{a} -> {b}"));
                        file.push_str(&format!("{a} {b}\n"));
                    }
                    r.witness("map", &pairs);
                    write_out(ctx, &file, &mut r)?;
                }
                None => r.verdict(false, "NOT ISOMORPHIC"),
            }
            Ok(r)
        }
        GraphCmd::FractionalIso { g, h } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let mut r = Report::new("graph fractional-iso");
            match r.time("refine", || fractional_iso(&g, &h)) {
                FractionalVerdict::Yes { partition, witness } => {
                    r.verdict(true, "FRACTIONALLY ISOMORPHIC");
                    r.line(format!("cells: {}", partition.k()));
                    let mut cells = Vec::new();
                    for (cg, ch) in partition.cells_g.iter().zip(&partition.cells_h) {
                        let (lg, lh) = (labels(&g, cg), labels(&h, ch));
                        r.line(format!("{{{}}} | {{{}}}", lg.join(" "), lh.join(" ")));
                        cells.push([lg, lh]);
                    }
                    r.line(format!("partition numbers: {:?}", partition.c));
                    r.witness("cells", cells);
                    r.witness("partition_numbers", &partition.c);
                    write_out(ctx, &write_ds(&witness), &mut r)?;
                }
                FractionalVerdict::No => r.verdict(false, "NOT FRACTIONALLY ISOMORPHIC"),
            }
            Ok(r)
        }
        GraphCmd::Cospectral { g, h } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let mut r = Report::new("graph cospectral");
            let rep = r.time("char_poly", || cospectral_mates(&g, &h));
            let yn = |b: bool| if b { "yes" } else { "no" };
            r.verdict(rep.cospectral, if rep.cospectral { "COSPECTRAL" } else { "NOT COSPECTRAL" });
            r.line(format!("char poly G:  {}", rep.g));
            r.line(format!("char poly H:  {}", rep.h));
            r.line(format!("complements cospectral: {}", yn(rep.complements_cospectral)));
            r.witness("report", &rep);
            Ok(r)
        }
        GraphCmd::Alpha { g } => {
            let g = read_graph(&g)?;
            let mut r = Report::new("graph alpha");
            let s = r.time("branch_and_bound", || independence_number(&g))?;
            r.verdict(true, &format!("alpha = {}", s.alpha));
            let set = labels(&g, &s.witness);
            r.line(format!("independent set: {}", set.join(" ")));
            r.witness("alpha", s.alpha);
            r.witness("independent_set", set);
            Ok(r)
        }
    }
}

fn check_correlation<P: Probability>(c: &Correlation<P>, graphs: Option<(&Graph, &Graph)>, r: &mut Report) -> Result<()> {
    let mut ok = true;
    match c.verify_distribution() {
        Ok(()) => r.line("distribution: ok"),
        Err(v) => {
            ok = false;
            r.line(format!("distribution: {v:?}"));
            r.witness("distribution_violation", v);
        }
    }
    match verify_nonsignalling(c) {
        Ok(()) => r.line("non-signalling: ok"),
        Err(v) => {
            ok = false;
            r.line(format!("non-signalling: {v:?}"));
            r.witness("signalling_violation", v);
        }
    }
    let Some((g, h)) = graphs else {
        r.verdict(ok, if ok { "VALID CORRELATION" } else { "INVALID CORRELATION" });
        return Ok(());
    };
    match verify_perfect_iso_strategy(c, g, h)? {
        Ok(()) => r.line("perfect: ok"),
        Err(v) => {
            ok = false;
            r.line(format!("perfect: {v:?}"));
            r.witness("losing_tuple", v);
        }
    }
    r.verdict(ok, if ok { "PERFECT STRATEGY" } else { "NOT A PERFECT STRATEGY" });
    Ok(())
}

pub fn ns(ctx: &Ctx, cmd: NsCmd) -> Result<Report> {
    match cmd {
        NsCmd::Build { g, h } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let mut r = Report::new("ns build");
            match r.time("build", || ns_iso(&g, &h))? {
                NsVerdict::Yes { partition, correlation } => {
                    r.verdict(true, "NON-SIGNALLING ISOMORPHIC");
                    r.line(format!("cells: {}", partition.k()));
                    r.line(format!("tokens: {}", correlation.size()));
                    r.line(format!("support: {}", correlation.support().count()));
                    r.line("distribution, non-signalling and perfect-strategy checks passed");
                    write_out(ctx, &write_correlation(&correlation), &mut r)?;
                }
                NsVerdict::No => r.verdict(false, "NOT NON-SIGNALLING ISOMORPHIC"),
            }
            Ok(r)
        }
        NsCmd::Verify { correlation, graphs } => {
            let c = parse_correlation(&read(&correlation)?)
                .with_context(|| format!("parsing {}", correlation.display()))?;
            let graphs = match graphs.as_deref() {
                Some([g, h]) => Some((read_graph(g)?, read_graph(h)?)),
                Some(_) => bail!("--graphs takes two files"),
                None => None,
            };
            let pair = graphs.as_ref().map(|(g, h)| (g, h));
            let mut r = Report::new("ns verify");
            match c {
                AnyCorrelation::Exact(c) => {
                    r.line("mode: exact");
                    check_correlation(&c, pair, &mut r)?;
                }
                AnyCorrelation::Float(c) => {
                    let c = c.with_tolerance(ctx.tol);
                    r.line(format!("mode: float, tolerance {:e}", ctx.tol));
                    check_correlation(&c, pair, &mut r)?;
                }
            }
            Ok(r)
        }
    }
}

fn assignment_line(bcs: &LinBcs, a: &[bool]) -> String {
    a.iter()
        .enumerate()
        .map(|(i, &b)| format!("{}={}", bcs.variable_name(i), u8::from(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn bcs(ctx: &Ctx, cmd: BcsCmd) -> Result<Report> {
    match cmd {
        BcsCmd::Check { system } => {
            let bcs = read_bcs(&system)?;
            let mut r = Report::new("bcs check");
            match r.time("solve", || solve_gf2(&bcs)) {
                Some(a) => {
                    r.verdict(true, "SATISFIABLE");
                    r.line(assignment_line(&bcs, &a));
                    r.witness("assignment", &a);
                }
                None => r.verdict(false, "UNSATISFIABLE"),
            }
            Ok(r)
        }
        BcsCmd::ToGraph { system, homogeneous } => {
            let mut bcs = read_bcs(&system)?;
            if homogeneous {
                bcs = bcs.homogenize();
            }
            let mut r = Report::new("bcs to-graph");
            let gf = bcs_graph(&bcs)?.graph;
            let name = if homogeneous { "G_F0" } else { "G_F" };
            r.verdict(true, &format!("# {name}: {} vertices, {} edges", gf.n(), gf.edge_count()));
            let text = write_graph(&gf);
            if ctx.out.is_some() {
                write_out(ctx, &text, &mut r)?;
            } else {
                r.line(text.trim_end());
            }
            r.witness("vertices", gf.n());
            r.witness("edges", gf.edge_count());
            Ok(r)
        }
        BcsCmd::Report { system } => {
            let bcs = read_bcs(&system)?;
            let mut r = Report::new("bcs report");
            let q = r.time("report", || quantum_reduction_report(&bcs, ctx.tol))?;
            fill_quantum_report(&mut r, &q);
            Ok(r)
        }
        BcsCmd::MagicSquare => {
            let bcs = magic_square();
            let mut r = Report::new("bcs magic-square");
            r.verdict(true, &format!("# magic square: {} variables, {} constraints", bcs.n(), bcs.m()));
            let text = bcs.to_string();
            if ctx.out.is_some() {
                write_out(ctx, &text, &mut r)?;
            } else {
                r.line(text.trim_end());
            }
            r.witness("system", text);
            Ok(r)
        }
    }
}

fn certificate_residuals(r: &mut Report, c: &QisoReport) {
    r.residual("projector", c.projector);
    r.residual("row_sums", c.row_sums);
    r.residual("column_sums", c.column_sums);
    r.residual("orthogonality", c.orthogonality);
    r.residual("intertwining", c.intertwining);
    r.residual("unitarity", c.unitarity);
}

fn certificate_lines(r: &mut Report, c: &QisoReport) {
    r.line(format!("d: {}", c.d));
    r.line(format!("projector residual:     {:e}", c.projector));
    r.line(format!("row sum residual:       {:e}", c.row_sums));
    r.line(format!("column sum residual:    {:e}", c.column_sums));
    r.line(format!("orthogonality residual: {:e}", c.orthogonality));
    r.line(format!("intertwining residual:  {:e}", c.intertwining));
    r.line(format!("unitarity residual:     {:e}", c.unitarity));
    if !c.consistent {
        r.line("internal inconsistency: the projector and matrix forms disagree");
    }
}

fn fill_quantum_report(r: &mut Report, q: &QuantumReport) {
    let verdict = match (q.classical.graphs_isomorphic, q.quantum_isomorphic) {
        (true, _) => "ISOMORPHIC",
        (false, Some(true)) => "QUANTUM ISOMORPHIC, NOT ISOMORPHIC",
        (false, Some(false)) => "NOT ISOMORPHIC, QUANTUM CERTIFICATE FAILED",
        (false, None) => "NOT ISOMORPHIC, NO QUANTUM STRATEGY",
    };
    r.verdict(q.ok(), verdict);
    for line in q.to_string().lines() {
        r.line(line);
    }
    if let Some(c) = &q.certificate {
        certificate_residuals(r, c);
    }
    if let Some(s) = &q.strategy {
        r.residual("strategy_projector", s.projector);
        r.residual("strategy_sums", s.sums);
        r.residual("strategy_losing_probability", s.losing_probability);
    }
    if let Some(g) = q.round_trip_growth {
        r.residual("round_trip_growth", g);
    }
    r.witness("report", q);
}

fn read_certificate(g: &Graph, h: &Graph, path: &Path) -> Result<QuantumIsoCertificate> {
    QuantumIsoCertificate::from_json(&read(path)?, g, h).with_context(|| format!("parsing {}", path.display()))
}

pub fn quantum(ctx: &Ctx, cmd: QuantumCmd) -> Result<Report> {
    match cmd {
        QuantumCmd::Certify { g, h, certificate } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let cert = read_certificate(&g, &h, &certificate)?;
            let mut r = Report::new("quantum certify");
            let c = r.time("verify", || verify_qiso_certificate(&g, &h, &cert, ctx.tol))?;
            let ok = c.ok && c.consistent;
            r.verdict(ok, if ok { "CERTIFICATE VALID" } else { "CERTIFICATE INVALID" });
            if c.size_mismatch {
                r.line("graphs have different orders");
            } else {
                certificate_lines(&mut r, &c);
                certificate_residuals(&mut r, &c);
            }
            if let Some(w) = c.worst_orthogonality {
                let pair = [g.label(w.g), h.label(w.h), g.label(w.g2), h.label(w.h2)];
                r.line(format!("worst orthogonality pair: ({}, {}), ({}, {})", pair[0], pair[1], pair[2], pair[3]));
                r.witness("worst_orthogonality", pair);
            }
            Ok(r)
        }
        QuantumCmd::Correlation { g, h, certificate } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let cert = read_certificate(&g, &h, &certificate)?;
            let mut r = Report::new("quantum correlation");
            let c = r.time("verify", || verify_qiso_certificate(&g, &h, &cert, ctx.tol))?;
            if !(c.ok && c.consistent) {
                r.verdict(false, "CERTIFICATE INVALID");
                certificate_lines(&mut r, &c);
                certificate_residuals(&mut r, &c);
                return Ok(r);
            }
            let corr = r.time("correlation", || certificate_correlation(&g, &h, &cert))?;
            let corr = corr.with_tolerance(10.0 * ctx.tol);
            r.line(format!("tokens: {}", corr.size()));
            r.line(format!("tolerance: {:e}", corr.tolerance()));
            check_correlation(&corr, Some((&g, &h)), &mut r)?;
            if r.holds() {
                write_out(ctx, &write_correlation(&corr), &mut r)?;
            }
            Ok(r)
        }
        QuantumCmd::Packing { g, packing } => {
            let g = read_graph(&g)?;
            let pack = ProjectivePacking::from_json(&read(&packing)?, &g)
                .with_context(|| format!("parsing {}", packing.display()))?;
            let mut r = Report::new("quantum packing");
            match r.time("verify", || verify_packing(&g, &pack, ctx.tol))? {
                Ok(v) => {
                    r.verdict(true, &format!("PACKING VALUE {}", v.value));
                    r.line(format!("d: {}", pack.d()));
                    r.line(format!("total rank: {}", v.ranks.iter().sum::<usize>()));
                    r.witness("value", v.value.to_string());
                    r.witness("ranks", &v.ranks);
                }
                Err(v) => {
                    r.verdict(false, "INVALID PACKING");
                    r.line(format!("{v:?}"));
                    r.witness("violation", v);
                }
            }
            Ok(r)
        }
        QuantumCmd::MerminDemo => mermin_demo(ctx),
    }
}

/// Every check the demo needs before it reports success.
fn demo_failures(q: &QuantumReport, tol: f64) -> Vec<String> {
    let mut failures = Vec::new();
    let mut need = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    let (gf, gf0) = q.graphs.as_ref().expect("report keeps its graphs");
    need(gf.n() == 24 && gf0.n() == 24, format!("vertex counts are {} and {}", gf.n(), gf0.n()));
    need(!q.classical.satisfiable, "the system is classically satisfiable".into());
    need(!q.classical.graphs_isomorphic, "exhaustive search found an isomorphism".into());
    need(q.classical.consistent, "classical checks disagree".into());
    need(q.cospectral.cospectral, "graphs are not cospectral".into());
    need(q.cospectral.complements_cospectral, "complements are not cospectral".into());
    match &q.certificate {
        Some(c) => {
            for (name, v) in [
                ("projector", c.projector),
                ("row sum", c.row_sums),
                ("column sum", c.column_sums),
                ("orthogonality", c.orthogonality),
                ("intertwining", c.intertwining),
                ("unitarity", c.unitarity),
            ] {
                need(v <= tol, format!("{name} residual {v:e} exceeds {tol:e}"));
            }
            need(c.consistent, "certificate forms disagree".into());
        }
        None => need(false, "no certificate was built".into()),
    }
    if let Some(s) = &q.strategy {
        need(s.ok, format!("strategy check failed: {s:?}"));
    }
    if let Some(c) = &q.correlation {
        need(c.ok(), format!("correlation check failed: {c:?}"));
    }
    if let Some(p) = &q.packing {
        need(p.ok(), format!("packing value {} differs from m = {}", p.value, p.m));
    }
    if let Some(g) = q.round_trip_growth {
        need(g <= qiso_core::quantum::ROUND_TRIP_GROWTH, format!("round-trip growth {g:e}"));
    }
    failures
}

fn mermin_demo(ctx: &Ctx) -> Result<Report> {
    let bcs = magic_square();
    let mut r = Report::new("quantum mermin-demo");
    let q = r.time("report", || quantum_reduction_report(&bcs, ctx.tol))?;
    r.line("magic square system:");
    for line in bcs.to_string().lines() {
        r.line(format!("  {line}"));
    }
    fill_quantum_report(&mut r, &q);
    if let Some((gf, gf0)) = &q.graphs {
        r.witness("vertices", [gf.n(), gf0.n()]);
    }
    let failures = demo_failures(&q, ctx.tol);
    if !failures.is_empty() {
        r.verdict(false, "MERMIN DEMO FAILED");
        for f in &failures {
            r.line(format!("failed: {f}"));
        }
        r.witness("failures", &failures);
        return Ok(r);
    }
    if let Some(dir) = &ctx.out {
        let (gf, gf0) = q.graphs.as_ref().expect("report keeps its graphs");
        let cert = q.certificate_data.as_ref().expect("certificate was built");
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let files = [
            ("magic_square.bcs", bcs.to_string()),
            ("g_f.g", write_graph(gf)),
            ("g_f0.g", write_graph(gf0)),
            ("certificate.json", cert.to_json(gf, gf0)?),
            ("strategy.json", mermin_bcs_strategy().to_json(&bcs)?),
        ];
        for (name, contents) in files {
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        r.line(format!("wrote {}", dir.display()));
    }
    Ok(r)
}

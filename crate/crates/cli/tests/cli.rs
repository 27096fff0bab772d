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
use std::path::{Path, PathBuf};
use std::process::Command;

use qiso_core::equitable::{parse_ds, verify_ds_witness};
use qiso_core::graph::parse_graph;
use tempfile::TempDir;

fn qiso(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qiso")).args(args).output().unwrap();
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const C6: &str = "v a\nv b\nv c\nv d\nv e\nv f\ne a b\ne b c\ne c d\ne d e\ne e f\ne f a\n";
const TWO_K3: &str = "v 1\nv 2\nv 3\nv 4\nv 5\nv 6\ne 1 2\ne 2 3\ne 1 3\ne 4 5\ne 5 6\ne 4 6\n";
const C5: &str = "v 0\nv 1\nv 2\nv 3\nv 4\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n";
const MAGIC: &str = "x1 + x2 + x3 = 0\nx4 + x5 + x6 = 0\nx7 + x8 + x9 = 0\n\
                     x1 + x4 + x7 = 0\nx2 + x5 + x8 = 0\nx3 + x6 + x9 = 1\n";

/// Writes the magic-square pair and its certificate through the demo.
fn demo_files(dir: &TempDir) -> PathBuf {
    let out = dir.path().join("demo");
    let (code, stdout, _) = qiso(&["quantum", "mermin-demo", "--out", path(&out)]);
    assert_eq!(code, 0, "{stdout}");
    out
}

#[test]
fn magic_square_pair_is_not_isomorphic() {
    let dir = TempDir::new().unwrap();
    let ms = write(dir.path(), "ms.bcs", MAGIC);
    let gf = dir.path().join("gf.g");
    let gf0 = dir.path().join("gf0.g");
    assert_eq!(qiso(&["bcs", "to-graph", &ms, "--out", path(&gf)]).0, 0);
    assert_eq!(qiso(&["bcs", "to-graph", &ms, "--homogeneous", "--out", path(&gf0)]).0, 0);
    let (code, stdout, _) = qiso(&["graph", "iso", path(&gf), path(&gf0)]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("NOT ISOMORPHIC\n"), "{stdout}");
    let (code, stdout, _) = qiso(&["graph", "cospectral", path(&gf), path(&gf0)]);
    assert_eq!(code, 0);
    assert!(stdout.contains("complements cospectral: yes"));
}

#[test]
fn to_graph_stdout_is_a_graph_file() {
    let dir = TempDir::new().unwrap();
    let ms = write(dir.path(), "ms.bcs", MAGIC);
    let (code, stdout, _) = qiso(&["bcs", "to-graph", &ms]);
    assert_eq!(code, 0);
    let g = parse_graph(&stdout).unwrap();
    assert_eq!((g.n(), g.edge_count()), (24, 108));
    let (code, stdout, _) = qiso(&["bcs", "magic-square"]);
    assert_eq!(code, 0);
    assert_eq!(qiso_core::parse_bcs(&stdout).unwrap(), qiso_core::magic_square());
}

#[test]
fn isomorphic_pair_prints_a_map() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.g", C5);
    let b = write(dir.path(), "b.g", "v 0\nv 1\nv 2\nv 3\nv 4\ne 0 2\ne 2 4\ne 4 1\ne 1 3\ne 3 0\n");
    let map = dir.path().join("map.txt");
    let (code, stdout, _) = qiso(&["graph", "iso", &a, &b, "--out", path(&map)]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("ISOMORPHIC\n"));
    assert_eq!(fs::read_to_string(&map).unwrap().lines().count(), 5);
}

#[test]
fn fractional_iso_writes_a_verified_witness() {
    let dir = TempDir::new().unwrap();
    let c6 = write(dir.path(), "c6.g", C6);
    let k3 = write(dir.path(), "2k3.g", TWO_K3);
    let w = dir.path().join("d.txt");
    let (code, stdout, _) = qiso(&["graph", "fractional-iso", &c6, &k3, "--out", path(&w)]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("FRACTIONALLY ISOMORPHIC\n"));
    let d = parse_ds(&fs::read_to_string(&w).unwrap()).unwrap();
    let (g, h) = (parse_graph(C6).unwrap(), parse_graph(TWO_K3).unwrap());
    assert_eq!(verify_ds_witness(&g, &h, &d).unwrap(), Ok(()));

    let star = write(dir.path(), "star.g", "v 0\nv 1\nv 2\nv 3\ne 0 1\ne 0 2\ne 0 3\n");
    let p4 = write(dir.path(), "p4.g", "v 0\nv 1\nv 2\nv 3\ne 0 1\ne 1 2\ne 2 3\n");
    let (code, stdout, _) = qiso(&["graph", "fractional-iso", &star, &p4]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("NOT FRACTIONALLY ISOMORPHIC\n"));
}

#[test]
fn cospectral_and_alpha() {
    let dir = TempDir::new().unwrap();
    let c6 = write(dir.path(), "c6.g", C6);
    let k3 = write(dir.path(), "2k3.g", TWO_K3);
    let (code, stdout, _) = qiso(&["graph", "cospectral", &c6, &k3]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("NOT COSPECTRAL\n"));
    let c5 = write(dir.path(), "c5.g", C5);
    let (code, stdout, _) = qiso(&["graph", "alpha", &c5]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("alpha = 2\n"));
}

#[test]
fn ns_build_and_verify() {
    let dir = TempDir::new().unwrap();
    let c6 = write(dir.path(), "c6.g", C6);
    let k3 = write(dir.path(), "2k3.g", TWO_K3);
    let corr = dir.path().join("p.corr");
    let (code, stdout, _) = qiso(&["ns", "build", &c6, &k3, "--out", path(&corr)]);
    assert_eq!(code, 0, "{stdout}");
    let (code, stdout, _) = qiso(&["ns", "verify", path(&corr), "--graphs", &c6, &k3]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("PERFECT STRATEGY\n"));
    // Against the graphs in the other order the tokens do not line up.
    assert_eq!(qiso(&["ns", "verify", path(&corr), "--graphs", &k3, &c6]).0, 2);

    // Moving all mass of one question pair to a single answer signals.
    let text = fs::read_to_string(&corr).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first = lines.iter().position(|l| l.split_whitespace().count() == 5).unwrap();
    let fields: Vec<String> = lines[first].split_whitespace().map(String::from).collect();
    let (xa, xb) = (fields[0].to_string(), fields[1].to_string());
    lines.retain(|l| {
        let f: Vec<&str> = l.split_whitespace().collect();
        !(f.len() == 5 && f[0] == xa && f[1] == xb)
    });
    lines.push(format!("{xa} {xb} {} {} 1/1", fields[2], fields[3]));
    let bad = write(dir.path(), "bad.corr", &(lines.join("\n") + "\n"));
    let (code, stdout, _) = qiso(&["ns", "verify", &bad]);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.starts_with("INVALID CORRELATION\n"));

    let star = write(dir.path(), "star.g", "v 0\nv 1\nv 2\nv 3\ne 0 1\ne 0 2\ne 0 3\n");
    let p4 = write(dir.path(), "p4.g", "v 0\nv 1\nv 2\nv 3\ne 0 1\ne 1 2\ne 2 3\n");
    assert_eq!(qiso(&["ns", "build", &star, &p4]).0, 1);
}

#[test]
fn pr_box_file_verifies() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("corr 2 exact\n0 1\n");
    for x in 0..2 {
        for xp in 0..2 {
            for y in 0..2 {
                for yp in 0..2 {
                    if (y ^ yp) == (x & xp) {
                        text.push_str(&format!("{x} {xp} {y} {yp} 1/2\n"));
                    }
                }
            }
        }
    }
    let f = write(dir.path(), "pr.corr", &text);
    let (code, stdout, stderr) = qiso(&["ns", "verify", &f]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.starts_with("VALID CORRELATION\n"));
}

#[test]
fn bcs_commands() {
    let dir = TempDir::new().unwrap();
    let ms = write(dir.path(), "ms.bcs", MAGIC);
    let (code, stdout, _) = qiso(&["bcs", "check", &ms]);
    assert_eq!((code, stdout.as_str()), (1, "UNSATISFIABLE\n"));
    let sat = write(dir.path(), "sat.bcs", "x1 + x2 = 1\nx2 + x3 = 1\n");
    let (code, stdout, _) = qiso(&["bcs", "check", &sat]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("SATISFIABLE\n"));
    let one = write(dir.path(), "one.bcs", "x1 = 1\n");
    let (code, stdout, _) = qiso(&["bcs", "report", &one]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("ISOMORPHIC\n"));
    let (code, stdout, _) = qiso(&["bcs", "report", &ms]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("QUANTUM ISOMORPHIC, NOT ISOMORPHIC\n"));
    let contra = write(dir.path(), "c.bcs", "x1 + x2 = 0\nx1 + x2 = 1\n");
    let (code, stdout, _) = qiso(&["bcs", "report", &contra]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("NOT ISOMORPHIC, NO QUANTUM STRATEGY\n"));
}

#[test]
fn certificate_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let demo = demo_files(&dir);
    for f in ["magic_square.bcs", "g_f.g", "g_f0.g", "certificate.json", "strategy.json"] {
        assert!(demo.join(f).exists(), "{f}");
    }
    let (gf, gf0, cert) = (demo.join("g_f.g"), demo.join("g_f0.g"), demo.join("certificate.json"));
    let (code, stdout, _) = qiso(&["quantum", "certify", path(&gf), path(&gf0), path(&cert)]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("CERTIFICATE VALID\n"));

    let corr = dir.path().join("q.corr");
    let (code, stdout, _) = qiso(&["quantum", "correlation", path(&gf), path(&gf0), path(&cert), "--out", path(&corr)]);
    assert_eq!(code, 0, "{stdout}");
    let (code, stdout, _) = qiso(&["ns", "verify", path(&corr), "--graphs", path(&gf), path(&gf0)]);
    assert_eq!(code, 0, "{stdout}");

    // G_F0 labels name no vertex of G_F.
    let (code, stdout, _) = qiso(&["quantum", "certify", path(&gf), path(&gf), path(&cert)]);
    assert_eq!(code, 2, "{stdout}");

    // Drop one block: row and column sums fail.
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    doc["entries"].as_array_mut().unwrap().pop();
    let bad = write(dir.path(), "bad.json", &doc.to_string());
    let (code, stdout, _) = qiso(&["quantum", "certify", path(&gf), path(&gf0), &bad]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("CERTIFICATE INVALID\n"));
    let (code, _, _) = qiso(&["quantum", "correlation", path(&gf), path(&gf0), &bad]);
    assert_eq!(code, 1);
}

#[test]
fn packing_value() {
    let dir = TempDir::new().unwrap();
    let c5 = write(dir.path(), "c5.g", C5);
    let pack = r#"{"d":1,"entries":[{"vertex":"0","matrix":[[[1,0]]]},{"vertex":"2","matrix":[[[1,0]]]}]}"#;
    let p = write(dir.path(), "p.json", pack);
    let (code, stdout, _) = qiso(&["quantum", "packing", &c5, &p]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("PACKING VALUE 2\n"));
    let adjacent = r#"{"d":1,"entries":[{"vertex":"0","matrix":[[[1,0]]]},{"vertex":"1","matrix":[[[1,0]]]}]}"#;
    let p = write(dir.path(), "q.json", adjacent);
    assert_eq!(qiso(&["quantum", "packing", &c5, &p]).0, 1);
    let unknown = r#"{"d":1,"entries":[{"vertex":"9","matrix":[[[1,0]]]}]}"#;
    let p = write(dir.path(), "r.json", unknown);
    assert_eq!(qiso(&["quantum", "packing", &c5, &p]).0, 2);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let c5 = write(dir.path(), "c5.g", C5);
    let bad = write(dir.path(), "bad.g", "v a\ne a b\n");
    assert_eq!(qiso(&["graph", "alpha", "/nonexistent/file.g"]).0, 2);
    let (code, _, stderr) = qiso(&["graph", "alpha", &bad]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");
    assert_eq!(qiso(&["graph", "frobnicate", &c5]).0, 2);
    assert_eq!(qiso(&[]).0, 2);
    assert_eq!(qiso(&["graph", "alpha", &c5, "--tol", "-1"]).0, 2);
    assert_eq!(qiso(&["graph", "alpha", &c5, "--tol", "abc"]).0, 2);
    let big: String = (0..129).map(|i| format!("v {i}\n")).collect();
    let big = write(dir.path(), "big.g", &big);
    assert_eq!(qiso(&["graph", "alpha", &big]).0, 2);
    let bcs = write(dir.path(), "bad.bcs", "x1 + x2 = 2\n");
    assert_eq!(qiso(&["bcs", "check", &bcs]).0, 2);
    assert_eq!(qiso(&["--help"]).0, 0);
}

#[test]
fn json_reports_have_the_documented_keys() {
    let (code, stdout, _) = qiso(&["quantum", "mermin-demo", "--json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "residuals", "timings", "verdict", "witnesses"]);
    assert_eq!(doc["command"], "quantum mermin-demo");
    assert_eq!(doc["verdict"], "QUANTUM ISOMORPHIC, NOT ISOMORPHIC");
    for (_, v) in doc["residuals"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() <= 1e-12);
    }
    assert_eq!(doc["timings"], serde_json::json!({}));
    let (_, timed, _) = qiso(&["quantum", "mermin-demo", "--json", "--timings"]);
    let timed: serde_json::Value = serde_json::from_str(&timed).unwrap();
    assert!(timed["timings"]["report"].as_f64().is_some());
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let c6 = write(dir.path(), "c6.g", C6);
    let k3 = write(dir.path(), "2k3.g", TWO_K3);
    for args in [
        vec!["quantum", "mermin-demo"],
        vec!["graph", "fractional-iso", &c6, &k3, "--json"],
        vec!["ns", "build", &c6, &k3],
    ] {
        assert_eq!(qiso(&args), qiso(&args));
    }
}

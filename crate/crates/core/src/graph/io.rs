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

//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! v a
//! v b
//! e a b
//! ```
//!
//! `v` lines fix the index order. Every label named by an `e` line must have
//! been declared.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen_edges: HashSet<(usize, usize)> = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let directive = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        match directive {
            "v" => {
                let [label] = args[..] else {
                    return Err(Error::parse(line_no, "expected `v <label>`"));
                };
                if index.contains_key(label) {
                    return Err(Error::parse(line_no, format!("duplicate vertex {label:?}")));
                }
                index.insert(label.to_string(), labels.len());
                labels.push(label.to_string());
            }
            "e" => {
                let [a, b] = args[..] else {
                    return Err(Error::parse(line_no, "expected `e <label> <label>`"));
                };
                let lookup = |l: &str| {
                    index
                        .get(l)
                        .copied()
                        .ok_or_else(|| Error::parse(line_no, format!("undeclared vertex {l:?}")))
                };
                let (u, v) = (lookup(a)?, lookup(b)?);
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop at {a:?}")));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return Err(Error::parse(line_no, format!("duplicate edge {a} {b}")));
                }
                edges.push((u, v));
            }
            other => {
                return Err(Error::parse(line_no, format!("unknown directive {other:?}")));
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "empty vertex set"));
    }
    Graph::from_edges(labels, edges)
}

/// Emits `v` lines in sorted label order, then `e` lines sorted
/// lexicographically with the smaller label first on each line.
pub fn write_graph(g: &Graph) -> String {
    let mut labels: Vec<&str> = g.labels().iter().map(String::as_str).collect();
    labels.sort_unstable();
    let mut edges: Vec<(&str, &str)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort_unstable();

    let mut out = String::new();
    for l in labels {
        writeln!(out, "v {l}").unwrap();
    }
    for (a, b) in edges {
        writeln!(out, "e {a} {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        let g = parse_graph("v a\nv b\ne a b").unwrap();
        assert_eq!(g.labels(), ["a", "b"]);
        assert!(g.adjacent(0, 1) && g.adjacent(1, 0));
    }

    #[test]
    fn parses_triangle_with_comments() {
        let g = parse_graph("# K3\nv a\nv b\nv c\n\ne a b\ne b c\ne a c\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn self_loop_is_rejected_with_line() {
        let err = parse_graph("v a\ne a a").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "self-loop at \"a\"".into()
            }
        );
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn other_errors() {
        let msg = |t: &str| parse_graph(t).unwrap_err().to_string();
        assert!(msg("v a\nv b\ne a b\ne b a").contains("duplicate edge"));
        assert!(msg("v a\nx a").contains("unknown directive"));
        assert!(msg("# nothing\n").contains("empty vertex set"));
        assert!(msg("v a\ne a b").contains("undeclared"));
        assert!(msg("v a\nv a").contains("duplicate vertex"));
    }

    #[test]
    fn writer_sorts() {
        let g = parse_graph("v z\nv a\nv m\ne z a\ne m z").unwrap();
        assert_eq!(write_graph(&g), "v a\nv m\nv z\ne a z\ne m z\n");
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(write_graph(&back), write_graph(&g));
    }
}

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

//! Text and JSON rendering of command results.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Result of one command: a verdict, the residuals and witnesses that
/// support it, and optional stage timings.
pub struct Report {
    command: String,
    verdict: String,
    holds: bool,
    text: String,
    residuals: Map<String, Value>,
    witnesses: Map<String, Value>,
    timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            verdict: String::new(),
            holds: false,
            text: String::new(),
            residuals: Map::new(),
            witnesses: Map::new(),
            timings: Vec::new(),
        }
    }

    pub fn verdict(&mut self, holds: bool, verdict: &str) {
        self.holds = holds;
        self.verdict = verdict.to_string();
    }

    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.text, "{}", s.as_ref());
    }

    pub fn residual(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), json!(value));
    }

    pub fn witness(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("witnesses serialise");
        self.witnesses.insert(key.to_string(), v);
    }

    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((stage.to_string(), start.elapsed().as_secs_f64() * 1e3));
        out
    }

    pub fn render(&self, as_json: bool, timings: bool) -> String {
        if as_json {
            let mut t = Map::new();
            if timings {
                for (stage, ms) in &self.timings {
                    t.insert(stage.clone(), json!(ms));
                }
            }
            let doc = json!({
                "command": self.command,
                "verdict": self.verdict,
                "residuals": self.residuals,
                "witnesses": self.witnesses,
                "timings": t,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialise");
            s.push('\n');
            return s;
        }
        let mut s = format!("{}\n", self.verdict);
        s.push_str(&self.text);
        if timings {
            for (stage, ms) in &self.timings {
                let _ = writeln!(s, "time {stage}: {ms:.3} ms");
            }
        }
        s
    }
}

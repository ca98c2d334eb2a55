//! Deterministic reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde_json::{json, Map, Value};

/// One named check: its payload and the violations it found.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub results: Value,
    pub violations: Vec<String>,
}

impl Section {
    pub fn new(results: Value) -> Self {
        Section {
            results,
            violations: Vec::new(),
        }
    }

    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub input_sha256: String,
    pub seed: Option<u64>,
    pub sections: BTreeMap<String, Section>,
}

impl Report {
    pub fn passes(&self) -> bool {
        self.sections.values().all(Section::passes)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passes() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut results = Map::new();
        let mut verdicts = Map::new();
        for (name, s) in &self.sections {
            results.insert(name.clone(), s.results.clone());
            verdicts.insert(
                name.clone(),
                json!({
                    "status": verdict(s.passes()),
                    "violations": s.violations,
                }),
            );
        }
        json!({
            "command": self.command,
            "args": self.args,
            "input_sha256": self.input_sha256,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "results": results,
            "verdicts": verdicts,
            "verdict": verdict(self.passes()),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.args {
            let _ = writeln!(out, "  --{k} {v}");
        }
        let _ = writeln!(out, "input_sha256: {}", self.input_sha256);
        match self.seed {
            Some(s) => {
                let _ = writeln!(out, "seed: {s}");
            }
            None => {
                let _ = writeln!(out, "seed: none");
            }
        }
        let _ = writeln!(out, "version: {}", env!("CARGO_PKG_VERSION"));
        for (name, s) in &self.sections {
            let _ = writeln!(out, "[{name}] {}", verdict(s.passes()));
            for v in &s.violations {
                let _ = writeln!(out, "  violation: {v}");
            }
            flatten(&mut out, name, &s.results);
        }
        let _ = writeln!(out, "verdict: {}", verdict(self.passes()));
        out
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn flatten(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(out, &format!("{prefix}.{k}"), x);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(out, &format!("{prefix}[{i}]"), x);
            }
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            let _ = writeln!(out, "  {prefix} = [{}]", items.join(", "));
        }
        _ => {
            let _ = writeln!(out, "  {prefix} = {}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// `p/q`, or `p` for integers.
pub fn rat(r: Rational64) -> Value {
    Value::String(r.to_string())
}

pub fn opt_rat(r: Option<Rational64>) -> Value {
    r.map_or(Value::Null, rat)
}

/// Three significant digits in scientific notation.
pub fn sci(x: f64) -> Value {
    Value::String(format!("{x:.2e}"))
}

pub fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::String(x.to_string())).collect())
}

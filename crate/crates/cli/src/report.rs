//! The report envelope shared by every subcommand.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

/// How numbers in `results` should be read.
#[derive(Debug, Clone, Copy)]
pub enum Numerics {
    /// Integers, rationals and quadratic irrationals computed exactly.
    Exact,
    /// Floating-point values on the circle `R/Z` (unit: turns), checked
    /// against `tolerance`.
    Float { tolerance: f64 },
}

pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub numerics: Numerics,
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            results,
            numerics: Numerics::Exact,
            seed: None,
        }
    }

    pub fn float(mut self, tolerance: f64) -> Self {
        self.numerics = Numerics::Float { tolerance };
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_value(&self) -> Value {
        let numerics = match self.numerics {
            Numerics::Exact => json!({ "exact": true }),
            Numerics::Float { tolerance } => json!({
                "exact": false,
                "tolerance": tolerance,
                "units": "turns (R/Z)",
            }),
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "numerics": numerics,
            "provenance": {
                "tool": "hypleaf",
                "version": env!("CARGO_PKG_VERSION"),
                "seed": self.seed,
            },
        })
    }

    pub fn to_json(&self) -> String {
        // serde_json's default map is ordered, so keys come out sorted.
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    /// One `path<TAB>value` line per leaf, in key order.
    pub fn to_tsv(&self) -> String {
        let mut lines = vec!["key\tvalue".to_string()];
        flatten("", &self.to_value(), &mut lines);
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => flatten_map(map, &join, out),
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}\t{s}")),
        other => out.push(format!("{prefix}\t{other}")),
    }
}

fn flatten_map(map: &Map<String, Value>, join: &dyn Fn(&str) -> String, out: &mut Vec<String>) {
    for (k, x) in map {
        flatten(&join(k), x, out);
    }
}

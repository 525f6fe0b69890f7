//! Machine-readable run reports.
//!
//! A report is one JSON object:
//!
//! | key              | content                                              |
//! |------------------|------------------------------------------------------|
//! | `schema_version` | integer, currently 1                                 |
//! | `command`        | subcommand name                                      |
//! | `parameters`     | every argument that influences the result            |
//! | `seed`           | RNG seed, or `null` for commands that draw nothing   |
//! | `fields`         | field orders used, ascending                         |
//! | `verdicts`       | per-item results, in a deterministic order           |
//! | `aggregates`     | summary statistics                                   |
//! | `timings`        | wall-clock seconds; present only when requested      |
//!
//! Top-level keys appear in the order above and nested object keys in sorted
//! order. Big integers are decimal strings. The same inputs therefore give
//! byte-identical output.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::LogBound;
use crate::census_file::format_matroid;
use crate::enumerate::{CensusReport, HistogramRow, SampleReport};
use crate::gf::GfMatrix;
use crate::matroid::Matroid;
use crate::patterns::{pattern_indices, PatternSet};
use crate::represent::RepSummary;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub fields: Vec<usize>,
    pub verdicts: Vec<Value>,
    pub aggregates: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: Map::new(),
            seed: None,
            fields: Vec::new(),
            verdicts: Vec::new(),
            aggregates: Map::new(),
            timings: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn aggregate(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.aggregates.insert(key.to_string(), value.into());
        self
    }

    pub fn timing(&mut self, key: &str, seconds: f64) -> &mut Self {
        self.timings
            .get_or_insert_with(Map::new)
            .insert(key.to_string(), json!(seconds));
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are serializable");
        s.push('\n');
        s
    }
}

pub fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

pub fn log_bound(b: &LogBound, digits: usize) -> Value {
    json!({ "value": b.to_decimal(digits), "radius": b.radius })
}

pub fn matroid(m: &Matroid) -> Value {
    json!({ "n": m.n(), "r": m.rank(), "bases": format_matroid(m) })
}

pub fn matrix(a: &GfMatrix) -> Value {
    json!(a.to_rows())
}

pub fn rep_summary(m: &Matroid, s: &RepSummary) -> Value {
    let per_field: Vec<Value> = s
        .per_field
        .iter()
        .map(|f| {
            json!({
                "q": f.q,
                "status": f.result.status.as_str(),
                "nodes": f.result.stats.nodes,
                "matrix": f.matrix.as_ref().map(matrix),
            })
        })
        .collect();
    json!({
        "matroid": matroid(m),
        "verdict": s.verdict.as_str(),
        "found_over": s.found_over(),
        "per_field": per_field,
    })
}

fn histogram(rows: impl Iterator<Item = (usize, HistogramRow)>) -> Value {
    Value::Array(
        rows.map(|(k, row)| json!({ "key": k, "items": row.items, "representable": row.representable }))
            .collect(),
    )
}

pub fn census_verdicts(r: &CensusReport) -> Vec<Value> {
    r.items
        .iter()
        .map(|v| {
            let per_field: Vec<Value> = v
                .per_field
                .iter()
                .map(|(q, st)| json!({ "q": q, "status": st.as_str() }))
                .collect();
            json!({
                "matroid": matroid(&v.matroid),
                "verdict": v.verdict.as_str(),
                "per_field": per_field,
                "nodes": v.nodes,
                "labeled_weight": big(&v.weight),
            })
        })
        .collect()
}

pub fn census_aggregates(r: &CensusReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("unlabeled_total".into(), json!(r.unlabeled_total));
    m.insert("unlabeled_representable".into(), json!(r.unlabeled_representable));
    m.insert("unlabeled_fraction".into(), json!(r.unlabeled_fraction()));
    m.insert("labeled_total".into(), big(&r.labeled_total));
    m.insert("labeled_representable".into(), big(&r.labeled_representable));
    m.insert("labeled_fraction".into(), json!(r.labeled_fraction()));
    m.insert("inconclusive".into(), json!(r.inconclusive));
    m.insert("not_over_tested_fields".into(), json!(r.not_over_tested_fields));
    m.insert(
        "rank_distribution".into(),
        histogram(r.rank_distribution.iter().map(|(k, v)| (*k, v.clone()))),
    );
    m.insert(
        "nonbasis_histogram".into(),
        histogram(r.nonbasis_histogram.iter().map(|(k, v)| (*k, v.clone()))),
    );
    m
}

pub fn pattern_verdicts(set: &PatternSet) -> Vec<Value> {
    set.iter()
        .map(|(p, w)| {
            json!({
                "nonzero_set": pattern_indices(p),
                "witness": { "q": w.q, "point": w.point },
            })
        })
        .collect()
}

pub fn sample_verdicts(s: &SampleReport) -> Vec<Value> {
    s.trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let nonbases: Vec<Vec<usize>> = t.nonbases.iter().map(|b| b.elements().collect()).collect();
            json!({
                "trial": i,
                "nonbases": nonbases,
                "is_matroid": t.is_matroid,
                "verdict": t.verdict.map(|v| v.as_str()),
            })
        })
        .collect()
}

pub fn sample_aggregates(s: &SampleReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("trials".into(), json!(s.trials.len()));
    m.insert("nonbasis_count".into(), json!(s.nonbasis_count));
    m.insert("matroids".into(), json!(s.matroids));
    m.insert("representable".into(), json!(s.representable));
    m.insert("matroid_rate".into(), json!(s.matroid_rate()));
    m.insert("representable_rate".into(), json!(s.representable_rate()));
    m
}

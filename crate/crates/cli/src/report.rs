//! Run reports as `key value` text or JSON.
//!
//! Task, worker and station numbers are 1-based, as in the instance format.

use std::fmt::Write as _;

use alwabp_core::bounds::BoundReport;
use alwabp_core::{Instance, Load, Solution};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub tasks: usize,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundLine {
    pub name: String,
    pub value: Load,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultBlock {
    pub value: Option<Load>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic_value: Option<Load>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionBlock {
    pub worker_order: Vec<usize>,
    pub assignment: Vec<usize>,
    pub loads: Vec<Load>,
}

impl SolutionBlock {
    pub fn new(inst: &Instance, sol: &Solution) -> Self {
        Self {
            worker_order: sol.worker_order.iter().map(|w| w + 1).collect(),
            assignment: sol.assignment.iter().map(|w| w + 1).collect(),
            loads: sol.loads(inst),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub instance: InstanceSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub log: Vec<String>,
}

impl Report {
    pub fn new(config: RunConfig, inst: &Instance) -> Self {
        Self {
            config,
            instance: InstanceSummary {
                tasks: inst.n_tasks(),
                workers: inst.n_workers(),
            },
            bounds: Vec::new(),
            result: None,
            solution: None,
            log: Vec::new(),
        }
    }

    /// Elapsed seconds, or `None` when timings are off.
    pub fn timing(&self, seconds: f64) -> Option<f64> {
        self.config.timings.then_some(seconds)
    }

    pub fn set_bounds(&mut self, report: &BoundReport) {
        self.bounds = report
            .entries
            .iter()
            .map(|e| BoundLine {
                name: e.name.to_string(),
                value: e.value,
                elapsed_s: self.timing(e.elapsed),
            })
            .collect();
    }

    pub fn render(&self) -> String {
        if self.config.json {
            let mut text = serde_json::to_string_pretty(self).expect("report serializes");
            text.push('\n');
            return text;
        }
        let mut out = String::new();
        let config = serde_json::to_value(&self.config).expect("config serializes");
        flatten(&mut out, "config", &config);
        writeln!(out, "tasks {}", self.instance.tasks).unwrap();
        writeln!(out, "workers {}", self.instance.workers).unwrap();
        for b in &self.bounds {
            writeln!(out, "{} {}", b.name, b.value).unwrap();
            if let Some(s) = b.elapsed_s {
                writeln!(out, "time {} {s:.6}", b.name).unwrap();
            }
        }
        if let Some(r) = &self.result {
            match r.value {
                Some(v) => writeln!(out, "value {v}").unwrap(),
                None => writeln!(out, "value none").unwrap(),
            }
            writeln!(out, "status {}", r.status).unwrap();
            if let Some(n) = r.nodes {
                writeln!(out, "nodes {n}").unwrap();
            }
            if let Some(h) = r.heuristic_value {
                writeln!(out, "heuristic_value {h}").unwrap();
            }
            if let Some(s) = r.elapsed_s {
                writeln!(out, "elapsed_s {s:.6}").unwrap();
            }
        }
        if let Some(s) = &self.solution {
            writeln!(out, "worker_order {}", join(&s.worker_order)).unwrap();
            writeln!(out, "assignment {}", join(&s.assignment)).unwrap();
            writeln!(out, "loads {}", join(&s.loads)).unwrap();
        }
        for line in &self.log {
            writeln!(out, "log {line}").unwrap();
        }
        out
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn flatten(out: &mut String, prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                flatten(out, &format!("{prefix}.{key}"), v);
            }
        }
        Value::String(s) => writeln!(out, "{prefix} {s}").unwrap(),
        Value::Null => writeln!(out, "{prefix} none").unwrap(),
        other => writeln!(out, "{prefix} {other}").unwrap(),
    }
}

//! Effective settings of a run, embedded in every report.

use std::time::Duration;

use alwabp_core::bounds::{BoundsConfig, DEFAULT_L1_ITERS, DEFAULT_L2_ITERS};
use alwabp_core::heuristic::IpbsParams;
use alwabp_core::Variability;
use serde::Serialize;

use crate::args::{CapArgs, HeuristicArgs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicConfig {
    pub enabled: bool,
    pub width: usize,
    pub factor: usize,
    pub interval: f64,
    pub t_min_s: f64,
    pub t_max_s: f64,
    pub repetitions: usize,
}

impl HeuristicConfig {
    /// Overrides applied to `base`; the time limit caps both search times.
    pub fn resolve(base: &IpbsParams, args: &HeuristicArgs, time_limit: Option<f64>) -> Self {
        let cap = |v: f64| time_limit.map_or(v, |limit| v.min(limit));
        Self {
            enabled: true,
            width: args.width.unwrap_or(base.width),
            factor: args.factor.unwrap_or(base.factor),
            interval: args.interval.unwrap_or(base.interval),
            t_min_s: cap(args.t_min.unwrap_or(base.t_min.as_secs_f64())),
            t_max_s: cap(args.t_max.unwrap_or(base.t_max.as_secs_f64())),
            repetitions: args.repetitions.unwrap_or(base.repetitions),
        }
    }

    pub fn params(&self, seed: u64, bounds: BoundsConfig) -> IpbsParams {
        IpbsParams {
            width: self.width,
            factor: self.factor,
            interval: self.interval,
            t_min: Duration::from_secs_f64(self.t_min_s),
            t_max: Duration::from_secs_f64(self.t_max_s),
            repetitions: self.repetitions,
            seed,
            lower_bound: None,
            bounds,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.width == 0 || self.factor == 0 || self.repetitions == 0 {
            return Err("width, factor and repetitions must be positive".into());
        }
        if !(self.interval > 0.0 && self.interval < 1.0) {
            return Err(format!("interval {} outside (0, 1)", self.interval));
        }
        for t in [self.t_min_s, self.t_max_s] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(format!("search time {t} is not a non-negative number"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCaps {
    pub l1_iters: usize,
    pub l2_iters: usize,
}

impl BoundCaps {
    pub fn resolve(args: &CapArgs) -> Self {
        Self {
            l1_iters: args.l1_iters.unwrap_or(DEFAULT_L1_ITERS),
            l2_iters: args.l2_iters.unwrap_or(DEFAULT_L2_ITERS),
        }
    }

    pub fn apply(self, mut config: BoundsConfig) -> BoundsConfig {
        config.l1_iters = self.l1_iters;
        config.l2_iters = self.l2_iters;
        config
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerateConfig {
    pub variability: Variability,
    pub infeasibility: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub path: String,
    pub seed: u64,
    pub time_limit_s: Option<f64>,
    pub json: bool,
    pub verbose: bool,
    pub timings: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<HeuristicConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundCaps>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reductions: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenerateConfig>,
}

//! Batch plumbing shared by the command-line tool and the examples: benchmark
//! records and aggregates, solution verification, instance summaries and
//! `key=value` parameter files.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{validate_route, within_capacity, Instance, ModelError, Route};
use crate::oracle::{exact_solve, lower_bound, OracleLimits};
use crate::pricing::{default_params, IhhParams, PricingError};
use crate::solver::{solve, SolveConfig, SolveError, SolveReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEEDS: std::ops::Range<u64> = 0..10;
pub const COST_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no instances to benchmark")]
    Empty,
    #[error("instance {id}: {source}")]
    Solve { id: String, source: SolveError },
    #[error("instance {id}: {source}")]
    Params { id: String, source: PricingError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One (instance, seed) solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema: u32,
    pub instance: String,
    pub group: String,
    pub seed: u64,
    pub cost: f64,
    pub feasible: bool,
    pub seconds: f64,
    pub reroutes: u64,
    pub hurdle_activations: u64,
    pub feaspath_reroutes: u64,
    pub main_loop_iterations: u32,
    pub feasible_before_feaspath: bool,
    pub lb_ratio: Option<f64>,
    pub oracle_ratio: Option<f64>,
}

impl BenchRecord {
    pub fn from_report(
        instance: &str,
        group: &str,
        seed: u64,
        report: &SolveReport,
        lower_bound: Option<f64>,
        optimum: Option<f64>,
    ) -> Self {
        let ratio = |r: Option<f64>| r.filter(|&v| v > 0.0).map(|v| report.total_cost / v);
        BenchRecord {
            schema: SCHEMA_VERSION,
            instance: instance.to_string(),
            group: group.to_string(),
            seed,
            cost: report.total_cost,
            feasible: report.feasible,
            seconds: report.wall_time,
            reroutes: report.total_reroutes(),
            hurdle_activations: report.hurdle_activations,
            feaspath_reroutes: report.feaspath_reroutes,
            main_loop_iterations: report.main_loop_iterations,
            feasible_before_feaspath: report.feasible_before_feaspath,
            lb_ratio: ratio(lower_bound),
            oracle_ratio: if report.feasible {
                ratio(optimum)
            } else {
                None
            },
        }
    }
}

/// An instance queued for benchmarking.
#[derive(Debug, Clone)]
pub struct BenchJob {
    pub id: String,
    pub group: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, Default)]
pub struct BenchOptions {
    pub seeds: Vec<u64>,
    /// Parameters overriding the per-instance defaults.
    pub overrides: ParamOverrides,
    /// Also run the exact oracle and record heuristic/optimal ratios.
    pub oracle: bool,
    pub oracle_limits: OracleLimits,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

/// Runs every (job, seed) pair on a bounded pool. Records come back sorted by
/// (instance, seed) regardless of scheduling.
pub fn run_bench(
    jobs: &[BenchJob],
    options: &BenchOptions,
) -> Result<Vec<BenchRecord>, HarnessError> {
    if jobs.is_empty() {
        return Err(HarnessError::Empty);
    }
    let prepared: Vec<(IhhParams, Option<f64>, Option<f64>)> =
        jobs.iter()
            .map(|j| {
                let params = options.overrides.resolve(&j.instance).map_err(|source| {
                    HarnessError::Params {
                        id: j.id.clone(),
                        source,
                    }
                })?;
                let lb = lower_bound(&j.instance);
                let opt = if options.oracle {
                    exact_solve(&j.instance, &options.oracle_limits)
                        .ok()
                        .and_then(|r| r.optimal_cost)
                } else {
                    None
                };
                Ok((params, lb, opt))
            })
            .collect::<Result<_, HarnessError>>()?;

    let tasks: Vec<(usize, u64)> = (0..jobs.len())
        .flat_map(|j| options.seeds.iter().map(move |&s| (j, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .expect("thread pool");
    let mut records = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(j, seed)| {
                let job = &jobs[j];
                let (params, lb, opt) = prepared[j];
                let report =
                    solve(&job.instance, &SolveConfig::new(params, seed)).map_err(|source| {
                        HarnessError::Solve {
                            id: job.id.clone(),
                            source,
                        }
                    })?;
                Ok(BenchRecord::from_report(
                    &job.id, &job.group, seed, &report, lb, opt,
                ))
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    })?;
    records.sort_by(|a, b| a.instance.cmp(&b.instance).then(a.seed.cmp(&b.seed)));
    Ok(records)
}

/// Per-instance statistics over seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchAggregate {
    pub schema: u32,
    pub instance: String,
    pub group: String,
    pub runs: usize,
    pub feasible_runs: usize,
    pub mean_seconds: f64,
    pub best_seconds: f64,
    pub worst_seconds: f64,
    pub mean_cost: f64,
    pub best_cost: f64,
    pub worst_cost: f64,
    /// Sample standard deviation of cost over the mean.
    pub cost_cv: f64,
    pub mean_lb_ratio: Option<f64>,
    pub mean_oracle_ratio: Option<f64>,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation divided by the mean; 0 for fewer than two values.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    if m == 0.0 {
        0.0
    } else {
        var.sqrt() / m
    }
}

/// Groups records by instance, in instance-id order.
pub fn aggregate(records: &[BenchRecord]) -> Vec<BenchAggregate> {
    let mut groups: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(&r.instance).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(id, rs)| {
            let costs: Vec<f64> = rs.iter().map(|r| r.cost).collect();
            let secs: Vec<f64> = rs.iter().map(|r| r.seconds).collect();
            let opt_mean = |f: fn(&BenchRecord) -> Option<f64>| {
                let v: Vec<f64> = rs.iter().filter_map(|r| f(r)).collect();
                (!v.is_empty()).then(|| mean(&v))
            };
            BenchAggregate {
                schema: SCHEMA_VERSION,
                instance: id.to_string(),
                group: rs[0].group.clone(),
                runs: rs.len(),
                feasible_runs: rs.iter().filter(|r| r.feasible).count(),
                mean_seconds: mean(&secs),
                best_seconds: secs.iter().copied().fold(f64::INFINITY, f64::min),
                worst_seconds: secs.iter().copied().fold(0.0, f64::max),
                mean_cost: mean(&costs),
                best_cost: costs.iter().copied().fold(f64::INFINITY, f64::min),
                worst_cost: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                cost_cv: coefficient_of_variation(&costs),
                mean_lb_ratio: opt_mean(|r| r.lb_ratio),
                mean_oracle_ratio: opt_mean(|r| r.oracle_ratio),
            }
        })
        .collect()
}

pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> Result<(), HarnessError> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Table-style instance description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub nodes: usize,
    pub arcs: usize,
    pub commodities: usize,
    pub mean_cost: f64,
    pub mean_demand: f64,
    pub mean_capacity: f64,
    /// Mean total (in plus out) degree.
    pub degree: f64,
    /// Mean demand over mean capacity.
    pub demand_capacity_ratio: f64,
}

pub fn summarize(instance: &Instance) -> InstanceSummary {
    let net = &instance.network;
    let costs: Vec<f64> = net.arcs().iter().map(|a| a.cost).collect();
    let caps: Vec<f64> = net.arcs().iter().map(|a| a.capacity).collect();
    let demands: Vec<f64> = instance.commodities.iter().map(|c| c.demand).collect();
    let mean_demand = mean(&demands);
    let mean_capacity = mean(&caps);
    InstanceSummary {
        nodes: net.num_nodes(),
        arcs: net.num_arcs(),
        commodities: instance.num_commodities(),
        mean_cost: mean(&costs),
        mean_demand,
        mean_capacity,
        degree: 2.0 * net.num_arcs() as f64 / net.num_nodes() as f64,
        demand_capacity_ratio: mean_demand / mean_capacity,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("solution has {found} routes but the instance has {expected} commodities")]
    RouteCount { expected: usize, found: usize },
    #[error("commodity {commodity}: route is not a path from origin to destination")]
    BadRoute { commodity: usize },
    #[error("commodity {commodity}: {source}")]
    Model {
        commodity: usize,
        source: ModelError,
    },
    #[error("arc {arc} ({tail}->{head}) carries {load} over capacity {capacity}")]
    OverCapacity {
        arc: usize,
        tail: usize,
        head: usize,
        load: f64,
        capacity: f64,
    },
    #[error("stated cost {stated} differs from recomputed cost {actual}")]
    CostMismatch { stated: f64, actual: f64 },
}

/// Checks routes, capacities and the stated cost; returns the recomputed cost
/// or the first violation found (commodities first, then arcs in id order).
pub fn verify_solution(
    instance: &Instance,
    routes: &[Route],
    stated_cost: f64,
) -> Result<f64, VerifyError> {
    let net = &instance.network;
    if routes.len() != instance.num_commodities() {
        return Err(VerifyError::RouteCount {
            expected: instance.num_commodities(),
            found: routes.len(),
        });
    }
    let mut load = vec![0.0; net.num_arcs()];
    let mut cost = 0.0;
    for (c, r) in instance.commodities.iter().zip(routes) {
        match validate_route(net, c, r) {
            Ok(true) => {}
            Ok(false) => return Err(VerifyError::BadRoute { commodity: c.id }),
            Err(source) => {
                return Err(VerifyError::Model {
                    commodity: c.id,
                    source,
                })
            }
        }
        for &a in r.arcs() {
            load[a.0] += c.demand;
        }
        cost += c.demand * r.original_cost(net);
    }
    for (arc, &l) in net.arcs().iter().zip(&load) {
        if !within_capacity(l, arc.capacity) {
            return Err(VerifyError::OverCapacity {
                arc: arc.id.0,
                tail: arc.tail.0,
                head: arc.head.0,
                load: l,
                capacity: arc.capacity,
            });
        }
    }
    if (stated_cost - cost).abs() > COST_TOLERANCE * cost.abs().max(1.0) {
        return Err(VerifyError::CostMismatch {
            stated: stated_cost,
            actual: cost,
        });
    }
    Ok(cost)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsFileError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`")]
    BadValue { line: usize, key: String },
}

/// Optional replacements for individual solver parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ParamOverrides {
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub pi: Option<f64>,
    pub lambda0: Option<u32>,
    pub lambda1: Option<u32>,
    pub big_m: Option<f64>,
}

impl ParamOverrides {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    /// Keys: beta, mu, pi, lambda0, lambda1, big_m.
    pub fn parse(text: &str) -> Result<Self, ParamsFileError> {
        let mut o = ParamOverrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ParamsFileError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ParamsFileError::BadValue {
                line,
                key: key.to_string(),
            };
            let real = || value.parse::<f64>().map_err(|_| bad());
            let int = || value.parse::<u32>().map_err(|_| bad());
            match key {
                "beta" => o.beta = Some(real()?),
                "mu" => o.mu = Some(real()?),
                "pi" => o.pi = Some(real()?),
                "big_m" => o.big_m = Some(real()?),
                "lambda0" => o.lambda0 = Some(int()?),
                "lambda1" => o.lambda1 = Some(int()?),
                _ => {
                    return Err(ParamsFileError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        Ok(o)
    }

    /// Fields set in `other` win.
    pub fn merge(self, other: ParamOverrides) -> Self {
        ParamOverrides {
            beta: other.beta.or(self.beta),
            mu: other.mu.or(self.mu),
            pi: other.pi.or(self.pi),
            lambda0: other.lambda0.or(self.lambda0),
            lambda1: other.lambda1.or(self.lambda1),
            big_m: other.big_m.or(self.big_m),
        }
    }

    pub fn apply(&self, base: IhhParams) -> IhhParams {
        IhhParams {
            beta: self.beta.unwrap_or(base.beta),
            mu: self.mu.unwrap_or(base.mu),
            pi: self.pi.unwrap_or(base.pi),
            lambda0: self.lambda0.unwrap_or(base.lambda0),
            lambda1: self.lambda1.unwrap_or(base.lambda1),
            big_m: self.big_m.unwrap_or(base.big_m),
        }
    }

    /// Instance defaults with the overrides applied, validated.
    pub fn resolve(&self, instance: &Instance) -> Result<IhhParams, PricingError> {
        let p = self.apply(default_params(instance)?);
        p.validate_for(&instance.network)?;
        Ok(p)
    }
}

/// Times a single solve; the clock covers only the solver.
pub fn timed_solve(
    instance: &Instance,
    config: &SolveConfig,
) -> Result<(SolveReport, f64), SolveError> {
    let start = Instant::now();
    let report = solve(instance, config)?;
    Ok((report, start.elapsed().as_secs_f64()))
}

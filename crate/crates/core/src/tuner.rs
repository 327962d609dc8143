//! Differential-evolution tuning of the scarcity-cost shape `(beta, mu, pi)`.
//!
//! DE/rand/1/bin: for each target, a mutant `x_r1 + F (x_r2 - x_r3)` from three
//! distinct other members is crossed with the target, clamped to the search
//! box, and replaces the target only if strictly fitter. All trial vectors of a
//! generation are built from the same population and evaluated in parallel.
//!
//! Fitness is the mean over benchmark instances and seeds of
//! `heuristic cost / reference cost`. An infeasible run scores
//! `INFEASIBLE_PENALTY` times the worst feasible ratio seen so far.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::Instance;
use crate::pricing::{defaults_from_data, geometric_mean, IhhParams, PricingError};
use crate::solver::{solve, SolveConfig};

pub const INFEASIBLE_PENALTY: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TunerError {
    #[error("benchmark is empty")]
    EmptyBenchmark,
    #[error("population size {0} is below 4")]
    PopulationTooSmall(usize),
    #[error("reference cost for benchmark entry {0} must be positive")]
    BadReference(usize),
    #[error("invalid search range for {0}")]
    BadRange(&'static str),
    #[error(transparent)]
    Pricing(#[from] PricingError),
}

/// One candidate parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Member {
    pub beta: f64,
    pub mu: f64,
    pub pi: f64,
}

impl Member {
    fn to_array(self) -> [f64; 3] {
        [self.beta, self.mu, self.pi]
    }

    fn from_array(v: [f64; 3]) -> Self {
        Member {
            beta: v[0],
            mu: v[1],
            pi: v[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchRanges {
    pub beta: (f64, f64),
    pub mu: (f64, f64),
    pub pi: (f64, f64),
}

impl SearchRanges {
    fn bounds(&self) -> [(f64, f64); 3] {
        [self.beta, self.mu, self.pi]
    }

    pub fn contains(&self, m: &Member) -> bool {
        self.bounds()
            .iter()
            .zip(m.to_array())
            .all(|(&(lo, hi), v)| (lo..=hi).contains(&v))
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkEntry {
    pub instance: Instance,
    /// Known good (ideally optimal) cost the heuristic is normalized against.
    pub reference_cost: f64,
}

#[derive(Debug, Clone)]
pub struct TunerConfig {
    pub population_size: usize,
    pub generations: usize,
    pub benchmark: Vec<BenchmarkEntry>,
    pub seeds_per_eval: u64,
    pub search_ranges: SearchRanges,
    pub de_weight: f64,
    pub de_crossover: f64,
    pub seed: u64,
}

impl TunerConfig {
    /// Population 30, 100 generations, F = 0.5, CR = 0.9, ranges from
    /// [`default_ranges`].
    pub fn new(benchmark: Vec<BenchmarkEntry>) -> Result<Self, TunerError> {
        let search_ranges = default_ranges(&benchmark)?;
        Ok(TunerConfig {
            population_size: 30,
            generations: 100,
            benchmark,
            seeds_per_eval: 1,
            search_ranges,
            de_weight: 0.5,
            de_crossover: 0.9,
            seed: 0,
        })
    }

    fn validate(&self) -> Result<(), TunerError> {
        if self.benchmark.is_empty() {
            return Err(TunerError::EmptyBenchmark);
        }
        if self.population_size < 4 {
            return Err(TunerError::PopulationTooSmall(self.population_size));
        }
        for (i, e) in self.benchmark.iter().enumerate() {
            if !(e.reference_cost.is_finite() && e.reference_cost > 0.0) {
                return Err(TunerError::BadReference(i));
            }
        }
        for (name, (lo, hi)) in ["beta", "mu", "pi"]
            .into_iter()
            .zip(self.search_ranges.bounds())
        {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(TunerError::BadRange(name));
            }
        }
        Ok(())
    }
}

/// Default parameters computed over all instances of the benchmark pooled
/// together.
pub fn pooled_defaults(benchmark: &[BenchmarkEntry]) -> Result<Member, TunerError> {
    if benchmark.is_empty() {
        return Err(TunerError::EmptyBenchmark);
    }
    let arcs = || benchmark.iter().flat_map(|e| e.instance.network.arcs());
    let p = defaults_from_data(
        arcs().map(|a| a.capacity),
        benchmark
            .iter()
            .flat_map(|e| e.instance.commodities.iter().map(|c| c.demand)),
        arcs().map(|a| a.cost),
        0,
    )?;
    Ok(Member {
        beta: p.beta,
        mu: p.mu,
        pi: p.pi,
    })
}

/// `beta` in `[0.01, 100] * gm(capacity)`, `mu` in `[0.01, 100] * gm(cost)`,
/// `pi` in `[1, 30]`, with geometric means pooled over the benchmark.
pub fn default_ranges(benchmark: &[BenchmarkEntry]) -> Result<SearchRanges, TunerError> {
    if benchmark.is_empty() {
        return Err(TunerError::EmptyBenchmark);
    }
    let arcs = || benchmark.iter().flat_map(|e| e.instance.network.arcs());
    let gm_u = geometric_mean(arcs().map(|a| a.capacity)).ok_or(PricingError::EmptyInstance)?;
    let gm_c = geometric_mean(arcs().map(|a| a.cost).filter(|&c| c > 0.0))
        .ok_or(PricingError::AllCostsZero)?;
    Ok(SearchRanges {
        beta: (0.01 * gm_u, 100.0 * gm_u),
        mu: (0.01 * gm_c, 100.0 * gm_c),
        pi: (1.0, 30.0),
    })
}

/// Full parameter set for one instance: the member's shape, the instance's
/// sentinel and the default hurdle schedule.
pub fn member_params(member: &Member, instance: &Instance) -> IhhParams {
    IhhParams {
        beta: member.beta,
        mu: member.mu,
        pi: member.pi,
        lambda0: crate::pricing::DEFAULT_LAMBDA0,
        lambda1: crate::pricing::DEFAULT_LAMBDA1,
        big_m: crate::pricing::min_big_m(&instance.network),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub fitness: f64,
    /// Largest normalized cost among feasible runs, if any.
    pub worst_feasible: Option<f64>,
    pub infeasible_runs: usize,
}

/// Scores `member`; infeasible runs cost `INFEASIBLE_PENALTY * penalty_ref`
/// where `penalty_ref` is the larger of `worst_seen` and this member's own
/// worst feasible ratio (1 when neither exists).
pub fn evaluate(member: &Member, config: &TunerConfig, worst_seen: Option<f64>) -> Evaluation {
    let mut ratios = Vec::new();
    let mut infeasible = 0usize;
    for entry in &config.benchmark {
        let params = member_params(member, &entry.instance);
        for seed in 0..config.seeds_per_eval {
            match solve(&entry.instance, &SolveConfig::new(params, seed)) {
                Ok(r) if r.feasible => ratios.push(r.total_cost / entry.reference_cost),
                _ => infeasible += 1,
            }
        }
    }
    let worst_feasible = ratios.iter().copied().reduce(f64::max);
    let penalty_ref = match (worst_seen, worst_feasible) {
        (Some(a), Some(b)) => a.max(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => 1.0,
    };
    let runs = ratios.len() + infeasible;
    let total: f64 =
        ratios.iter().sum::<f64>() + infeasible as f64 * INFEASIBLE_PENALTY * penalty_ref;
    Evaluation {
        fitness: total / runs as f64,
        worst_feasible,
        infeasible_runs: infeasible,
    }
}

/// Mean normalized cost of `member` on the benchmark (lower is better).
pub fn fitness(member: &Member, config: &TunerConfig) -> f64 {
    evaluate(member, config, None).fitness
}

#[derive(Debug, Clone, Serialize)]
pub struct TuneResult {
    pub best: Member,
    pub best_fitness: f64,
    /// Best fitness after initialization and after each generation.
    pub trace: Vec<f64>,
    /// Every member evaluated, in evaluation order.
    #[serde(skip)]
    pub evaluated: Vec<Member>,
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("nonempty population")
}

/// Runs DE. Member 0 of the initial population is the pooled default
/// parameter set (clamped into range); the rest are uniform in the box.
pub fn tune(config: &TunerConfig) -> Result<TuneResult, TunerError> {
    config.validate()?;
    let bounds = config.search_ranges.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let np = config.population_size;

    let default = pooled_defaults(&config.benchmark)?.to_array();
    let mut population: Vec<[f64; 3]> = Vec::with_capacity(np);
    population.push(std::array::from_fn(|d| {
        default[d].clamp(bounds[d].0, bounds[d].1)
    }));
    while population.len() < np {
        population.push(std::array::from_fn(|d| {
            rng.random_range(bounds[d].0..=bounds[d].1)
        }));
    }

    let mut worst_seen: Option<f64> = None;
    let mut evaluated: Vec<Member> = Vec::new();
    let score = |pop: &[[f64; 3]], worst: Option<f64>| -> Vec<Evaluation> {
        pop.par_iter()
            .map(|x| evaluate(&Member::from_array(*x), config, worst))
            .collect()
    };
    let merge_worst = |worst: Option<f64>, evals: &[Evaluation]| {
        evals
            .iter()
            .filter_map(|e| e.worst_feasible)
            .chain(worst)
            .reduce(f64::max)
    };

    let evals = score(&population, worst_seen);
    worst_seen = merge_worst(worst_seen, &evals);
    evaluated.extend(population.iter().map(|x| Member::from_array(*x)));
    let mut fit: Vec<f64> = evals.iter().map(|e| e.fitness).collect();
    let mut trace = vec![fit[argmin(&fit)]];

    for _ in 0..config.generations {
        let trials: Vec<[f64; 3]> = (0..np)
            .map(|target| {
                let mut pick = || loop {
                    let r = rng.random_range(0..np);
                    if r != target {
                        break r;
                    }
                };
                let r1 = pick();
                let r2 = loop {
                    let r = pick();
                    if r != r1 {
                        break r;
                    }
                };
                let r3 = loop {
                    let r = pick();
                    if r != r1 && r != r2 {
                        break r;
                    }
                };
                let forced = rng.random_range(0..3);
                std::array::from_fn(|d| {
                    let v = if d == forced || rng.random::<f64>() < config.de_crossover {
                        population[r1][d]
                            + config.de_weight * (population[r2][d] - population[r3][d])
                    } else {
                        population[target][d]
                    };
                    v.clamp(bounds[d].0, bounds[d].1)
                })
            })
            .collect();
        let evals = score(&trials, worst_seen);
        worst_seen = merge_worst(worst_seen, &evals);
        evaluated.extend(trials.iter().map(|x| Member::from_array(*x)));
        for (i, (trial, e)) in trials.into_iter().zip(evals).enumerate() {
            if e.fitness < fit[i] {
                population[i] = trial;
                fit[i] = e.fitness;
            }
        }
        trace.push(fit[argmin(&fit)]);
    }

    let best = argmin(&fit);
    Ok(TuneResult {
        best: Member::from_array(population[best]),
        best_fitness: fit[best],
        trace,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Network;

    fn tiny_entry(reference: f64) -> BenchmarkEntry {
        let net = Network::new(
            3,
            [(0, 1, 1.0, 10.0), (0, 2, 5.0, 100.0), (2, 1, 5.0, 100.0)],
        )
        .unwrap();
        let instance = Instance::new(net, [(0, 1, 10.0), (0, 1, 10.0)]).unwrap();
        BenchmarkEntry {
            instance,
            reference_cost: reference,
        }
    }

    #[test]
    fn fitness_normalizes() {
        // heuristic reaches the optimum 110 on this instance
        let cfg = TunerConfig::new(vec![tiny_entry(110.0)]).unwrap();
        let m = pooled_defaults(&cfg.benchmark).unwrap();
        assert!((fitness(&m, &cfg) - 1.0).abs() < 1e-12);
        let cfg = TunerConfig::new(vec![tiny_entry(100.0)]).unwrap();
        assert!((fitness(&m, &cfg) - 1.1).abs() < 1e-12);
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            TunerConfig::new(vec![]).unwrap_err(),
            TunerError::EmptyBenchmark
        );
        let mut cfg = TunerConfig::new(vec![tiny_entry(110.0)]).unwrap();
        cfg.population_size = 3;
        assert_eq!(tune(&cfg).unwrap_err(), TunerError::PopulationTooSmall(3));
        let mut cfg = TunerConfig::new(vec![tiny_entry(0.0)]).unwrap();
        cfg.population_size = 4;
        assert_eq!(tune(&cfg).unwrap_err(), TunerError::BadReference(0));
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let mut cfg = TunerConfig::new(vec![tiny_entry(110.0)]).unwrap();
        cfg.population_size = 6;
        cfg.generations = 0;
        let r = tune(&cfg).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.evaluated.len(), 6);
        assert_eq!(r.best_fitness, r.trace[0]);
    }
}

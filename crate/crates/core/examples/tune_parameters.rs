//! Tunes beta, mu and pi by differential evolution on small instances whose
//! optimum is known, then compares tuned and default parameters.
//!
//! cargo run --release --example tune_parameters -- [generations]

use ihh::generator::{generate, GenSpec};
use ihh::oracle::{exact_solve, OracleLimits};
use ihh::tuner::{fitness, pooled_defaults, tune, BenchmarkEntry, TunerConfig};

fn main() {
    let generations: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(15);
    let benchmark: Vec<BenchmarkEntry> = (100..112)
        .map(|seed| {
            let spec = GenSpec {
                num_nodes: 8,
                num_arcs: 20,
                num_commodities: 6,
                seed,
                ..GenSpec::default()
            };
            let instance = generate(&spec).expect("generate");
            let reference_cost = exact_solve(&instance, &OracleLimits::default())
                .expect("oracle")
                .optimal_cost
                .expect("generated instances are feasible");
            BenchmarkEntry {
                instance,
                reference_cost,
            }
        })
        .collect();
    let mut config = TunerConfig::new(benchmark).expect("config");
    config.population_size = 12;
    config.generations = generations;
    config.seeds_per_eval = 3;

    let defaults = pooled_defaults(&config.benchmark).expect("defaults");
    println!(
        "defaults  beta {:.3} mu {:.3} pi {:.3}  fitness {:.4}",
        defaults.beta,
        defaults.mu,
        defaults.pi,
        fitness(&defaults, &config)
    );
    let result = tune(&config).expect("tune");
    for (g, f) in result.trace.iter().enumerate() {
        println!("generation {g:>3}  best {f:.4}");
    }
    let b = result.best;
    println!(
        "tuned     beta {:.3} mu {:.3} pi {:.3}  fitness {:.4}",
        b.beta, b.mu, b.pi, result.best_fitness
    );
}

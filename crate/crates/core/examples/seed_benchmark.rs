//! Generates A1-sized instances and solves each one over ten seeds, printing
//! per-instance mean cost, coefficient of variation and timing.
//!
//! cargo run --release --example seed_benchmark -- [instances]

use ihh::generator::{generate, GenSpec};
use ihh::harness::{aggregate, run_bench, BenchJob, BenchOptions, DEFAULT_SEEDS};

fn main() {
    let count: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let jobs: Vec<BenchJob> = (0..count)
        .map(|s| BenchJob {
            id: format!("a1-{s:02}"),
            group: "A1".into(),
            instance: generate(&GenSpec::a1(s)).expect("generate"),
        })
        .collect();
    let options = BenchOptions {
        seeds: DEFAULT_SEEDS.collect(),
        ..Default::default()
    };
    let records = run_bench(&jobs, &options).expect("bench");
    let infeasible = records.iter().filter(|r| !r.feasible).count();
    let hurdles = records.iter().filter(|r| r.hurdle_activations > 0).count();
    let pre = records
        .iter()
        .filter(|r| r.feasible_before_feaspath)
        .count();
    println!(
        "{:<8} {:>5} {:>12} {:>9} {:>9} {:>10}",
        "instance", "feas", "mean cost", "cv", "lb ratio", "mean ms"
    );
    for a in aggregate(&records) {
        println!(
            "{:<8} {:>2}/{:<2} {:>12.1} {:>9.5} {:>9.4} {:>10.3}",
            a.instance,
            a.feasible_runs,
            a.runs,
            a.mean_cost,
            a.cost_cv,
            a.mean_lb_ratio.unwrap_or(f64::NAN),
            a.mean_seconds * 1e3
        );
    }
    println!(
        "runs {}  infeasible {infeasible}  with hurdle activations {hurdles}  feasible before repair {pre}",
        records.len()
    );
}

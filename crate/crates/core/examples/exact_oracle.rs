//! Compares the heuristic against exhaustive search on small congested
//! instances.
//!
//! cargo run --release --example exact_oracle -- [instances]

use ihh::generator::{generate, GenSpec};
use ihh::oracle::{exact_solve, lower_bound, OracleLimits};
use ihh::solver::sp_solve;
use ihh::{capacity_feasible, default_params, solve, SolveConfig};

fn main() {
    let wanted: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    println!(
        "{:>5} {:>5} {:>5} {:>10} {:>10} {:>10} {:>8} {:>9}",
        "seed", "arcs", "comms", "bound", "optimum", "heuristic", "ratio", "explored"
    );
    let mut shown = 0;
    let mut seed = 0;
    while shown < wanted {
        seed += 1;
        let spec = GenSpec {
            num_nodes: 7,
            num_arcs: 18,
            num_commodities: 5,
            seed,
            ..GenSpec::default()
        };
        let inst = generate(&spec).expect("generate");
        if capacity_feasible(&sp_solve(&inst), &inst.network) {
            continue;
        }
        shown += 1;
        let exact = exact_solve(&inst, &OracleLimits::default()).expect("oracle");
        let opt = exact.optimal_cost.unwrap_or(f64::NAN);
        let params = default_params(&inst).expect("params");
        let report = solve(&inst, &SolveConfig::new(params, 0)).expect("solve");
        let (heuristic, ratio) = if report.feasible {
            (
                format!("{:.1}", report.total_cost),
                format!("{:.4}", report.total_cost / opt),
            )
        } else {
            ("infeasible".into(), "-".into())
        };
        println!(
            "{:>5} {:>5} {:>5} {:>10.1} {:>10.1} {:>10} {:>8} {:>9}",
            seed,
            inst.network.num_arcs(),
            inst.num_commodities(),
            lower_bound(&inst).unwrap_or(f64::NAN),
            opt,
            heuristic,
            ratio,
            exact.nodes_explored
        );
    }
}

//! Solves one instance and prints the run report.
//!
//! cargo run --release --example solve_instance -- [instance.odimcf] [seed]
//!
//! Without a path, an A1-sized instance is generated.

use ihh::generator::{generate, GenSpec};
use ihh::io::read_instance;
use ihh::oracle::lower_bound;
use ihh::{default_params, solve, SolveConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let instance = match args.next() {
        Some(path) => read_instance(&path).expect("read instance"),
        None => generate(&GenSpec::a1(1)).expect("generate"),
    };
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let params = default_params(&instance).expect("params");
    println!(
        "beta {:.3}  mu {:.3}  pi {:.3}  M {:.0}",
        params.beta, params.mu, params.pi, params.big_m
    );

    let report = solve(&instance, &SolveConfig::new(params, seed)).expect("solve");
    let lb = lower_bound(&instance);
    println!("cost            {:.2}", report.total_cost);
    if let Some(lb) = lb {
        println!(
            "lower bound     {lb:.2} (ratio {:.4})",
            report.total_cost / lb
        );
    }
    println!("feasible        {}", report.feasible);
    println!("shortcut        {}", report.shortcut_optimal);
    println!(
        "main loop       {} passes, changes per pass {:?}",
        report.main_loop_iterations, report.main_pass_changes
    );
    println!(
        "before repair   cost {:.2}, {} violated arcs ({:.1}%)",
        report.cost_before_feaspath,
        report.violated_arcs_before_feaspath,
        100.0 * report.violated_arc_fraction_before_feaspath
    );
    println!(
        "repair          {} reroutes over {} passes, {} violated arcs left",
        report.feaspath_reroutes, report.feaspath_passes, report.violated_arcs_final
    );
    println!("hurdle blocks   {}", report.hurdle_activations);
    println!("wall time       {:.3} ms", report.wall_time * 1e3);
}

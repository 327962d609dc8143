//! Solves an instance, writes the solution file, reads it back and checks it
//! independently. Then shows what the checker reports for a tampered file.
//!
//! cargo run --example verify_solution

use ihh::generator::{generate, GenSpec};
use ihh::harness::verify_solution;
use ihh::io::{read_solution, write_instance, write_solution};
use ihh::{default_params, solve, SolveConfig};

fn main() {
    let dir = std::env::temp_dir().join("ihh-verify-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let mut instance = generate(&GenSpec::a1(4)).expect("generate");
    // slack capacities so the solve is feasible and the check can pass
    let roomy: Vec<f64> = instance
        .network
        .arcs()
        .iter()
        .map(|a| a.capacity * 1.5)
        .collect();
    instance.network = instance
        .network
        .with_capacities(&roomy)
        .expect("capacities");
    write_instance(dir.join("roomy.odimcf"), &instance).expect("write instance");

    let params = default_params(&instance).expect("params");
    let report = solve(&instance, &SolveConfig::new(params, 0)).expect("solve");
    let sol_path = dir.join("roomy.sol");
    write_solution(&sol_path, report.final_state.routes(), report.total_cost).expect("write");

    let sol = read_solution(&sol_path).expect("read");
    match verify_solution(&instance, &sol.routes, sol.cost) {
        Ok(cost) => println!("{}: ok, cost {cost:.2}", sol_path.display()),
        Err(e) => println!("{}: rejected: {e}", sol_path.display()),
    }

    let wrong = sol.cost * 0.99;
    match verify_solution(&instance, &sol.routes, wrong) {
        Ok(_) => println!("tampered cost unexpectedly accepted"),
        Err(e) => println!("stated cost {wrong:.2}: rejected: {e}"),
    }

    // the certificate of the original instance fits by construction
    let cert = instance.certificate.clone().expect("certificate");
    let tight = generate(&GenSpec::a1(4)).expect("generate");
    let cost: f64 = tight
        .commodities
        .iter()
        .zip(&cert)
        .map(|(c, r)| c.demand * r.original_cost(&tight.network))
        .sum();
    match verify_solution(&tight, &cert, cost) {
        Ok(cost) => println!("certificate: ok, cost {cost:.2}"),
        Err(e) => println!("certificate: rejected: {e}"),
    }
}

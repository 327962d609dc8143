//! Prints how an arc's market cost and feasible cost react as its residual
//! capacity shrinks, and the hurdle multiplier schedule.
//!
//! cargo run --example market_pricing

use ihh::default_params;
use ihh::generator::{generate, GenSpec};
use ihh::pricing::{feasible_cost_for, hurdle_multiplier, market_cost, scarcity_cost};

fn main() {
    let instance = generate(&GenSpec::a1(0)).expect("generate");
    let params = default_params(&instance).expect("params");
    let arc = &instance.network.arcs()[0];
    let demand = 15.0;
    println!(
        "arc {} -> {}: cost {}, capacity {}; demand {demand}; beta {:.2} mu {:.2} pi {:.2}",
        arc.tail.0, arc.head.0, arc.cost, arc.capacity, params.beta, params.mu, params.pi
    );
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "residual", "scarcity", "market", "feasible"
    );
    let top = params.beta + demand;
    for step in 0..=12 {
        let r = top - step as f64 * top / 8.0;
        println!(
            "{:>10.2} {:>12.3} {:>12.3} {:>12.1}",
            r,
            scarcity_cost(&params, r, demand),
            market_cost(&params, arc, r, demand),
            feasible_cost_for(&params, arc, r, demand)
        );
    }

    println!("\nreroutes  hurdle multiplier");
    for lambda in [0, 5, 10, 11, 15, 20, 26, 30, 35, 40, 41, 42, 43] {
        println!("{lambda:>8}  {:.6}", hurdle_multiplier(&params, lambda));
    }
}

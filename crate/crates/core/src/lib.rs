//! Market-priced rerouting heuristic for origin-destination integer
//! multicommodity flow, with an instance generator, an exact reference solver
//! for small instances, a differential-evolution parameter tuner and a
//! benchmark harness.
//!
//! Each commodity must travel on a single path from its origin to its
//! destination; commodities share arc capacities. The heuristic prices arcs by
//! how close they are to saturation and lets commodities reroute selfishly
//! until nobody wants to move, then repairs any remaining capacity violations.
//!
//! ```no_run
//! use ihh::generator::{generate, GenSpec};
//! use ihh::pricing::default_params;
//! use ihh::solver::{solve, SolveConfig};
//!
//! let instance = generate(&GenSpec::a1(7)).unwrap();
//! let params = default_params(&instance).unwrap();
//! let report = solve(&instance, &SolveConfig::new(params, 0)).unwrap();
//! println!("cost {} feasible {}", report.total_cost, report.feasible);
//! ```
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod generator;
pub mod harness;
pub mod io;
pub mod model;
pub mod oracle;
pub mod pricing;
pub mod shortest_path;
pub mod solver;
pub mod tuner;

pub use model::{
    capacity_feasible, residual_capacity, total_cost, validate_route, Arc, ArcId, Commodity,
    FlowState, Instance, Network, NodeId, Route,
};
pub use pricing::{default_params, IhhParams};
pub use solver::{solve, SolveConfig, SolveReport};

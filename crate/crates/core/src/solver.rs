//! The rerouting heuristic.
//!
//! 1. Route every commodity on its cheapest path by original cost, ignoring
//!    capacities. If that is already capacity-feasible it is optimal; stop.
//! 2. Main loop: in a seeded random order, each commodity looks for its cheapest
//!    path under market prices and switches if that path beats the incumbent by
//!    the hurdle factor. Repeat until a full pass changes nothing.
//! 3. Repair pass: with counters reset, commodities move to cheaper paths that
//!    have enough residual capacity on every arc.
//!
//! A commodity that has switched `lambda0 - 1` times can no longer switch, so
//! both loops terminate.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{capacity_feasible, total_cost, FlowState, Instance, Route};
use crate::pricing::{hurdle_multiplier, IhhParams, PricingError};
use crate::shortest_path::{
    CostOracle, FeasibleCost, MarketCost, OriginalCost, PathError, RouteMask, ShortestPath,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Params(#[from] PricingError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub params: IhhParams,
    /// Seeds the commodity-order shuffles; the same seed replays the same run.
    pub seed: u64,
    /// Optional cap on main-loop passes. The hurdle schedule already bounds work.
    pub max_main_iterations: Option<u32>,
}

impl SolveConfig {
    pub fn new(params: IhhParams, seed: u64) -> Self {
        SolveConfig {
            params,
            seed,
            max_main_iterations: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub final_state: FlowState,
    pub total_cost: f64,
    pub feasible: bool,
    /// The capacity-blind shortest-path routing was already feasible.
    pub shortcut_optimal: bool,
    pub cost_before_feaspath: f64,
    pub feasible_before_feaspath: bool,
    pub violated_arcs_before_feaspath: usize,
    pub violated_arc_fraction_before_feaspath: f64,
    pub violated_arcs_final: usize,
    /// Route decisions where the new path was cheaper but not by the hurdle factor.
    pub hurdle_activations: u64,
    /// Main-loop reroute count per commodity.
    pub reroutes_per_commodity: Vec<u32>,
    /// Repair-pass reroute count per commodity.
    pub feaspath_reroutes_per_commodity: Vec<u32>,
    pub feaspath_reroutes: u64,
    pub feaspath_passes: u32,
    pub main_loop_iterations: u32,
    /// Number of route changes in each main-loop pass.
    pub main_pass_changes: Vec<u32>,
    pub wall_time: f64,
}

impl SolveReport {
    fn new(state: FlowState, num_commodities: usize) -> Self {
        SolveReport {
            final_state: state,
            total_cost: 0.0,
            feasible: false,
            shortcut_optimal: false,
            cost_before_feaspath: 0.0,
            feasible_before_feaspath: false,
            violated_arcs_before_feaspath: 0,
            violated_arc_fraction_before_feaspath: 0.0,
            violated_arcs_final: 0,
            hurdle_activations: 0,
            reroutes_per_commodity: vec![0; num_commodities],
            feaspath_reroutes_per_commodity: vec![0; num_commodities],
            feaspath_reroutes: 0,
            feaspath_passes: 0,
            main_loop_iterations: 0,
            main_pass_changes: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn total_reroutes(&self) -> u64 {
        self.reroutes_per_commodity
            .iter()
            .map(|&l| u64::from(l))
            .sum()
    }
}

/// Outcome of one commodity's market-price route decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteDecision {
    Switched,
    Kept,
    /// A cheaper path existed but did not clear the hurdle.
    HurdleBlocked,
}

impl RouteDecision {
    pub fn changed(self) -> bool {
        self == RouteDecision::Switched
    }
}

/// Routes each commodity on its cheapest original-cost path; unreachable
/// commodities stay unrouted.
pub fn sp_solve(instance: &Instance) -> FlowState {
    let net = &instance.network;
    let mut sp = ShortestPath::new(net.num_nodes());
    let oracle = OriginalCost { network: net };
    let mut state = FlowState::empty(instance);
    for (k, c) in instance.commodities.iter().enumerate() {
        let found = sp
            .run(net, c.origin, c.destination, &oracle)
            .expect("original arc costs are validated nonnegative");
        if !found.is_empty() {
            state.reroute(instance, k, found.route);
        }
    }
    state
}

fn route_sum<O: CostOracle>(route: &Route, oracle: &O) -> f64 {
    route
        .arcs()
        .iter()
        .fold(0.0, |acc, &a| acc + oracle.arc_cost(a))
}

/// Solver scratch state for one run: search buffers, route mask and the
/// seeded order generator.
pub struct Solver<'a> {
    instance: &'a Instance,
    config: SolveConfig,
    sp: ShortestPath,
    mask: RouteMask,
    rng: ChaCha8Rng,
    order: Vec<usize>,
}

impl<'a> Solver<'a> {
    pub fn new(instance: &'a Instance, config: SolveConfig) -> Result<Self, SolveError> {
        config.params.validate()?;
        let net = &instance.network;
        Ok(Solver {
            instance,
            config,
            sp: ShortestPath::new(net.num_nodes()),
            mask: RouteMask::new(net.num_arcs()),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            order: (0..instance.num_commodities()).collect(),
        })
    }

    /// Market-price decision for commodity `k` with `reroutes` prior changes.
    /// Switches `state` in place when the new path clears the hurdle.
    pub fn route_decision(
        &mut self,
        state: &mut FlowState,
        k: usize,
        reroutes: u32,
    ) -> Result<RouteDecision, SolveError> {
        let inst = self.instance;
        let net = &inst.network;
        let commodity = &inst.commodities[k];
        let params = &self.config.params;
        self.mask.set(state.route(k));
        let (found, rc_new, rc_current) = {
            let oracle = MarketCost {
                network: net,
                state,
                params,
                mask: &self.mask,
                demand: commodity.demand,
            };
            let found = self
                .sp
                .run(net, commodity.origin, commodity.destination, &oracle);
            match found {
                Ok(found) => {
                    let rc_new = route_sum(&found.route, &oracle);
                    let rc_current = route_sum(state.route(k), &oracle);
                    (found, rc_new, rc_current)
                }
                Err(e) => {
                    self.mask.clear(state.route(k));
                    return Err(e.into());
                }
            }
        };
        self.mask.clear(state.route(k));
        if found.is_empty() {
            return Ok(RouteDecision::Kept);
        }
        let hm = hurdle_multiplier(params, reroutes);
        if rc_new < hm * rc_current {
            state.reroute(inst, k, found.route);
            Ok(RouteDecision::Switched)
        } else if rc_new < rc_current {
            Ok(RouteDecision::HurdleBlocked)
        } else {
            Ok(RouteDecision::Kept)
        }
    }

    /// Repeats randomized passes until one makes no change.
    pub fn main_loop(
        &mut self,
        state: &mut FlowState,
        report: &mut SolveReport,
    ) -> Result<(), SolveError> {
        let params = self.config.params;
        let lambda = &mut report.reroutes_per_commodity;
        loop {
            if let Some(max) = self.config.max_main_iterations {
                if report.main_loop_iterations >= max {
                    break;
                }
            }
            if lambda.iter().all(|&l| hurdle_multiplier(&params, l) == 0.0) {
                break;
            }
            report.main_loop_iterations += 1;
            self.order.shuffle(&mut self.rng);
            let mut changes = 0;
            for i in 0..self.order.len() {
                let k = self.order[i];
                match self.route_decision(state, k, lambda[k])? {
                    RouteDecision::Switched => {
                        lambda[k] += 1;
                        changes += 1;
                    }
                    RouteDecision::HurdleBlocked => report.hurdle_activations += 1,
                    RouteDecision::Kept => {}
                }
            }
            report.main_pass_changes.push(changes);
            if changes == 0 {
                break;
            }
        }
        Ok(())
    }

    /// Moves commodities onto cheaper paths that fit within residual capacity.
    /// Never unroutes a commodity and never routes an unrouted one.
    pub fn feas_path(
        &mut self,
        state: &mut FlowState,
        report: &mut SolveReport,
    ) -> Result<(), SolveError> {
        let inst = self.instance;
        let net = &inst.network;
        let params = self.config.params;
        let lambda = &mut report.feaspath_reroutes_per_commodity;
        lambda.iter_mut().for_each(|l| *l = 0);
        loop {
            if lambda.iter().all(|&l| hurdle_multiplier(&params, l) == 0.0) {
                break;
            }
            report.feaspath_passes += 1;
            self.order.shuffle(&mut self.rng);
            let mut more = false;
            for i in 0..self.order.len() {
                let k = self.order[i];
                if state.route(k).is_empty() {
                    continue;
                }
                let commodity = &inst.commodities[k];
                self.mask.set(state.route(k));
                let result = {
                    let oracle = FeasibleCost {
                        network: net,
                        state,
                        params: &params,
                        mask: &self.mask,
                        demand: commodity.demand,
                    };
                    self.sp
                        .run(net, commodity.origin, commodity.destination, &oracle)
                        .map(|found| {
                            let frc_new = route_sum(&found.route, &oracle);
                            let frc_current = route_sum(state.route(k), &oracle);
                            (found, frc_new, frc_current)
                        })
                };
                self.mask.clear(state.route(k));
                let (found, frc_new, frc_current) = result?;
                if found.is_empty() {
                    continue;
                }
                let bound = params
                    .big_m
                    .min(hurdle_multiplier(&params, lambda[k]) * frc_current);
                if frc_new < bound {
                    lambda[k] += 1;
                    report.feaspath_reroutes += 1;
                    state.reroute(inst, k, found.route);
                    more = true;
                }
            }
            if !more {
                break;
            }
        }
        Ok(())
    }
}

/// Runs the full heuristic on `instance`.
pub fn solve(instance: &Instance, config: &SolveConfig) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let mut solver = Solver::new(instance, *config)?;
    let net = &instance.network;
    let mut state = sp_solve(instance);
    let mut report = SolveReport::new(FlowState::empty(instance), instance.num_commodities());

    if capacity_feasible(&state, net) {
        report.shortcut_optimal = true;
        report.feasible_before_feaspath = true;
        report.cost_before_feaspath = total_cost(&state, instance);
    } else {
        solver.main_loop(&mut state, &mut report)?;
        let violated = state.violated_arcs(net);
        report.cost_before_feaspath = total_cost(&state, instance);
        report.feasible_before_feaspath = capacity_feasible(&state, net);
        report.violated_arcs_before_feaspath = violated;
        report.violated_arc_fraction_before_feaspath = if net.num_arcs() == 0 {
            0.0
        } else {
            violated as f64 / net.num_arcs() as f64
        };
        solver.feas_path(&mut state, &mut report)?;
    }

    report.total_cost = total_cost(&state, instance);
    report.feasible = capacity_feasible(&state, net);
    report.violated_arcs_final = state.violated_arcs(net);
    report.final_state = state;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

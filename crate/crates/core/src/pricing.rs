//! Congestion pricing: residual-dependent scarcity cost, market cost, the
//! capacity-gated feasible cost, and the hurdle multiplier that forces
//! convergence.

use std::f64::consts::{E, FRAC_1_SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{residual_capacity, Arc, Commodity, FlowState, Instance, Network, Route};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PricingError {
    #[error("instance has no arcs or no commodities")]
    EmptyInstance,
    #[error("all arc costs are zero; the scarcity scale is undefined")]
    AllCostsZero,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Scarcity-cost shape (`beta`, `mu`, `pi`), hurdle schedule (`lambda0`,
/// `lambda1`) and the infeasibility sentinel `big_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IhhParams {
    /// Residual headroom at which scarcity pricing starts.
    pub beta: f64,
    /// Scarcity cost when residual equals demand.
    pub mu: f64,
    /// Curvature exponent.
    pub pi: f64,
    /// Reroute count at which no further change is possible.
    pub lambda0: u32,
    /// Reroute count below which the hurdle multiplier is 1.
    pub lambda1: u32,
    pub big_m: f64,
}

pub const DEFAULT_LAMBDA0: u32 = 43;
pub const DEFAULT_LAMBDA1: u32 = 10;

impl IhhParams {
    pub fn validate(&self) -> Result<(), PricingError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.beta) || !positive(self.mu) || !positive(self.pi) {
            return Err(PricingError::InvalidParams(format!(
                "beta, mu, pi must be positive (got {}, {}, {})",
                self.beta, self.mu, self.pi
            )));
        }
        if self.lambda0 == 0 || self.lambda1 >= self.lambda0 {
            return Err(PricingError::InvalidParams(format!(
                "need 0 <= lambda1 < lambda0 (got {}, {})",
                self.lambda1, self.lambda0
            )));
        }
        if !positive(self.big_m) {
            return Err(PricingError::InvalidParams(format!(
                "big_m must be positive (got {})",
                self.big_m
            )));
        }
        Ok(())
    }

    /// Checks `big_m >= max(c) * |N|` for the given network.
    pub fn validate_for(&self, network: &Network) -> Result<(), PricingError> {
        self.validate()?;
        let bound = min_big_m(network);
        if self.big_m < bound {
            return Err(PricingError::InvalidParams(format!(
                "big_m {} below max(cost)*|N| = {}",
                self.big_m, bound
            )));
        }
        Ok(())
    }
}

/// Smallest admissible sentinel: `max(c) * |N|`.
pub fn min_big_m(network: &Network) -> f64 {
    let max_cost = network.arcs().iter().map(|a| a.cost).fold(0.0, f64::max);
    max_cost * network.num_nodes() as f64
}

/// `mu * max(0, (beta + d - r) / beta)^pi`.
#[inline]
pub fn scarcity_cost(params: &IhhParams, residual: f64, demand: f64) -> f64 {
    let ratio = ((params.beta + demand - residual) / params.beta).max(0.0);
    params.mu * ratio.powf(params.pi)
}

#[inline]
pub fn market_cost(params: &IhhParams, arc: &Arc, residual: f64, demand: f64) -> f64 {
    scarcity_cost(params, residual, demand) + arc.cost
}

/// Sum of market costs along `route` for `commodity` under the current state.
pub fn route_market_cost(
    params: &IhhParams,
    network: &Network,
    state: &FlowState,
    route: &Route,
    commodity: &Commodity,
) -> f64 {
    route.arcs().iter().fold(0.0, |acc, &a| {
        let arc = network.arc(a);
        let r = residual_capacity(state, arc, commodity);
        acc + market_cost(params, arc, r, commodity.demand)
    })
}

/// Original cost when the arc can absorb `demand` on top of everyone else's
/// load, `big_m` otherwise.
#[inline]
pub fn feasible_cost_for(params: &IhhParams, arc: &Arc, residual: f64, demand: f64) -> f64 {
    // same relative slack as capacity_feasible so a switch never lands on an
    // arc the feasibility check would flag
    if residual - demand >= -crate::model::CAPACITY_TOLERANCE * arc.capacity {
        arc.cost
    } else {
        params.big_m
    }
}

pub fn feasible_arc_cost(
    params: &IhhParams,
    state: &FlowState,
    arc: &Arc,
    commodity: &Commodity,
) -> f64 {
    let r = residual_capacity(state, arc, commodity);
    feasible_cost_for(params, arc, r, commodity.demand)
}

/// Sum of feasible arc costs. A result `>= big_m` means the route crosses at
/// least one arc without enough residual capacity.
pub fn feasible_route_cost(
    params: &IhhParams,
    network: &Network,
    state: &FlowState,
    route: &Route,
    commodity: &Commodity,
) -> f64 {
    route.arcs().iter().fold(0.0, |acc, &a| {
        acc + feasible_arc_cost(params, state, network.arc(a), commodity)
    })
}

/// Acceptance factor after `reroutes` changes: 1 below `lambda1`, then
/// `1 - ((l - lambda1) / (lambda0 - lambda1 - 1))^e`, clamped to `[0, 1]`.
/// Zero from `lambda0 - 1` on.
pub fn hurdle_multiplier(params: &IhhParams, reroutes: u32) -> f64 {
    if reroutes < params.lambda1 {
        return 1.0;
    }
    if reroutes + 1 >= params.lambda0 {
        return 0.0;
    }
    let span = f64::from(params.lambda0 - params.lambda1 - 1);
    let x = f64::from(reroutes - params.lambda1) / span;
    (1.0 - x.powf(E)).clamp(0.0, 1.0)
}

pub(crate) fn geometric_mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut n = 0usize;
    let mut log_sum = 0.0;
    for v in values {
        log_sum += v.ln();
        n += 1;
    }
    (n > 0).then(|| (log_sum / n as f64).exp())
}

/// Default parameters computed from raw instance data; zero costs are left out
/// of the cost geometric mean.
pub fn defaults_from_data(
    capacities: impl IntoIterator<Item = f64>,
    demands: impl IntoIterator<Item = f64>,
    costs: impl IntoIterator<Item = f64> + Clone,
    num_nodes: usize,
) -> Result<IhhParams, PricingError> {
    let gm_u = geometric_mean(capacities).ok_or(PricingError::EmptyInstance)?;
    let gm_d = geometric_mean(demands).ok_or(PricingError::EmptyInstance)?;
    let max_cost = costs.clone().into_iter().fold(0.0, f64::max);
    let gm_c =
        geometric_mean(costs.into_iter().filter(|&c| c > 0.0)).ok_or(PricingError::AllCostsZero)?;
    Ok(IhhParams {
        beta: (FRAC_1_SQRT_2 * gm_u).max(gm_d),
        mu: gm_c * E.sqrt(),
        pi: E.powf(E),
        lambda0: DEFAULT_LAMBDA0,
        lambda1: DEFAULT_LAMBDA1,
        big_m: max_cost * num_nodes as f64,
    })
}

/// Instance-scaled defaults from geometric means of capacity, demand and cost.
pub fn default_params(instance: &Instance) -> Result<IhhParams, PricingError> {
    let net = &instance.network;
    if net.num_arcs() == 0 || instance.commodities.is_empty() {
        return Err(PricingError::EmptyInstance);
    }
    defaults_from_data(
        net.arcs().iter().map(|a| a.capacity),
        instance.commodities.iter().map(|c| c.demand),
        net.arcs().iter().map(|a| a.cost),
        net.num_nodes(),
    )
}

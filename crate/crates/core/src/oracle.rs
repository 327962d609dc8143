//! Exact reference solutions for small instances and a capacity-free lower
//! bound.
//!
//! `exact_solve` enumerates every simple path of every commodity, then runs a
//! depth-first branch and bound over path combinations. Commodities are
//! branched in descending demand order; the bound is the cost so far plus each
//! remaining commodity's cheapest path.

use thiserror::Error;

use crate::model::{within_capacity, ArcId, Instance, Network, NodeId, Route};
use crate::solver::sp_solve;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{0} commodities exceed the limit of {1}")]
    TooManyCommodities(usize, usize),
    #[error("commodity {commodity} has more than {limit} simple paths")]
    TooManyPaths { commodity: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_paths_per_commodity: usize,
    pub max_commodities: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_paths_per_commodity: 10_000,
            max_commodities: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `None` when no capacity-feasible routing exists.
    pub optimal_cost: Option<f64>,
    /// Optimal routes in commodity order; empty when infeasible.
    pub optimal_routes: Vec<Route>,
    pub nodes_explored: u64,
}

impl OracleResult {
    pub fn is_feasible(&self) -> bool {
        self.optimal_cost.is_some()
    }
}

/// Every simple path from `origin` to `destination`, or `None` past `limit`.
pub fn enumerate_simple_paths(
    network: &Network,
    origin: NodeId,
    destination: NodeId,
    limit: usize,
) -> Option<Vec<Route>> {
    fn dfs(
        net: &Network,
        at: NodeId,
        dest: NodeId,
        visited: &mut [bool],
        stack: &mut Vec<ArcId>,
        out: &mut Vec<Route>,
        limit: usize,
    ) -> bool {
        if at == dest {
            out.push(Route(stack.clone()));
            return out.len() <= limit;
        }
        for &a in net.outgoing(at) {
            let head = net.arc(a).head;
            if visited[head.0] {
                continue;
            }
            visited[head.0] = true;
            stack.push(a);
            let ok = dfs(net, head, dest, visited, stack, out, limit);
            stack.pop();
            visited[head.0] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut visited = vec![false; network.num_nodes()];
    visited[origin.0] = true;
    let mut out = Vec::new();
    dfs(
        network,
        origin,
        destination,
        &mut visited,
        &mut Vec::new(),
        &mut out,
        limit,
    )
    .then_some(out)
}

struct Search<'a> {
    instance: &'a Instance,
    order: Vec<usize>,
    /// Per commodity: (demand-weighted cost, route), cheapest first.
    options: Vec<Vec<(f64, Route)>>,
    /// `tail_bound[i]` = sum of cheapest options for `order[i..]`.
    tail_bound: Vec<f64>,
    load: Vec<f64>,
    chosen: Vec<usize>,
    best_cost: f64,
    best: Option<Vec<usize>>,
    explored: u64,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, cost: f64) {
        self.explored += 1;
        if depth == self.order.len() {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        let k = self.order[depth];
        let demand = self.instance.commodities[k].demand;
        let net = &self.instance.network;
        for i in 0..self.options[k].len() {
            let (path_cost, ref route) = self.options[k][i];
            let rest = self.tail_bound[depth + 1];
            // options are sorted, so later ones cannot do better either
            if cost + path_cost + rest >= self.best_cost {
                break;
            }
            let fits = route
                .arcs()
                .iter()
                .all(|&a| within_capacity(self.load[a.0] + demand, net.arc(a).capacity));
            if !fits {
                continue;
            }
            let arcs = route.arcs().to_vec();
            for &a in &arcs {
                self.load[a.0] += demand;
            }
            self.chosen[k] = i;
            self.run(depth + 1, cost + path_cost);
            for &a in &arcs {
                self.load[a.0] -= demand;
            }
        }
    }
}

/// Provably optimal capacity-feasible routing by exhaustive search.
pub fn exact_solve(
    instance: &Instance,
    limits: &OracleLimits,
) -> Result<OracleResult, OracleError> {
    let k = instance.num_commodities();
    if k > limits.max_commodities {
        return Err(OracleError::TooManyCommodities(k, limits.max_commodities));
    }
    let net = &instance.network;
    let mut options = Vec::with_capacity(k);
    for c in &instance.commodities {
        let paths =
            enumerate_simple_paths(net, c.origin, c.destination, limits.max_paths_per_commodity)
                .ok_or(OracleError::TooManyPaths {
                    commodity: c.id,
                    limit: limits.max_paths_per_commodity,
                })?;
        let mut opts: Vec<(f64, Route)> = paths
            .into_iter()
            .map(|r| (c.demand * r.original_cost(net), r))
            .collect();
        opts.sort_by(|a, b| a.0.total_cmp(&b.0));
        options.push(opts);
    }
    if options.iter().any(Vec::is_empty) {
        return Ok(OracleResult {
            optimal_cost: None,
            optimal_routes: Vec::new(),
            nodes_explored: 0,
        });
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        instance.commodities[b]
            .demand
            .total_cmp(&instance.commodities[a].demand)
            .then(a.cmp(&b))
    });
    let mut tail_bound = vec![0.0; k + 1];
    for i in (0..k).rev() {
        tail_bound[i] = tail_bound[i + 1] + options[order[i]][0].0;
    }
    let mut search = Search {
        instance,
        order,
        options,
        tail_bound,
        load: vec![0.0; net.num_arcs()],
        chosen: vec![0; k],
        best_cost: f64::INFINITY,
        best: None,
        explored: 0,
    };
    search.run(0, 0.0);
    let (optimal_cost, optimal_routes) = match &search.best {
        Some(choice) => {
            let routes: Vec<Route> = choice
                .iter()
                .enumerate()
                .map(|(k, &i)| search.options[k][i].1.clone())
                .collect();
            // recompute in commodity order so the value does not depend on
            // branching order
            let cost = instance
                .commodities
                .iter()
                .zip(&routes)
                .map(|(c, r)| c.demand * r.original_cost(net))
                .sum();
            (Some(cost), routes)
        }
        None => (None, Vec::new()),
    };
    Ok(OracleResult {
        optimal_cost,
        optimal_routes,
        nodes_explored: search.explored,
    })
}

/// Demand-weighted sum of uncapacitated shortest-path costs; `None` when some
/// commodity has no path at all.
pub fn lower_bound(instance: &Instance) -> Option<f64> {
    let state = sp_solve(instance);
    let mut total = 0.0;
    for (c, r) in instance.commodities.iter().zip(state.routes()) {
        if r.is_empty() {
            return None;
        }
        total += c.demand * r.original_cost(&instance.network);
    }
    Some(total)
}

//! Instances, routes and flow states.
//!
//! A [`Network`] is immutable once built. A [`FlowState`] stores one route per
//! commodity plus the aggregate load on every arc; the load vector is kept in
//! sync incrementally by [`FlowState::reroute`].

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack applied when comparing an arc load against its capacity.
pub const CAPACITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl ArcId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("arc {index}: tail {tail} or head {head} outside 0..{num_nodes}")]
    NodeOutOfRange {
        index: usize,
        tail: usize,
        head: usize,
        num_nodes: usize,
    },
    #[error("arc {0} is a self-loop")]
    SelfLoop(usize),
    #[error("arc {index}: cost {cost} must be finite and nonnegative")]
    BadCost { index: usize, cost: f64 },
    #[error("arc {index}: capacity {capacity} must be finite and positive")]
    BadCapacity { index: usize, capacity: f64 },
    #[error("parallel arc {tail}->{head} (arc {index})")]
    ParallelArc {
        index: usize,
        tail: usize,
        head: usize,
    },
    #[error(
        "commodity {index}: origin {origin} or destination {destination} outside 0..{num_nodes}"
    )]
    EndpointOutOfRange {
        index: usize,
        origin: usize,
        destination: usize,
        num_nodes: usize,
    },
    #[error("commodity {0} has identical origin and destination")]
    SameEndpoints(usize),
    #[error("commodity {index}: demand {demand} must be finite and positive")]
    BadDemand { index: usize, demand: f64 },
    #[error("unknown arc id {0}")]
    UnknownArc(usize),
    #[error("expected {expected} routes, got {got}")]
    RouteCount { expected: usize, got: usize },
    #[error("route for commodity {0} is not a simple origin-destination path")]
    InvalidRoute(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: f64,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Commodity {
    pub id: usize,
    pub origin: NodeId,
    pub destination: NodeId,
    pub demand: f64,
}

/// Directed graph with per-arc cost and capacity. Parallel arcs and self-loops
/// are rejected at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    num_nodes: usize,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<ArcId>>,
    in_adj: Vec<Vec<ArcId>>,
}

impl Network {
    /// Builds a network from `(tail, head, cost, capacity)` tuples. Arc ids are
    /// assigned in input order.
    pub fn new(
        num_nodes: usize,
        arcs: impl IntoIterator<Item = (usize, usize, f64, f64)>,
    ) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        let mut out_adj = vec![Vec::new(); num_nodes];
        let mut in_adj = vec![Vec::new(); num_nodes];
        let mut list = Vec::new();
        for (index, (tail, head, cost, capacity)) in arcs.into_iter().enumerate() {
            if tail >= num_nodes || head >= num_nodes {
                return Err(ModelError::NodeOutOfRange {
                    index,
                    tail,
                    head,
                    num_nodes,
                });
            }
            if tail == head {
                return Err(ModelError::SelfLoop(index));
            }
            if !(cost.is_finite() && cost >= 0.0) {
                return Err(ModelError::BadCost { index, cost });
            }
            if !(capacity.is_finite() && capacity > 0.0) {
                return Err(ModelError::BadCapacity { index, capacity });
            }
            if !seen.insert((tail, head)) {
                return Err(ModelError::ParallelArc { index, tail, head });
            }
            let id = ArcId(index);
            out_adj[tail].push(id);
            in_adj[head].push(id);
            list.push(Arc {
                id,
                tail: NodeId(tail),
                head: NodeId(head),
                cost,
                capacity,
            });
        }
        Ok(Network {
            num_nodes,
            arcs: list,
            out_adj,
            in_adj,
        })
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0]
    }

    pub fn get_arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs.get(id.0)
    }

    /// Arcs leaving `node`.
    #[inline]
    pub fn outgoing(&self, node: NodeId) -> &[ArcId] {
        &self.out_adj[node.0]
    }

    /// Arcs entering `node`.
    #[inline]
    pub fn incoming(&self, node: NodeId) -> &[ArcId] {
        &self.in_adj[node.0]
    }

    pub fn find_arc(&self, tail: NodeId, head: NodeId) -> Option<ArcId> {
        self.out_adj[tail.0]
            .iter()
            .copied()
            .find(|&a| self.arcs[a.0].head == head)
    }

    /// Returns a copy of this network with capacities replaced.
    pub fn with_capacities(&self, capacities: &[f64]) -> Result<Network, ModelError> {
        assert_eq!(capacities.len(), self.arcs.len());
        Network::new(
            self.num_nodes,
            self.arcs
                .iter()
                .zip(capacities)
                .map(|(a, &u)| (a.tail.0, a.head.0, a.cost, u)),
        )
    }
}

/// Ordered arc sequence from a commodity's origin to its destination. An empty
/// route means the commodity is unrouted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Route(pub Vec<ArcId>);

impl Route {
    pub fn empty() -> Self {
        Route(Vec::new())
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn arcs(&self) -> &[ArcId] {
        &self.0
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.0.contains(&arc)
    }

    /// Sum of original arc costs along the route.
    pub fn original_cost(&self, network: &Network) -> f64 {
        self.0.iter().fold(0.0, |acc, &a| acc + network.arc(a).cost)
    }
}

impl From<Vec<ArcId>> for Route {
    fn from(arcs: Vec<ArcId>) -> Self {
        Route(arcs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub network: Network,
    pub commodities: Vec<Commodity>,
    /// Known capacity-feasible routing, one route per commodity, if available.
    pub certificate: Option<Vec<Route>>,
}

impl Instance {
    /// Builds an instance from `(origin, destination, demand)` triples.
    pub fn new(
        network: Network,
        commodities: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, ModelError> {
        let n = network.num_nodes();
        let mut list = Vec::new();
        for (index, (origin, destination, demand)) in commodities.into_iter().enumerate() {
            if origin >= n || destination >= n {
                return Err(ModelError::EndpointOutOfRange {
                    index,
                    origin,
                    destination,
                    num_nodes: n,
                });
            }
            if origin == destination {
                return Err(ModelError::SameEndpoints(index));
            }
            if !(demand.is_finite() && demand > 0.0) {
                return Err(ModelError::BadDemand { index, demand });
            }
            list.push(Commodity {
                id: index,
                origin: NodeId(origin),
                destination: NodeId(destination),
                demand,
            });
        }
        Ok(Instance {
            network,
            commodities: list,
            certificate: None,
        })
    }

    /// Attaches a certificate routing after checking every route is a valid path.
    pub fn with_certificate(mut self, routes: Vec<Route>) -> Result<Self, ModelError> {
        if routes.len() != self.commodities.len() {
            return Err(ModelError::RouteCount {
                expected: self.commodities.len(),
                got: routes.len(),
            });
        }
        for (k, route) in routes.iter().enumerate() {
            if !validate_route(&self.network, &self.commodities[k], route)? {
                return Err(ModelError::InvalidRoute(k));
            }
        }
        self.certificate = Some(routes);
        Ok(self)
    }

    #[inline]
    pub fn num_commodities(&self) -> usize {
        self.commodities.len()
    }

    pub fn max_demand(&self) -> f64 {
        self.commodities
            .iter()
            .map(|c| c.demand)
            .fold(0.0, f64::max)
    }
}

/// Checks that `route` is empty or a simple directed path from the commodity's
/// origin to its destination. Unknown arc ids are a structural error.
pub fn validate_route(
    network: &Network,
    commodity: &Commodity,
    route: &Route,
) -> Result<bool, ModelError> {
    for &a in route.arcs() {
        if network.get_arc(a).is_none() {
            return Err(ModelError::UnknownArc(a.0));
        }
    }
    if route.is_empty() {
        return Ok(true);
    }
    if route.len() >= network.num_nodes() {
        return Ok(false);
    }
    let mut visited = vec![false; network.num_nodes()];
    let mut at = commodity.origin;
    visited[at.0] = true;
    for &a in route.arcs() {
        let arc = network.arc(a);
        if arc.tail != at || visited[arc.head.0] {
            return Ok(false);
        }
        at = arc.head;
        visited[at.0] = true;
    }
    Ok(at == commodity.destination)
}

/// Current routing: one route per commodity plus the per-arc total of routed
/// demand.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    routes: Vec<Route>,
    arc_load: Vec<f64>,
}

impl FlowState {
    /// All commodities unrouted, all loads zero.
    pub fn empty(instance: &Instance) -> Self {
        FlowState {
            routes: vec![Route::empty(); instance.num_commodities()],
            arc_load: vec![0.0; instance.network.num_arcs()],
        }
    }

    /// Builds a state from explicit routes, validating each one.
    pub fn from_routes(instance: &Instance, routes: Vec<Route>) -> Result<Self, ModelError> {
        if routes.len() != instance.num_commodities() {
            return Err(ModelError::RouteCount {
                expected: instance.num_commodities(),
                got: routes.len(),
            });
        }
        for (k, route) in routes.iter().enumerate() {
            if !validate_route(&instance.network, &instance.commodities[k], route)? {
                return Err(ModelError::InvalidRoute(k));
            }
        }
        let arc_load = compute_loads(instance, &routes);
        Ok(FlowState { routes, arc_load })
    }

    #[inline]
    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    #[inline]
    pub fn route(&self, k: usize) -> &Route {
        &self.routes[k]
    }

    #[inline]
    pub fn arc_load(&self) -> &[f64] {
        &self.arc_load
    }

    #[inline]
    pub fn load(&self, arc: ArcId) -> f64 {
        self.arc_load[arc.0]
    }

    pub fn into_routes(self) -> Vec<Route> {
        self.routes
    }

    /// Replaces commodity `k`'s route, removing its demand from the old arcs and
    /// adding it to the new ones. The caller is responsible for `route` being
    /// valid for `k`.
    pub fn reroute(&mut self, instance: &Instance, k: usize, route: Route) {
        let demand = instance.commodities[k].demand;
        for &a in self.routes[k].arcs() {
            self.arc_load[a.0] -= demand;
        }
        for &a in route.arcs() {
            self.arc_load[a.0] += demand;
        }
        self.routes[k] = route;
    }

    /// Loads recomputed from scratch.
    pub fn recomputed_loads(&self, instance: &Instance) -> Vec<f64> {
        compute_loads(instance, &self.routes)
    }

    /// Number of arcs whose load exceeds capacity (with tolerance).
    pub fn violated_arcs(&self, network: &Network) -> usize {
        network
            .arcs()
            .iter()
            .filter(|a| !within_capacity(self.arc_load[a.id.0], a.capacity))
            .count()
    }
}

fn compute_loads(instance: &Instance, routes: &[Route]) -> Vec<f64> {
    let mut load = vec![0.0; instance.network.num_arcs()];
    for (c, route) in instance.commodities.iter().zip(routes) {
        for &a in route.arcs() {
            load[a.0] += c.demand;
        }
    }
    load
}

/// `load <= capacity` up to [`CAPACITY_TOLERANCE`] relative slack.
#[inline]
pub fn within_capacity(load: f64, capacity: f64) -> bool {
    load <= capacity + CAPACITY_TOLERANCE * capacity
}

/// Capacity left on `arc` for `commodity` once every other commodity's load is
/// accounted for. May be negative.
pub fn residual_capacity(state: &FlowState, arc: &Arc, commodity: &Commodity) -> f64 {
    let own = if state.route(commodity.id).contains(arc.id) {
        commodity.demand
    } else {
        0.0
    };
    arc.capacity - (state.load(arc.id) - own)
}

/// True iff every commodity is routed and no arc exceeds its capacity.
pub fn capacity_feasible(state: &FlowState, network: &Network) -> bool {
    state.routes.iter().all(|r| !r.is_empty())
        && network
            .arcs()
            .iter()
            .all(|a| within_capacity(state.arc_load[a.id.0], a.capacity))
}

/// Demand-weighted original routing cost.
pub fn total_cost(state: &FlowState, instance: &Instance) -> f64 {
    instance
        .commodities
        .iter()
        .zip(&state.routes)
        .map(|(c, r)| c.demand * r.original_cost(&instance.network))
        .sum()
}

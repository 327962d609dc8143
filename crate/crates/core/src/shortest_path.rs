//! Single-pair Dijkstra over a pluggable per-arc cost.
//!
//! The same search serves three cost models: original arc cost, market cost
//! under the current flow state, and the capacity-gated feasible cost. Ties are
//! broken deterministically: the heap pops the lower node id among equal
//! labels, and a label is only replaced by a strictly smaller one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::model::{ArcId, Commodity, FlowState, Network, NodeId, Route};
use crate::pricing::{feasible_cost_for, market_cost, IhhParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("cost oracle returned {cost} for arc {arc}; costs must be finite and nonnegative")]
    InvalidCost { arc: usize, cost: f64 },
}

/// Per-arc cost used by the search.
pub trait CostOracle {
    fn arc_cost(&self, arc: ArcId) -> f64;
}

impl<F: Fn(ArcId) -> f64> CostOracle for F {
    #[inline]
    fn arc_cost(&self, arc: ArcId) -> f64 {
        self(arc)
    }
}

pub struct OriginalCost<'a> {
    pub network: &'a Network,
}

impl CostOracle for OriginalCost<'_> {
    #[inline]
    fn arc_cost(&self, arc: ArcId) -> f64 {
        self.network.arc(arc).cost
    }
}

/// Marks the arcs of one commodity's incumbent route so residuals can be
/// evaluated in O(1) per arc.
#[derive(Debug, Clone)]
pub struct RouteMask {
    on_route: Vec<bool>,
}

impl RouteMask {
    pub fn new(num_arcs: usize) -> Self {
        RouteMask {
            on_route: vec![false; num_arcs],
        }
    }

    pub fn set(&mut self, route: &Route) {
        for &a in route.arcs() {
            self.on_route[a.0] = true;
        }
    }

    pub fn clear(&mut self, route: &Route) {
        for &a in route.arcs() {
            self.on_route[a.0] = false;
        }
    }

    #[inline]
    pub fn contains(&self, arc: ArcId) -> bool {
        self.on_route[arc.0]
    }
}

/// Residual of `arc` for `commodity`, using a mask of the commodity's own route.
#[inline]
pub(crate) fn masked_residual(
    network: &Network,
    state: &FlowState,
    mask: &RouteMask,
    arc: ArcId,
    demand: f64,
) -> f64 {
    let own = if mask.contains(arc) { demand } else { 0.0 };
    network.arc(arc).capacity - (state.load(arc) - own)
}

pub struct MarketCost<'a> {
    pub network: &'a Network,
    pub state: &'a FlowState,
    pub params: &'a IhhParams,
    pub mask: &'a RouteMask,
    pub demand: f64,
}

impl CostOracle for MarketCost<'_> {
    #[inline]
    fn arc_cost(&self, arc: ArcId) -> f64 {
        let r = masked_residual(self.network, self.state, self.mask, arc, self.demand);
        market_cost(self.params, self.network.arc(arc), r, self.demand)
    }
}

pub struct FeasibleCost<'a> {
    pub network: &'a Network,
    pub state: &'a FlowState,
    pub params: &'a IhhParams,
    pub mask: &'a RouteMask,
    pub demand: f64,
}

impl CostOracle for FeasibleCost<'_> {
    #[inline]
    fn arc_cost(&self, arc: ArcId) -> f64 {
        let r = masked_residual(self.network, self.state, self.mask, arc, self.demand);
        feasible_cost_for(self.params, self.network.arc(arc), r, self.demand)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub route: Route,
    /// Sum of oracle costs along `route`; zero when the route is empty.
    pub cost: f64,
}

impl PathResult {
    pub fn is_empty(&self) -> bool {
        self.route.is_empty()
    }
}

#[derive(Debug, Copy, Clone, PartialEq)]
struct Label {
    cost: f64,
    node: usize,
}

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (cost, node)
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable Dijkstra scratch space. One instance per thread.
#[derive(Debug, Default)]
pub struct ShortestPath {
    dist: Vec<f64>,
    parent: Vec<Option<ArcId>>,
    settled: Vec<bool>,
    touched: Vec<usize>,
    heap: BinaryHeap<Label>,
}

impl ShortestPath {
    pub fn new(num_nodes: usize) -> Self {
        ShortestPath {
            dist: vec![f64::INFINITY; num_nodes],
            parent: vec![None; num_nodes],
            settled: vec![false; num_nodes],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, num_nodes: usize) {
        if self.dist.len() != num_nodes {
            *self = ShortestPath::new(num_nodes);
            return;
        }
        for &v in &self.touched {
            self.dist[v] = f64::INFINITY;
            self.parent[v] = None;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Minimum-cost path from `origin` to `destination`, or an empty route when
    /// the destination is unreachable.
    pub fn run<O: CostOracle + ?Sized>(
        &mut self,
        network: &Network,
        origin: NodeId,
        destination: NodeId,
        oracle: &O,
    ) -> Result<PathResult, PathError> {
        self.reset(network.num_nodes());
        if origin == destination {
            return Ok(PathResult {
                route: Route::empty(),
                cost: 0.0,
            });
        }
        self.dist[origin.0] = 0.0;
        self.touched.push(origin.0);
        self.heap.push(Label {
            cost: 0.0,
            node: origin.0,
        });
        while let Some(Label { cost, node }) = self.heap.pop() {
            if self.settled[node] {
                continue;
            }
            self.settled[node] = true;
            if node == destination.0 {
                break;
            }
            for &a in network.outgoing(NodeId(node)) {
                let w = oracle.arc_cost(a);
                if !(w.is_finite() && w >= 0.0) {
                    return Err(PathError::InvalidCost { arc: a.0, cost: w });
                }
                let head = network.arc(a).head.0;
                if self.settled[head] {
                    continue;
                }
                let next = cost + w;
                if next < self.dist[head] {
                    if self.dist[head] == f64::INFINITY {
                        self.touched.push(head);
                    }
                    self.dist[head] = next;
                    self.parent[head] = Some(a);
                    self.heap.push(Label {
                        cost: next,
                        node: head,
                    });
                }
            }
        }
        if !self.settled[destination.0] {
            return Ok(PathResult {
                route: Route::empty(),
                cost: 0.0,
            });
        }
        let mut arcs = Vec::new();
        let mut at = destination.0;
        while let Some(a) = self.parent[at] {
            arcs.push(a);
            at = network.arc(a).tail.0;
        }
        arcs.reverse();
        Ok(PathResult {
            route: Route(arcs),
            cost: self.dist[destination.0],
        })
    }
}

/// One-shot search with fresh scratch space.
pub fn shortest_path<O: CostOracle + ?Sized>(
    network: &Network,
    origin: NodeId,
    destination: NodeId,
    oracle: &O,
) -> Result<PathResult, PathError> {
    ShortestPath::new(network.num_nodes()).run(network, origin, destination, oracle)
}

/// Cheapest path under original arc costs, ignoring capacities.
pub fn sp_original(network: &Network, commodity: &Commodity) -> Result<PathResult, PathError> {
    shortest_path(
        network,
        commodity.origin,
        commodity.destination,
        &OriginalCost { network },
    )
}

/// Cheapest path under market costs for `commodity` in `state`.
pub fn sp_market(
    network: &Network,
    state: &FlowState,
    params: &IhhParams,
    commodity: &Commodity,
) -> Result<PathResult, PathError> {
    let mut mask = RouteMask::new(network.num_arcs());
    mask.set(state.route(commodity.id));
    let oracle = MarketCost {
        network,
        state,
        params,
        mask: &mask,
        demand: commodity.demand,
    };
    shortest_path(network, commodity.origin, commodity.destination, &oracle)
}

/// Cheapest path under feasible arc costs. A cost `>= params.big_m` means no
/// path with enough residual capacity on every arc exists.
pub fn sp_feasible(
    network: &Network,
    state: &FlowState,
    params: &IhhParams,
    commodity: &Commodity,
) -> Result<PathResult, PathError> {
    let mut mask = RouteMask::new(network.num_arcs());
    mask.set(state.route(commodity.id));
    let oracle = FeasibleCost {
        network,
        state,
        params,
        mask: &mask,
        demand: commodity.demand,
    };
    shortest_path(network, commodity.origin, commodity.destination, &oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_route, Instance};

    fn diamond() -> Instance {
        // 0->1->3 costs 4+6 = 10, 0->2->3 costs 5+4 = 9
        let net = Network::new(
            4,
            [
                (0, 1, 4.0, 10.0),
                (1, 3, 6.0, 10.0),
                (0, 2, 5.0, 10.0),
                (2, 3, 4.0, 10.0),
            ],
        )
        .unwrap();
        Instance::new(net, [(0, 3, 1.0)]).unwrap()
    }

    #[test]
    fn single_arc() {
        let net = Network::new(2, [(0, 1, 5.0, 1.0)]).unwrap();
        let inst = Instance::new(net, [(0, 1, 1.0)]).unwrap();
        let r = sp_original(&inst.network, &inst.commodities[0]).unwrap();
        assert_eq!(r.route, Route(vec![ArcId(0)]));
        assert_eq!(r.cost, 5.0);
    }

    #[test]
    fn unreachable_is_empty() {
        let net = Network::new(3, [(0, 1, 5.0, 1.0), (2, 1, 1.0, 1.0)]).unwrap();
        let inst = Instance::new(net, [(0, 2, 1.0), (1, 0, 1.0)]).unwrap();
        for c in &inst.commodities {
            let r = sp_original(&inst.network, c).unwrap();
            assert!(r.is_empty());
            assert_eq!(r.cost, 0.0);
        }
    }

    #[test]
    fn diamond_picks_cheaper_branch() {
        let inst = diamond();
        let r = sp_original(&inst.network, &inst.commodities[0]).unwrap();
        assert_eq!(r.route, Route(vec![ArcId(2), ArcId(3)]));
        assert_eq!(r.cost, 9.0);
    }

    #[test]
    fn negative_cost_is_an_error() {
        let inst = diamond();
        let oracle = |a: ArcId| if a.0 == 0 { -1.0 } else { 1.0 };
        assert_eq!(
            shortest_path(&inst.network, NodeId(0), NodeId(3), &oracle),
            Err(PathError::InvalidCost { arc: 0, cost: -1.0 })
        );
        let nan = |_: ArcId| f64::NAN;
        assert!(shortest_path(&inst.network, NodeId(0), NodeId(3), &nan).is_err());
    }

    #[test]
    fn equal_costs_give_min_hops() {
        // 0->1->2->3 and 0->4->3, all unit costs
        let net = Network::new(
            5,
            [
                (0, 1, 1.0, 1.0),
                (1, 2, 1.0, 1.0),
                (2, 3, 1.0, 1.0),
                (0, 4, 1.0, 1.0),
                (4, 3, 1.0, 1.0),
            ],
        )
        .unwrap();
        let inst = Instance::new(net, [(0, 3, 1.0)]).unwrap();
        let r = sp_original(&inst.network, &inst.commodities[0]).unwrap();
        assert_eq!(r.route.len(), 2);
    }

    #[test]
    fn ties_prefer_lower_node_id() {
        // two equal paths 0->1->3 and 0->2->3
        let net = Network::new(
            4,
            [
                (0, 2, 1.0, 1.0),
                (0, 1, 1.0, 1.0),
                (2, 3, 1.0, 1.0),
                (1, 3, 1.0, 1.0),
            ],
        )
        .unwrap();
        let inst = Instance::new(net, [(0, 3, 1.0)]).unwrap();
        let r = sp_original(&inst.network, &inst.commodities[0]).unwrap();
        assert_eq!(r.route, Route(vec![ArcId(1), ArcId(3)]));
    }

    #[test]
    fn zero_cost_cycles_still_simple() {
        let net = Network::new(
            4,
            [
                (0, 1, 0.0, 1.0),
                (1, 0, 0.0, 1.0),
                (1, 2, 0.0, 1.0),
                (2, 1, 0.0, 1.0),
                (2, 3, 0.0, 1.0),
            ],
        )
        .unwrap();
        let inst = Instance::new(net, [(0, 3, 1.0)]).unwrap();
        let r = sp_original(&inst.network, &inst.commodities[0]).unwrap();
        assert!(validate_route(&inst.network, &inst.commodities[0], &r.route).unwrap());
        assert_eq!(r.route.len(), 3);
    }

    #[test]
    fn scratch_reuse_matches_fresh() {
        let inst = diamond();
        let mut sp = ShortestPath::new(4);
        let oracle = OriginalCost {
            network: &inst.network,
        };
        let a = sp
            .run(&inst.network, NodeId(0), NodeId(3), &oracle)
            .unwrap();
        let b = sp
            .run(&inst.network, NodeId(1), NodeId(3), &oracle)
            .unwrap();
        let c = sp
            .run(&inst.network, NodeId(0), NodeId(3), &oracle)
            .unwrap();
        assert_eq!(a, c);
        assert_eq!(b.route, Route(vec![ArcId(1)]));
    }
}

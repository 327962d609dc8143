//! Random mesh instance generator.
//!
//! Nodes are scattered in the unit square and arcs are drawn with probability
//! decaying with Euclidean distance. Arc costs are an affine map of length that
//! pins the minimum and 90th-percentile cost. Capacities are the demand routed
//! over each arc when every commodity follows a shortest path under random
//! integer lengths, so that routing (the certificate) is always feasible.
//!
//! Topology, commodities and capacities draw from separate generator streams:
//! changing only the commodity count leaves the network untouched.

use std::collections::HashSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ArcId, Commodity, Instance, ModelError, Network, NodeId, Route};
use crate::shortest_path::{OriginalCost, ShortestPath};

const TOPOLOGY_STREAM: u64 = 0;
const COMMODITY_STREAM: u64 = 1;
const CAPACITY_STREAM: u64 = 2;

/// Random-shortest-path lengths are integers in `1..=RANDOM_LENGTH_MAX`.
pub const RANDOM_LENGTH_MAX: u32 = 10_000;

const MAX_REPLACEMENT_ROUNDS: usize = 500;
const MAX_REPIN_ROUNDS: usize = 200;
const DOMINANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("{num_arcs} arcs cannot strongly connect {num_nodes} nodes")]
    TooFewArcs { num_nodes: usize, num_arcs: usize },
    #[error("hub commodities requested but only {0} hub node(s)")]
    TooFewHubs(usize),
    #[error("arc lengths are degenerate; cannot fit the cost range")]
    DegenerateCosts,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub num_nodes: usize,
    pub num_arcs: usize,
    pub num_commodities: usize,
    pub cost_min: f64,
    pub cost_p90: f64,
    pub demand_min: f64,
    pub demand_max: f64,
    /// Fraction of nodes designated hubs.
    pub hub_fraction: f64,
    /// Fraction of commodities forced to run hub to hub.
    pub hub_commodity_fraction: f64,
    /// Arc probability is proportional to `distance^-distance_decay_exponent`.
    pub distance_decay_exponent: f64,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            num_nodes: 30,
            num_arcs: 90,
            num_commodities: 112,
            cost_min: 10.0,
            cost_p90: 2000.0,
            demand_min: 5.0,
            demand_max: 25.0,
            hub_fraction: 0.0,
            hub_commodity_fraction: 0.0,
            distance_decay_exponent: 2.0,
            seed: 0,
        }
    }
}

impl GenSpec {
    /// 30 nodes, 90 arcs, 112 commodities, uniform endpoints.
    pub fn a1(seed: u64) -> Self {
        GenSpec {
            seed,
            ..GenSpec::default()
        }
    }

    /// Size presets for the A (uniform) and H (hub) test groups, 1 through 8.
    pub fn group(name: &str, seed: u64) -> Option<Self> {
        let (hub, idx) = match name.as_bytes() {
            [b'A' | b'a', d] => (false, d.checked_sub(b'0')?),
            [b'H' | b'h', d] => (true, d.checked_sub(b'0')?),
            _ => return None,
        };
        let (n, a, k) = match idx {
            1 => (30, 90, 112),
            2 => (30, 90, 281),
            3 => (30, 360, 1728),
            4 => (30, 360, 4320),
            5 => (120, 360, 257),
            6 => (120, 360, 642),
            7 => (120, 1440, 4937),
            8 => (120, 1440, 12342),
            _ => return None,
        };
        let mut spec = GenSpec {
            num_nodes: n,
            num_arcs: a,
            num_commodities: k,
            seed,
            ..GenSpec::default()
        };
        if hub {
            spec.hub_fraction = 0.1;
            spec.hub_commodity_fraction = 0.8;
        }
        Some(spec)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InvalidSpec(m));
        let n = self.num_nodes;
        if n < 2 {
            return bad(format!("need at least 2 nodes, got {n}"));
        }
        if self.num_arcs > n * (n - 1) {
            return bad(format!(
                "{} arcs exceed the {} possible on {n} nodes",
                self.num_arcs,
                n * (n - 1)
            ));
        }
        if !(self.cost_min.is_finite() && self.cost_min > 0.0 && self.cost_min < self.cost_p90)
            || !self.cost_p90.is_finite()
        {
            return bad(format!(
                "need 0 < cost_min < cost_p90, got {} and {}",
                self.cost_min, self.cost_p90
            ));
        }
        if !(self.demand_min > 0.0 && self.demand_min <= self.demand_max)
            || !self.demand_max.is_finite()
        {
            return bad(format!(
                "need 0 < demand_min <= demand_max, got {} and {}",
                self.demand_min, self.demand_max
            ));
        }
        for (name, v) in [
            ("hub_fraction", self.hub_fraction),
            ("hub_commodity_fraction", self.hub_commodity_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if !(self.distance_decay_exponent.is_finite() && self.distance_decay_exponent > 0.0) {
            return bad(format!(
                "distance_decay_exponent must be positive, got {}",
                self.distance_decay_exponent
            ));
        }
        if self.num_arcs < n {
            return Err(GenError::TooFewArcs {
                num_nodes: n,
                num_arcs: self.num_arcs,
            });
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Capacities plus the routing that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityAssignment {
    pub capacities: Vec<f64>,
    pub certificate: Vec<Route>,
}

/// Generates an instance. The result always carries its certificate routing.
pub fn generate(spec: &GenSpec) -> Result<Instance, GenError> {
    spec.validate()?;
    let mut rng = spec.rng(TOPOLOGY_STREAM);
    let positions: Vec<(f64, f64)> = (0..spec.num_nodes)
        .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    let mut pool = CandidatePool::new(&positions, spec.distance_decay_exponent, &mut rng);
    let mut arcs = pool.take(spec.num_arcs);
    repair_connectivity(&positions, &mut arcs, spec.num_arcs)?;
    let costs = fit_costs(spec, &positions, &mut arcs, &mut pool)?;

    let mut arc_list: Vec<((usize, usize), f64)> = arcs.into_iter().zip(costs).collect();
    arc_list.sort_by_key(|&(pair, _)| pair);
    let placeholder = Network::new(
        spec.num_nodes,
        arc_list.iter().map(|&((t, h), c)| (t, h, c, 1.0)),
    )?;

    let commodities = sample_commodities(spec)?;
    let shell = Instance::new(placeholder.clone(), commodities.iter().copied())?;
    let assignment =
        assign_capacities(&placeholder, &shell.commodities, spec.seed, spec.demand_min);
    let network = placeholder.with_capacities(&assignment.capacities)?;
    let instance = Instance::new(network, commodities)?.with_certificate(assignment.certificate)?;
    Ok(instance)
}

/// Routes every commodity on a shortest path under fresh random integer
/// lengths and sets each arc's capacity to the demand it carries. Unused arcs
/// get `floor`.
pub fn assign_capacities(
    network: &Network,
    commodities: &[Commodity],
    seed: u64,
    floor: f64,
) -> CapacityAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CAPACITY_STREAM);
    let mut sp = ShortestPath::new(network.num_nodes());
    let mut lengths = vec![0.0; network.num_arcs()];
    let mut capacities = vec![0.0; network.num_arcs()];
    let mut certificate = Vec::with_capacity(commodities.len());
    for c in commodities {
        for l in lengths.iter_mut() {
            *l = f64::from(rng.random_range(1..=RANDOM_LENGTH_MAX));
        }
        let oracle = |a: ArcId| lengths[a.0];
        let found = sp
            .run(network, c.origin, c.destination, &oracle)
            .expect("random lengths are positive");
        for &a in found.route.arcs() {
            capacities[a.0] += c.demand;
        }
        certificate.push(found.route);
    }
    for u in capacities.iter_mut() {
        if *u == 0.0 {
            *u = floor;
        }
    }
    CapacityAssignment {
        capacities,
        certificate,
    }
}

fn distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

/// All ordered node pairs in a random order equivalent to successive weighted
/// draws without replacement (exponential-key method).
struct CandidatePool {
    order: Vec<(usize, usize)>,
    next: usize,
}

impl CandidatePool {
    fn new(positions: &[(f64, f64)], exponent: f64, rng: &mut ChaCha8Rng) -> Self {
        let n = positions.len();
        let mut keyed = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let w = distance(positions[i], positions[j])
                    .max(1e-12)
                    .powf(-exponent);
                let u: f64 = rng.random();
                // larger key drawn first; ln(u)/w is in (-inf, 0]
                let key = (1.0 - u).ln() / w;
                keyed.push((key, (i, j)));
            }
        }
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        CandidatePool {
            order: keyed.into_iter().map(|(_, p)| p).collect(),
            next: 0,
        }
    }

    fn take(&mut self, count: usize) -> Vec<(usize, usize)> {
        let end = (self.next + count).min(self.order.len());
        let out = self.order[self.next..end].to_vec();
        self.next = end;
        out
    }

    fn next_unused(&mut self, present: &HashSet<(usize, usize)>) -> Option<(usize, usize)> {
        while self.next < self.order.len() {
            let p = self.order[self.next];
            self.next += 1;
            if !present.contains(&p) {
                return Some(p);
            }
        }
        None
    }
}

fn is_strongly_connected(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(t, h) in arcs {
        fwd[t].push(h);
        bwd[h].push(t);
    }
    let reach_all = |adj: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    };
    reach_all(&fwd) && reach_all(&bwd)
}

/// Adds shortest missing arcs until the graph is strongly connected, then drops
/// the longest arcs whose removal keeps it so until `target` arcs remain.
fn repair_connectivity(
    positions: &[(f64, f64)],
    arcs: &mut Vec<(usize, usize)>,
    target: usize,
) -> Result<(), GenError> {
    let n = positions.len();
    loop {
        let mut g = DiGraph::<(), ()>::with_capacity(n, arcs.len());
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for &(t, h) in arcs.iter() {
            g.add_edge(nodes[t], nodes[h], ());
        }
        let sccs = tarjan_scc(&g);
        if sccs.len() <= 1 {
            break;
        }
        let mut comp = vec![0usize; n];
        for (ci, members) in sccs.iter().enumerate() {
            for v in members {
                comp[v.index()] = ci;
            }
        }
        let mut has_out = vec![false; sccs.len()];
        let mut has_in = vec![false; sccs.len()];
        for &(t, h) in arcs.iter() {
            if comp[t] != comp[h] {
                has_out[comp[t]] = true;
                has_in[comp[h]] = true;
            }
        }
        let (ci, outward) = match (0..sccs.len()).find(|&c| !has_out[c]) {
            Some(c) => (c, true),
            None => (
                (0..sccs.len())
                    .find(|&c| !has_in[c])
                    .expect("condensation is a DAG"),
                false,
            ),
        };
        let mut best: Option<(f64, (usize, usize))> = None;
        for i in (0..n).filter(|&v| comp[v] == ci) {
            for j in (0..n).filter(|&v| comp[v] != ci) {
                let pair = if outward { (i, j) } else { (j, i) };
                let d = distance(positions[i], positions[j]);
                if best.is_none_or(|(bd, bp)| d < bd || (d == bd && pair < bp)) {
                    best = Some((d, pair));
                }
            }
        }
        arcs.push(best.expect("another component exists").1);
    }

    if arcs.len() > target {
        let len = |&(t, h): &(usize, usize)| distance(positions[t], positions[h]);
        let mut by_length: Vec<(usize, usize)> = arcs.clone();
        by_length.sort_by(|a, b| len(b).total_cmp(&len(a)).then(a.cmp(b)));
        for cand in by_length {
            if arcs.len() <= target {
                break;
            }
            let pos = arcs.iter().position(|&p| p == cand).expect("present");
            arcs.swap_remove(pos);
            if !is_strongly_connected(n, arcs) {
                arcs.push(cand);
            }
        }
        if arcs.len() > target {
            return Err(GenError::TooFewArcs {
                num_nodes: n,
                num_arcs: target,
            });
        }
    }
    Ok(())
}

/// Nearest-rank 90th percentile index into a sorted slice of length `len`.
pub fn p90_rank(len: usize) -> usize {
    ((len as f64 * 0.9).ceil() as usize).clamp(1, len) - 1
}

/// Empirical 90th percentile (nearest rank).
pub fn percentile_90(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[p90_rank(v.len())]
}

fn affine_costs(spec: &GenSpec, lengths: &[f64]) -> Result<Vec<f64>, GenError> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by(|&a, &b| lengths[a].total_cmp(&lengths[b]).then(a.cmp(&b)));
    let l_min = lengths[order[0]];
    let p90_idx = order[p90_rank(order.len())];
    let l_p90 = lengths[p90_idx];
    if l_p90.is_nan() || l_p90 <= l_min {
        return Err(GenError::DegenerateCosts);
    }
    let scale = (spec.cost_p90 - spec.cost_min) / (l_p90 - l_min);
    let offset = spec.cost_min - scale * l_min;
    let mut costs: Vec<f64> = lengths
        .iter()
        .map(|&l| (scale * l + offset).max(spec.cost_min))
        .collect();
    // pin the anchors exactly
    for (i, &l) in lengths.iter().enumerate() {
        if l == l_min {
            costs[i] = spec.cost_min;
        } else if l == l_p90 {
            costs[i] = spec.cost_p90;
        }
    }
    Ok(costs)
}

/// Arcs undercut by some other path between their endpoints.
fn dominated_arcs(n: usize, arcs: &[(usize, usize)], costs: &[f64]) -> Vec<usize> {
    let network = Network::new(
        n,
        arcs.iter().zip(costs).map(|(&(t, h), &c)| (t, h, c, 1.0)),
    )
    .expect("generated arcs are valid");
    let oracle = OriginalCost { network: &network };
    let mut sp = ShortestPath::new(n);
    let mut out = Vec::new();
    for (i, &(t, h)) in arcs.iter().enumerate() {
        let found = sp
            .run(&network, NodeId(t), NodeId(h), &oracle)
            .expect("costs are nonnegative");
        if found.cost < costs[i] * (1.0 - DOMINANCE_TOLERANCE) {
            out.push(i);
        }
    }
    out
}

/// Assigns costs pinning min and 90th percentile. When the affine map has a
/// negative offset, multi-arc paths can undercut a direct arc; such arcs are
/// swapped for fresh candidates until none remain. If the candidate pool runs
/// dry, costs alternate between their shortest-path closure and a re-pinned
/// affine map until no arc is undercut.
fn fit_costs(
    spec: &GenSpec,
    positions: &[(f64, f64)],
    arcs: &mut [(usize, usize)],
    pool: &mut CandidatePool,
) -> Result<Vec<f64>, GenError> {
    let n = positions.len();
    let lengths = |arcs: &[(usize, usize)]| -> Vec<f64> {
        arcs.iter()
            .map(|&(t, h)| distance(positions[t], positions[h]))
            .collect()
    };
    let mut present: HashSet<(usize, usize)> = arcs.iter().copied().collect();
    for _ in 0..MAX_REPLACEMENT_ROUNDS {
        let costs = affine_costs(spec, &lengths(arcs))?;
        let dominated = dominated_arcs(n, arcs, &costs);
        if dominated.is_empty() {
            return Ok(costs);
        }
        let mut exhausted = false;
        for i in dominated {
            // the pair stays in `present` so it is never drawn again
            match pool.next_unused(&present) {
                Some(p) => {
                    present.insert(p);
                    arcs[i] = p;
                }
                None => {
                    exhausted = true;
                    break;
                }
            }
        }
        if exhausted {
            break;
        }
    }
    // alternate closure and re-pinning, treating closed costs as lengths
    let mut costs = affine_costs(spec, &lengths(arcs))?;
    for _ in 0..MAX_REPIN_ROUNDS {
        let closed = metric_closure(n, arcs, &costs);
        costs = match affine_costs(spec, &closed) {
            Ok(c) => c,
            Err(_) => return Ok(closed),
        };
        if dominated_arcs(n, arcs, &costs).is_empty() {
            return Ok(costs);
        }
    }
    Ok(metric_closure(n, arcs, &costs))
}

fn metric_closure(n: usize, arcs: &[(usize, usize)], costs: &[f64]) -> Vec<f64> {
    let network = Network::new(
        n,
        arcs.iter().zip(costs).map(|(&(t, h), &c)| (t, h, c, 1.0)),
    )
    .expect("generated arcs are valid");
    let oracle = OriginalCost { network: &network };
    let mut sp = ShortestPath::new(n);
    arcs.iter()
        .map(|&(t, h)| {
            sp.run(&network, NodeId(t), NodeId(h), &oracle)
                .expect("costs are nonnegative")
                .cost
        })
        .collect()
}

fn draw_demand(spec: &GenSpec, rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = (spec.demand_min, spec.demand_max);
    if lo.fract() == 0.0 && hi.fract() == 0.0 && hi - lo < 1e15 {
        return rng.random_range(lo as i64..=hi as i64) as f64;
    }
    let tenths_lo = (lo * 10.0).ceil() as i64;
    let tenths_hi = (hi * 10.0).floor() as i64;
    if tenths_lo <= tenths_hi {
        rng.random_range(tenths_lo..=tenths_hi) as f64 / 10.0
    } else {
        rng.random_range(lo..=hi)
    }
}

fn sample_commodities(spec: &GenSpec) -> Result<Vec<(usize, usize, f64)>, GenError> {
    let n = spec.num_nodes;
    let k = spec.num_commodities;
    let mut rng = spec.rng(COMMODITY_STREAM);
    let num_hubs = (spec.hub_fraction * n as f64).round() as usize;
    let num_hub_commodities = (spec.hub_commodity_fraction * k as f64).round() as usize;
    if num_hub_commodities > 0 && num_hubs < 2 {
        return Err(GenError::TooFewHubs(num_hubs));
    }
    let hubs: Vec<usize> = if num_hubs > 0 {
        let mut h = sample(&mut rng, n, num_hubs).into_vec();
        h.sort_unstable();
        h
    } else {
        Vec::new()
    };
    let mut hub_bound = vec![false; k];
    if num_hub_commodities > 0 {
        for i in sample(&mut rng, k, num_hub_commodities) {
            hub_bound[i] = true;
        }
    }
    let mut out = Vec::with_capacity(k);
    for &hub_only in &hub_bound {
        let (o, d) = if hub_only {
            let oi = rng.random_range(0..hubs.len());
            let mut di = rng.random_range(0..hubs.len() - 1);
            if di >= oi {
                di += 1;
            }
            (hubs[oi], hubs[di])
        } else {
            let o = rng.random_range(0..n);
            let mut d = rng.random_range(0..n - 1);
            if d >= o {
                d += 1;
            }
            (o, d)
        };
        out.push((o, d, draw_demand(spec, &mut rng)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{capacity_feasible, FlowState};

    #[test]
    fn spec_validation() {
        let mut s = GenSpec::a1(0);
        s.cost_p90 = 5.0;
        assert!(matches!(s.validate(), Err(GenError::InvalidSpec(_))));
        let mut s = GenSpec::a1(0);
        s.num_arcs = 10;
        assert!(matches!(s.validate(), Err(GenError::TooFewArcs { .. })));
        let mut s = GenSpec::a1(0);
        s.num_arcs = 30 * 29 + 1;
        assert!(matches!(s.validate(), Err(GenError::InvalidSpec(_))));
        let mut s = GenSpec::a1(0);
        s.hub_fraction = 0.03;
        s.hub_commodity_fraction = 0.5;
        assert_eq!(generate(&s).unwrap_err(), GenError::TooFewHubs(1));
    }

    #[test]
    fn group_presets() {
        let s = GenSpec::group("H5", 3).unwrap();
        assert_eq!(
            (s.num_nodes, s.num_arcs, s.num_commodities),
            (120, 360, 257)
        );
        assert_eq!(s.hub_fraction, 0.1);
        assert!(GenSpec::group("A9", 0).is_none());
        assert!(GenSpec::group("B1", 0).is_none());
    }

    #[test]
    fn p90_rank_nearest() {
        assert_eq!(p90_rank(1), 0);
        assert_eq!(p90_rank(10), 8);
        assert_eq!(p90_rank(90), 80);
        assert_eq!(p90_rank(91), 81);
        assert_eq!(
            percentile_90(&[5.0, 1.0, 3.0, 2.0, 4.0, 6.0, 7.0, 8.0, 9.0, 10.0]),
            9.0
        );
    }

    #[test]
    fn single_commodity_capacities() {
        let net = Network::new(
            3,
            [
                (0, 1, 1.0, 1.0),
                (1, 2, 1.0, 1.0),
                (0, 2, 1.0, 1.0),
                (2, 0, 1.0, 1.0),
            ],
        )
        .unwrap();
        let inst = Instance::new(net.clone(), [(0, 2, 10.0)]).unwrap();
        let a = assign_capacities(&net, &inst.commodities, 4, 5.0);
        for &arc in a.certificate[0].arcs() {
            assert!(a.capacities[arc.0] >= 10.0);
        }
        assert_eq!(a.capacities[3], 5.0);
    }

    #[test]
    fn shared_arc_capacity_is_sum() {
        let net = Network::new(2, [(0, 1, 1.0, 1.0), (1, 0, 1.0, 1.0)]).unwrap();
        let inst = Instance::new(net.clone(), [(0, 1, 5.0), (0, 1, 7.0)]).unwrap();
        let a = assign_capacities(&net, &inst.commodities, 0, 5.0);
        assert_eq!(a.capacities, vec![12.0, 5.0]);
    }

    #[test]
    fn certificate_is_feasible() {
        let inst = generate(&GenSpec::a1(11)).unwrap();
        let st = FlowState::from_routes(&inst, inst.certificate.clone().unwrap()).unwrap();
        assert!(capacity_feasible(&st, &inst.network));
    }

    #[test]
    fn topology_independent_of_commodity_count() {
        let mut a = GenSpec::a1(5);
        let g1 = generate(&a).unwrap();
        a.num_commodities = 224;
        let g2 = generate(&a).unwrap();
        let ends = |i: &Instance| {
            i.network
                .arcs()
                .iter()
                .map(|a| (a.tail, a.head, a.cost))
                .collect::<Vec<_>>()
        };
        assert_eq!(ends(&g1), ends(&g2));
        assert_eq!(g1.commodities[..], g2.commodities[..112]);
    }

    #[test]
    fn demands_integral_for_integral_bounds() {
        let inst = generate(&GenSpec::a1(2)).unwrap();
        for c in &inst.commodities {
            assert_eq!(c.demand.fract(), 0.0);
            assert!((5.0..=25.0).contains(&c.demand));
        }
        let mut s = GenSpec::a1(2);
        s.demand_min = 1.25;
        s.demand_max = 1.75;
        let inst = generate(&s).unwrap();
        for c in &inst.commodities {
            assert!((1.25..=1.75).contains(&c.demand));
            assert!(((c.demand * 10.0).round() - c.demand * 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_graph_complete() {
        let s = GenSpec {
            num_nodes: 6,
            num_arcs: 30,
            num_commodities: 5,
            ..GenSpec::default()
        };
        let inst = generate(&s).unwrap();
        assert_eq!(inst.network.num_arcs(), 30);
    }
}

#![allow(dead_code)]

use ihh::generator::{generate, GenSpec};
use ihh::model::Instance;
use ihh::oracle::enumerate_simple_paths;
use ihh::pricing::IhhParams;
use ihh::{FlowState, Network, Route};
use proptest::prelude::*;

/// Tiny generator instance, or `None` when the spec is rejected.
pub fn tiny(nodes: usize, arcs: usize, commodities: usize, seed: u64) -> Option<Instance> {
    let spec = GenSpec {
        num_nodes: nodes,
        num_arcs: arcs.clamp(nodes, nodes * (nodes - 1)),
        num_commodities: commodities,
        seed,
        ..GenSpec::default()
    };
    generate(&spec).ok()
}

pub fn params() -> IhhParams {
    IhhParams {
        beta: 8.0,
        mu: 30.0,
        pi: 3.0,
        lambda0: 43,
        lambda1: 10,
        big_m: 1e6,
    }
}

/// Random digraph plus commodities, as raw tuples.
pub fn arb_instance(max_nodes: usize) -> impl Strategy<Value = Instance> {
    (2..=max_nodes).prop_flat_map(|n| {
        let arcs = prop::collection::vec(
            (0..n, 0..n, 0u32..50, 1u32..40),
            0..(n * (n - 1)).min(24) + 1,
        );
        let comms = prop::collection::vec((0..n, 1..n, 1u32..20), 1..5);
        (Just(n), arcs, comms).prop_map(|(n, arcs, comms)| {
            let mut seen = std::collections::HashSet::new();
            let arcs: Vec<_> = arcs
                .into_iter()
                .filter(|&(t, h, _, _)| t != h && seen.insert((t, h)))
                .map(|(t, h, c, u)| (t, h, c as f64, u as f64))
                .collect();
            let net = Network::new(n, arcs).unwrap();
            let comms: Vec<_> = comms
                .into_iter()
                .map(|(o, off, d)| (o, (o + off) % n, d as f64))
                .collect();
            Instance::new(net, comms).unwrap()
        })
    })
}

/// Routes each commodity on its `pick`-th simple path (mod count), or leaves
/// it empty when unreachable.
pub fn state_from_picks(inst: &Instance, picks: &[usize]) -> FlowState {
    let routes: Vec<Route> = inst
        .commodities
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let paths =
                enumerate_simple_paths(&inst.network, c.origin, c.destination, 100_000).unwrap();
            if paths.is_empty() {
                Route::empty()
            } else {
                paths[picks.get(k).copied().unwrap_or(0) % paths.len()].clone()
            }
        })
        .collect();
    FlowState::from_routes(inst, routes).unwrap()
}

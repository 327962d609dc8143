mod common;

use ihh::model::{residual_capacity, validate_route, ArcId, Instance, Network};
use ihh::oracle::enumerate_simple_paths;
use ihh::pricing::{feasible_cost_for, market_cost, IhhParams};
use ihh::shortest_path::{sp_feasible, sp_market, sp_original, PathResult};
use ihh::{FlowState, Route};
use proptest::prelude::*;

fn brute_force(inst: &Instance, k: usize, cost: impl Fn(ArcId) -> f64) -> Option<f64> {
    let c = &inst.commodities[k];
    enumerate_simple_paths(&inst.network, c.origin, c.destination, 100_000)
        .unwrap()
        .iter()
        .map(|p| p.arcs().iter().map(|&a| cost(a)).sum::<f64>())
        .min_by(f64::total_cmp)
}

fn matches(found: &PathResult, best: Option<f64>, cost: impl Fn(ArcId) -> f64) -> bool {
    let tol = |x: f64| 1e-9 * x.abs().max(1.0);
    match best {
        None => found.is_empty() && found.cost == 0.0,
        Some(best) => {
            let sum: f64 = found.route.arcs().iter().map(|&a| cost(a)).sum();
            (found.cost - best).abs() <= tol(best) && (sum - best).abs() <= tol(best)
        }
    }
}

proptest! {
    #[test]
    fn all_three_costs_match_enumeration(
        inst in common::arb_instance(8),
        picks in prop::collection::vec(0usize..50, 5),
        beta in 1.0f64..40.0,
    ) {
        let state = common::state_from_picks(&inst, &picks);
        let params = IhhParams { beta, ..common::params() };
        let net = &inst.network;
        for (k, c) in inst.commodities.iter().enumerate() {
            let original = |a: ArcId| net.arc(a).cost;
            let market = |a: ArcId| {
                let arc = net.arc(a);
                market_cost(&params, arc, residual_capacity(&state, arc, c), c.demand)
            };
            let feasible = |a: ArcId| {
                let arc = net.arc(a);
                feasible_cost_for(&params, arc, residual_capacity(&state, arc, c), c.demand)
            };
            let found = sp_original(net, c).unwrap();
            prop_assert!(matches(&found, brute_force(&inst, k, original), original));
            prop_assert!(found.is_empty() || validate_route(net, c, &found.route).unwrap());
            let found = sp_market(net, &state, &params, c).unwrap();
            prop_assert!(matches(&found, brute_force(&inst, k, market), market));
            prop_assert!(found.is_empty() || validate_route(net, c, &found.route).unwrap());
            let found = sp_feasible(net, &state, &params, c).unwrap();
            prop_assert!(matches(&found, brute_force(&inst, k, feasible), feasible));
            prop_assert!(found.is_empty() || validate_route(net, c, &found.route).unwrap());
        }
    }

    #[test]
    fn searches_are_deterministic(
        inst in common::arb_instance(8),
        picks in prop::collection::vec(0usize..50, 5),
    ) {
        let state = common::state_from_picks(&inst, &picks);
        let params = common::params();
        let net = &inst.network;
        for c in &inst.commodities {
            prop_assert_eq!(sp_original(net, c).unwrap(), sp_original(net, c).unwrap());
            prop_assert_eq!(
                sp_market(net, &state, &params, c).unwrap(),
                sp_market(net, &state, &params, c).unwrap()
            );
            prop_assert_eq!(
                sp_feasible(net, &state, &params, c).unwrap(),
                sp_feasible(net, &state, &params, c).unwrap()
            );
        }
    }

    #[test]
    fn uncongested_market_equals_original(inst in common::arb_instance(7)) {
        // huge capacities: residual >= beta + d on every arc
        let caps = vec![1e9; inst.network.num_arcs()];
        let inst = Instance {
            network: inst.network.with_capacities(&caps).unwrap(),
            ..inst
        };
        let state = FlowState::empty(&inst);
        let params = common::params();
        for c in &inst.commodities {
            let a = sp_original(&inst.network, c).unwrap();
            prop_assert_eq!(&a.route, &sp_market(&inst.network, &state, &params, c).unwrap().route);
            prop_assert_eq!(&a.route, &sp_feasible(&inst.network, &state, &params, c).unwrap().route);
        }
    }
}

// 0->1->3 is cheap (1+1), 0->2->3 costs 3+3.
fn detour_net(cap_01: f64) -> Network {
    Network::new(
        4,
        [
            (0, 1, 1.0, cap_01),
            (1, 3, 1.0, 100.0),
            (0, 2, 3.0, 100.0),
            (2, 3, 3.0, 100.0),
        ],
    )
    .unwrap()
}

#[test]
fn congested_arc_forces_detour() {
    // commodity 1 (d=8) fills arc 0->1 (cap 10) so commodity 0 (d=5) sees residual 2.
    let inst = Instance::new(detour_net(10.0), [(0, 3, 5.0), (0, 1, 8.0)]).unwrap();
    let state = FlowState::from_routes(&inst, vec![Route::empty(), Route(vec![ArcId(0)])]).unwrap();
    let params = IhhParams {
        beta: 10.0,
        mu: 20.0,
        pi: 2.0,
        ..common::params()
    };
    let c = &inst.commodities[0];
    // arc 0->1: residual 2, scarcity 20 * ((10 + 5 - 2) / 10)^2 = 33.8; other arcs unpriced
    let cheap = 1.0 + 20.0 * 1.3f64.powi(2) + 1.0;
    let detour = 6.0;
    assert!(cheap > detour);
    let found = sp_market(&inst.network, &state, &params, c).unwrap();
    assert_eq!(found.route, Route(vec![ArcId(2), ArcId(3)]));
    assert!((found.cost - detour).abs() < 1e-12);
}

#[test]
fn own_load_is_not_counted() {
    // the commodity alone fills 0->1 exactly. Residual 5 gives scarcity mu = 1
    // and the route stays; counting its own flow (residual 0) would price the
    // arc at 1 * (5.5 / 0.5)^3 = 1331 and force the detour.
    let inst = Instance::new(detour_net(5.0), [(0, 3, 5.0)]).unwrap();
    let state = FlowState::from_routes(&inst, vec![Route(vec![ArcId(0), ArcId(1)])]).unwrap();
    let params = IhhParams {
        beta: 0.5,
        mu: 1.0,
        ..common::params()
    };
    let c = &inst.commodities[0];
    let found = sp_market(&inst.network, &state, &params, c).unwrap();
    assert_eq!(found.route, Route(vec![ArcId(0), ArcId(1)]));
    let found = sp_feasible(&inst.network, &state, &params, c).unwrap();
    assert_eq!(found.route, Route(vec![ArcId(0), ArcId(1)]));
    assert_eq!(found.cost, 2.0);
}

#[test]
fn only_feasible_path_wins_regardless_of_cost() {
    // 0->1 has residual 1 < 5; the expensive branch is the only one that fits
    let inst = Instance::new(detour_net(10.0), [(0, 3, 5.0), (0, 1, 9.0)]).unwrap();
    let state = FlowState::from_routes(&inst, vec![Route::empty(), Route(vec![ArcId(0)])]).unwrap();
    let params = common::params();
    let found = sp_feasible(&inst.network, &state, &params, &inst.commodities[0]).unwrap();
    assert_eq!(found.route, Route(vec![ArcId(2), ArcId(3)]));
    assert_eq!(found.cost, 6.0);
}

#[test]
fn saturated_origin_costs_at_least_big_m() {
    let net = Network::new(3, [(0, 1, 1.0, 4.0), (0, 2, 1.0, 4.0), (1, 2, 1.0, 50.0)]).unwrap();
    let inst = Instance::new(net, [(0, 2, 5.0)]).unwrap();
    let state = FlowState::empty(&inst);
    let params = common::params();
    let found = sp_feasible(&inst.network, &state, &params, &inst.commodities[0]).unwrap();
    assert!(!found.is_empty());
    assert!(found.cost >= params.big_m);
}

mod common;

use ihh::model::{capacity_feasible, total_cost, Instance, Network};
use ihh::oracle::{exact_solve, lower_bound, OracleLimits};
use ihh::pricing::{default_params, hurdle_multiplier, IhhParams};
use ihh::solver::{solve, sp_solve, SolveConfig, SolveReport};
use proptest::prelude::*;

fn run(inst: &Instance, seed: u64) -> SolveReport {
    let params = default_params(inst).unwrap();
    solve(inst, &SolveConfig::new(params, seed)).unwrap()
}

fn same_run(a: &SolveReport, b: &SolveReport) -> bool {
    a.final_state == b.final_state
        && a.total_cost.to_bits() == b.total_cost.to_bits()
        && a.reroutes_per_commodity == b.reroutes_per_commodity
        && a.feaspath_reroutes_per_commodity == b.feaspath_reroutes_per_commodity
        && a.main_pass_changes == b.main_pass_changes
        && a.hurdle_activations == b.hurdle_activations
        && a.cost_before_feaspath.to_bits() == b.cost_before_feaspath.to_bits()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_invariants(
        nodes in 4usize..10,
        arcs in 8usize..30,
        commodities in 1usize..25,
        gen_seed in 0u64..1000,
        seed in any::<u64>(),
    ) {
        let Some(inst) = common::tiny(nodes, arcs, commodities, gen_seed) else {
            return Ok(());
        };
        let params = default_params(&inst).unwrap();
        let r = solve(&inst, &SolveConfig::new(params, seed)).unwrap();
        let k = inst.num_commodities() as u64;
        let lambda0 = params.lambda0;

        prop_assert_eq!(r.feasible, capacity_feasible(&r.final_state, &inst.network));
        prop_assert_eq!(r.total_cost, total_cost(&r.final_state, &inst));
        prop_assert!(r.reroutes_per_commodity.iter().all(|&l| l <= lambda0));
        prop_assert!(r.feaspath_reroutes_per_commodity.iter().all(|&l| l <= lambda0));
        let main_changes: u64 = r.main_pass_changes.iter().map(|&c| c as u64).sum();
        prop_assert!(main_changes <= lambda0 as u64 * k);
        prop_assert!(r.feaspath_reroutes <= lambda0 as u64 * k);
        prop_assert!(r.main_loop_iterations as u64 <= lambda0 as u64 * k + 1);
        prop_assert!(r.violated_arcs_final <= r.violated_arcs_before_feaspath);
        if r.feasible_before_feaspath {
            prop_assert!(r.feasible);
            prop_assert!(r.total_cost <= r.cost_before_feaspath);
        }
        // generator instances are strongly connected, so everything is routed
        prop_assert!(r.final_state.routes().iter().all(|route| !route.is_empty()));
        let lb = lower_bound(&inst).unwrap();
        prop_assert!(r.total_cost >= lb);

        let again = solve(&inst, &SolveConfig::new(params, seed)).unwrap();
        prop_assert!(same_run(&r, &again));
    }

    #[test]
    fn hurdle_pressure_is_monotone(lambda in 0u32..60) {
        let p = common::params();
        prop_assert!(hurdle_multiplier(&p, lambda + 1) <= hurdle_multiplier(&p, lambda));
    }
}

#[test]
fn tiny_instances_stay_above_the_optimum() {
    let mut checked = 0;
    for seed in 0..60 {
        let Some(inst) = common::tiny(6, 14, 4, seed) else {
            continue;
        };
        let exact = exact_solve(&inst, &OracleLimits::default()).unwrap();
        let opt = exact
            .optimal_cost
            .expect("generator instances are feasible");
        let r = run(&inst, seed);
        if r.feasible {
            assert!(r.total_cost >= opt * (1.0 - 1e-9), "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 50);
}

#[test]
fn uncongested_instance_matches_shortest_paths() {
    let inst = common::tiny(8, 20, 10, 4).unwrap();
    let caps = vec![1e6; inst.network.num_arcs()];
    let inst = Instance {
        network: inst.network.with_capacities(&caps).unwrap(),
        ..inst
    };
    let r = run(&inst, 1);
    assert!(r.shortcut_optimal);
    assert!(r.feasible);
    assert_eq!(r.main_loop_iterations, 0);
    assert_eq!(Some(r.total_cost), lower_bound(&inst));
    let exact = exact_solve(&inst, &OracleLimits::default()).unwrap();
    let opt = exact.optimal_cost.unwrap();
    assert!((r.total_cost - opt).abs() <= 1e-9 * opt);
}

#[test]
fn different_seeds_can_differ_but_each_replays() {
    let inst = ihh::generator::generate(&ihh::generator::GenSpec::a1(11)).unwrap();
    let runs: Vec<SolveReport> = (0..4).map(|s| run(&inst, s)).collect();
    for (s, r) in runs.iter().enumerate() {
        assert!(same_run(r, &run(&inst, s as u64)));
    }
    assert!(runs
        .iter()
        .any(|r| r.main_pass_changes != runs[0].main_pass_changes));
}

#[test]
fn max_main_iterations_caps_passes() {
    let inst = ihh::generator::generate(&ihh::generator::GenSpec::a1(2)).unwrap();
    let params = default_params(&inst).unwrap();
    let mut cfg = SolveConfig::new(params, 0);
    cfg.max_main_iterations = Some(1);
    let r = solve(&inst, &cfg).unwrap();
    assert_eq!(r.main_loop_iterations, 1);
}

#[test]
fn two_commodity_bottleneck_splits() {
    // shared arc 0->1 fits only one of the two; the detour costs 6 per unit
    let net = Network::new(
        3,
        [(0, 1, 1.0, 7.0), (0, 2, 3.0, 100.0), (2, 1, 3.0, 100.0)],
    )
    .unwrap();
    let inst = Instance::new(net, [(0, 1, 4.0), (0, 1, 6.0)]).unwrap();
    assert!(!capacity_feasible(&sp_solve(&inst), &inst.network));
    let params = IhhParams {
        beta: 5.0,
        mu: 10.0,
        pi: 2.0,
        lambda0: 43,
        lambda1: 10,
        big_m: 1e4,
    };
    for seed in 0..10 {
        let r = solve(&inst, &SolveConfig::new(params, seed)).unwrap();
        assert!(r.feasible);
        // either split is an equilibrium depending on who moves first:
        // d=4 detours (6 + 24 = 30) or d=6 detours (4 + 36 = 40)
        assert!(r.total_cost == 30.0 || r.total_cost == 40.0, "seed {seed}");
    }
}

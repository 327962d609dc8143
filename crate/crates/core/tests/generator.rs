mod common;

use ihh::generator::{generate, percentile_90, GenSpec};
use ihh::harness::verify_solution;
use ihh::io::{format_instance, parse_instance, read_instance, write_instance};
use ihh::model::{total_cost, FlowState, Network};
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use proptest::prelude::*;

fn scc_count(net: &Network) -> usize {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..net.num_nodes()).map(|_| g.add_node(())).collect();
    for a in net.arcs() {
        g.add_edge(nodes[a.tail.0], nodes[a.head.0], ());
    }
    kosaraju_scc(&g).len()
}

/// Floyd-Warshall distances under original costs.
fn all_pairs(net: &Network) -> Vec<Vec<f64>> {
    let n = net.num_nodes();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for a in net.arcs() {
        let cur = &mut d[a.tail.0][a.head.0];
        *cur = cur.min(a.cost);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_meet_the_contract(
        nodes in 3usize..25,
        arc_factor in 1.0f64..4.0,
        commodities in 1usize..60,
        seed in any::<u64>(),
    ) {
        let arcs = ((nodes as f64 * arc_factor) as usize).max(nodes);
        let Some(inst) = common::tiny(nodes, arcs, commodities, seed) else {
            return Ok(());
        };
        let net = &inst.network;
        prop_assert_eq!(scc_count(net), 1);
        let costs: Vec<f64> = net.arcs().iter().map(|a| a.cost).collect();
        prop_assert_eq!(costs.iter().copied().fold(f64::INFINITY, f64::min), 10.0);
        if costs.len() >= 2 {
            prop_assert!((percentile_90(&costs) - 2000.0).abs() <= 2.0);
        }
        // every arc is a shortest path between its endpoints
        let d = all_pairs(net);
        for a in net.arcs() {
            prop_assert!(a.cost <= d[a.tail.0][a.head.0] * (1.0 + 1e-9));
        }
        for c in &inst.commodities {
            prop_assert!(c.demand >= 5.0 && c.demand <= 25.0);
            prop_assert_eq!(c.demand.fract(), 0.0);
        }
        let cert = inst.certificate.clone().unwrap();
        let st = FlowState::from_routes(&inst, cert.clone()).unwrap();
        prop_assert!(verify_solution(&inst, &cert, total_cost(&st, &inst)).is_ok());

        let text = format_instance(&inst);
        prop_assert_eq!(&parse_instance(&text).unwrap(), &inst);
    }
}

#[test]
fn same_seed_same_bytes() {
    for group in ["A1", "H1", "A5"] {
        let a = format_instance(&generate(&GenSpec::group(group, 42).unwrap()).unwrap());
        let b = format_instance(&generate(&GenSpec::group(group, 42).unwrap()).unwrap());
        assert_eq!(a, b, "{group}");
        let c = format_instance(&generate(&GenSpec::group(group, 43).unwrap()).unwrap());
        assert_ne!(a, c, "{group}");
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.odimcf");
    let inst = generate(&GenSpec::a1(5)).unwrap();
    write_instance(&path, &inst).unwrap();
    assert_eq!(read_instance(&path).unwrap(), inst);
}

#[test]
fn group_sizes() {
    for (group, n, a, k) in [
        ("A1", 30, 90, 112),
        ("A2", 30, 90, 281),
        ("H5", 120, 360, 257),
    ] {
        let inst = generate(&GenSpec::group(group, 1).unwrap()).unwrap();
        assert_eq!(inst.network.num_nodes(), n);
        assert_eq!(inst.network.num_arcs(), a);
        assert_eq!(inst.num_commodities(), k);
    }
}

#[test]
fn hub_groups_concentrate_endpoints() {
    // 80% of commodities run between 12 hub nodes, so a few nodes dominate
    let inst = generate(&GenSpec::group("H5", 9).unwrap()).unwrap();
    let mut touches = vec![0usize; inst.network.num_nodes()];
    for c in &inst.commodities {
        touches[c.origin.0] += 1;
        touches[c.destination.0] += 1;
    }
    touches.sort_unstable_by(|a, b| b.cmp(a));
    let top12: usize = touches[..12].iter().sum();
    let total = 2 * inst.num_commodities();
    assert!(top12 as f64 >= 0.8 * total as f64, "{top12} of {total}");
}

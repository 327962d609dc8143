//! Generates a few instances from the size presets, writes them to a
//! directory and prints a size summary for each.
//!
//! cargo run --release --example generate_instances -- [out_dir] [group...]

use std::path::PathBuf;

use ihh::generator::{generate, percentile_90, GenSpec};
use ihh::harness::summarize;
use ihh::io::write_instance;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "instances".into()));
    let mut groups: Vec<String> = args.collect();
    if groups.is_empty() {
        groups = vec!["A1".into(), "A2".into(), "H1".into()];
    }
    std::fs::create_dir_all(&dir).expect("create output dir");
    println!(
        "{:<14} {:>5} {:>6} {:>6} {:>7} {:>7} {:>9} {:>8}",
        "file", "nodes", "arcs", "comms", "degree", "min c", "p90 c", "mean u"
    );
    for group in &groups {
        let Some(spec) = GenSpec::group(group, 0) else {
            eprintln!("unknown group {group}");
            continue;
        };
        let inst = generate(&spec).expect("generate");
        let path = dir.join(format!("{}.odimcf", group.to_lowercase()));
        write_instance(&path, &inst).expect("write");
        let s = summarize(&inst);
        let costs: Vec<f64> = inst.network.arcs().iter().map(|a| a.cost).collect();
        let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "{:<14} {:>5} {:>6} {:>6} {:>7.2} {:>7} {:>9} {:>8.1}",
            path.file_name().unwrap().to_string_lossy(),
            s.nodes,
            s.arcs,
            s.commodities,
            s.degree,
            min,
            percentile_90(&costs),
            s.mean_capacity
        );
    }
}

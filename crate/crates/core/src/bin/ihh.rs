//! Command-line front end: generate, solve, bench, verify, tune.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ihh::generator::{generate, GenSpec};
use ihh::harness::{
    aggregate, run_bench, summarize, verify_solution, write_csv, write_jsonl, BenchJob,
    BenchOptions, BenchRecord, ParamOverrides,
};
use ihh::io::{read_instance, read_solution, write_instance, write_solution};
use ihh::model::Instance;
use ihh::oracle::{exact_solve, lower_bound, OracleLimits};
use ihh::solver::{solve, SolveConfig};
use ihh::tuner::{tune, BenchmarkEntry, TunerConfig};

#[derive(Parser)]
#[command(
    name = "ihh",
    version,
    about = "Market-priced multicommodity flow routing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances that differ only in seed.
    Generate(GenerateArgs),
    /// Solve one instance and write its solution.
    Solve(SolveArgs),
    /// Solve many instances over many seeds and aggregate.
    Bench(BenchArgs),
    /// Check a solution against an instance.
    Verify(VerifyArgs),
    /// Tune beta, mu and pi by differential evolution.
    Tune(TuneArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Size preset A1..A8 or H1..H8; explicit flags override it.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    arcs: Option<usize>,
    #[arg(long)]
    commodities: Option<usize>,
    #[arg(long)]
    cost_min: Option<f64>,
    #[arg(long)]
    cost_p90: Option<f64>,
    #[arg(long)]
    demand_min: Option<f64>,
    #[arg(long)]
    demand_max: Option<f64>,
    #[arg(long)]
    hub_fraction: Option<f64>,
    /// Fraction of commodities routed hub to hub.
    #[arg(long)]
    hub_commodities: Option<f64>,
    #[arg(long)]
    decay: Option<f64>,
    /// Seed of the first instance; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = "inst")]
    prefix: String,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// File of key=value parameter lines; flags win over it.
    #[arg(long)]
    params_file: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long)]
    lambda0: Option<u32>,
    #[arg(long)]
    lambda1: Option<u32>,
    #[arg(long)]
    big_m: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Shuffle seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Solution path; defaults to the instance path with a `.sol` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Glob pattern of instance files.
    instances: String,
    /// Comma list of seeds or inclusive ranges, e.g. `0-9` or `1,4,7-8`.
    #[arg(long, default_value = "0-9")]
    seeds: String,
    /// Also solve exactly and report heuristic/optimal ratios.
    #[arg(long)]
    oracle: bool,
    /// Write per-instance aggregates as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write per-run records as JSON lines.
    #[arg(long)]
    jsonl: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    solution: PathBuf,
}

#[derive(Args)]
struct TuneArgs {
    /// Glob pattern of benchmark instance files.
    instances: String,
    #[arg(long, default_value_t = 30)]
    population: usize,
    #[arg(long, default_value_t = 100)]
    generations: usize,
    #[arg(long, default_value_t = 1)]
    seeds_per_eval: u64,
    #[arg(long, default_value_t = 0.5)]
    de_weight: f64,
    #[arg(long, default_value_t = 0.9)]
    de_crossover: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `low,high` bounds for beta.
    #[arg(long, value_parser = parse_range)]
    beta_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    mu_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    pi_range: Option<(f64, f64)>,
}

enum Failure {
    Usage(String),
    Data(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Verify(_) => 3,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn data<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Data(format!("{context}: {e}"))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected low,high")?;
    let lo = a.trim().parse().map_err(|_| "bad low bound")?;
    let hi = b.trim().parse().map_err(|_| "bad high bound")?;
    Ok((lo, hi))
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut seeds = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.parse().map_err(|_| format!("bad seed range `{part}`"))?;
                let b: u64 = b.parse().map_err(|_| format!("bad seed range `{part}`"))?;
                if a > b {
                    return Err(format!("empty seed range `{part}`"));
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().map_err(|_| format!("bad seed `{part}`"))?),
        }
    }
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(seeds)
}

fn overrides(args: &ParamArgs) -> Result<ParamOverrides, Failure> {
    let file = match &args.params_file {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(data(p.display()))?;
            ParamOverrides::parse(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => ParamOverrides::default(),
    };
    Ok(file.merge(ParamOverrides {
        beta: args.beta,
        mu: args.mu,
        pi: args.pi,
        lambda0: args.lambda0,
        lambda1: args.lambda1,
        big_m: args.big_m,
    }))
}

fn expand_glob(pattern: &str) -> Result<Vec<PathBuf>, Failure> {
    let paths = glob::glob(pattern).map_err(|e| Failure::Usage(format!("bad pattern: {e}")))?;
    let mut out: Vec<PathBuf> = paths
        .filter_map(Result::ok)
        .filter(|p| p.is_file())
        .collect();
    out.sort();
    if out.is_empty() {
        return Err(Failure::Usage(format!("no files match `{pattern}`")));
    }
    Ok(out)
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(path).map_err(data(path.display()))
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let mut spec = match &a.group {
        Some(g) => {
            GenSpec::group(g, 0).ok_or_else(|| Failure::Usage(format!("unknown group `{g}`")))?
        }
        None => GenSpec::default(),
    };
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => { $(if let Some(v) = a.$flag { spec.$field = v; })* };
    }
    set!(nodes => num_nodes, arcs => num_arcs, commodities => num_commodities,
         cost_min => cost_min, cost_p90 => cost_p90, demand_min => demand_min,
         demand_max => demand_max, hub_fraction => hub_fraction,
         hub_commodities => hub_commodity_fraction, decay => distance_decay_exponent);
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if a.count > 0 {
        fs::create_dir_all(&a.out_dir).map_err(data(a.out_dir.display()))?;
    }
    let out = io::stdout();
    let mut out = out.lock();
    if a.count > 0 {
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>6} {:>6} {:>10} {:>10} {:>10} {:>7} {:>8}",
            "file",
            "nodes",
            "arcs",
            "comm",
            "mean_cost",
            "mean_dem",
            "mean_cap",
            "degree",
            "dem/cap"
        );
    }
    for i in 0..a.count {
        let s = GenSpec {
            seed: a.seed + i as u64,
            ..spec.clone()
        };
        let inst = generate(&s).map_err(|e| Failure::Data(format!("seed {}: {e}", s.seed)))?;
        let name = format!("{}{:03}.odimcf", a.prefix, i);
        let path = a.out_dir.join(&name);
        write_instance(&path, &inst).map_err(data(path.display()))?;
        let t = summarize(&inst);
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>6} {:>6} {:>10.2} {:>10.2} {:>10.2} {:>7.2} {:>8.4}",
            name,
            t.nodes,
            t.arcs,
            t.commodities,
            t.mean_cost,
            t.mean_demand,
            t.mean_capacity,
            t.degree,
            t.demand_capacity_ratio
        );
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let params = overrides(&a.params)?
        .resolve(&inst)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let report = solve(&inst, &SolveConfig::new(params, a.seed)).map_err(data("solve"))?;
    let out = a.out.unwrap_or_else(|| a.instance.with_extension("sol"));
    write_solution(&out, report.final_state.routes(), report.total_cost)
        .map_err(data(out.display()))?;
    let rec = BenchRecord::from_report(
        &instance_id(&a.instance),
        "",
        a.seed,
        &report,
        lower_bound(&inst),
        None,
    );
    write_jsonl(io::stdout().lock(), &[rec]).map_err(data("stdout"))
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let seeds = parse_seeds(&a.seeds).map_err(Failure::Usage)?;
    let overrides = overrides(&a.params)?;
    let jobs = expand_glob(&a.instances)?
        .iter()
        .map(|p| {
            Ok(BenchJob {
                id: instance_id(p),
                group: p
                    .parent()
                    .and_then(|d| d.file_name())
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                instance: load(p)?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let options = BenchOptions {
        seeds,
        overrides,
        oracle: a.oracle,
        oracle_limits: OracleLimits::default(),
        threads: a.threads,
    };
    let records = run_bench(&jobs, &options).map_err(data("bench"))?;
    let summary = aggregate(&records);
    if let Some(p) = &a.jsonl {
        let f = File::create(p).map_err(data(p.display()))?;
        write_jsonl(BufWriter::new(f), &records).map_err(data(p.display()))?;
    }
    if let Some(p) = &a.csv {
        let f = File::create(p).map_err(data(p.display()))?;
        write_csv(BufWriter::new(f), &summary).map_err(data(p.display()))?;
    }
    write_jsonl(io::stdout().lock(), &summary).map_err(data("stdout"))
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let sol = read_solution(&a.solution).map_err(data(a.solution.display()))?;
    match verify_solution(&inst, &sol.routes, sol.cost) {
        Ok(cost) => {
            println!("ok cost {cost}");
            Ok(())
        }
        Err(e) => Err(Failure::Verify(e.to_string())),
    }
}

fn cmd_tune(a: TuneArgs) -> CmdResult {
    let limits = OracleLimits::default();
    let benchmark = expand_glob(&a.instances)?
        .iter()
        .map(|p| {
            let instance = load(p)?;
            // exact optimum when the oracle can afford it, otherwise the
            // capacity-free bound
            let reference = exact_solve(&instance, &limits)
                .ok()
                .and_then(|r| r.optimal_cost)
                .or_else(|| lower_bound(&instance))
                .ok_or_else(|| Failure::Data(format!("{}: no reference cost", p.display())))?;
            Ok(BenchmarkEntry {
                instance,
                reference_cost: reference,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut cfg = TunerConfig::new(benchmark).map_err(|e| Failure::Data(e.to_string()))?;
    cfg.population_size = a.population;
    cfg.generations = a.generations;
    cfg.seeds_per_eval = a.seeds_per_eval;
    cfg.de_weight = a.de_weight;
    cfg.de_crossover = a.de_crossover;
    cfg.seed = a.seed;
    if let Some(r) = a.beta_range {
        cfg.search_ranges.beta = r;
    }
    if let Some(r) = a.mu_range {
        cfg.search_ranges.mu = r;
    }
    if let Some(r) = a.pi_range {
        cfg.search_ranges.pi = r;
    }
    let result = tune(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = io::stdout();
    let mut out = out.lock();
    for (generation, best) in result.trace.iter().enumerate() {
        let line =
            serde_json::json!({ "schema": 1, "generation": generation, "best_fitness": best });
        let _ = writeln!(out, "{line}");
    }
    let line = serde_json::json!({
        "schema": 1,
        "beta": result.best.beta,
        "mu": result.best.mu,
        "pi": result.best.pi,
        "fitness": result.best_fitness,
    });
    let _ = writeln!(out, "{line}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Tune(a) => cmd_tune(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Data(m) | Failure::Verify(m)) = &f;
            eprintln!("ihh: {m}");
            ExitCode::from(f.code())
        }
    }
}

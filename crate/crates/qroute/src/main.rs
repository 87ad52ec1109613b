//! Command line surface: route circuits, solve swap instances, generate
//! benchmark inputs, run suites, and export the allocation ILP.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use qroute::bench::{BenchConfig, SuiteKind};
use qroute::circuit::{gen_qv, gen_zero_swap, Circuit};
use qroute::graph::HardwareGraph;
use qroute::route::{route, verify_routed, RouteOptions, SolveStatus};
use qroute::swap::{
    approx_solve, approx_solve_original, blocking_lower_bound, candidate_independent_sets,
    combined_lower_bound, distance_lower_bound, exact_solve, parity_adjust,
    split_graph_lower_bound, ExactLimits, SwapInstanceFile, SwapSequence,
};
use qroute::tap::{build_model, generate_sgi_cuts, Allocation, TapInstance, TapOptions};
use qroute::{Error, Result};

#[derive(Parser)]
#[command(name = "qroute", version, about = "Qubit routing by swap insertion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route a circuit onto a hardware graph.
    Route(RouteArgs),
    /// Solve a token swapping instance.
    SwapSolve(SwapSolveArgs),
    /// Generate circuits and hardware graph files.
    Generate(GenerateArgs),
    /// Run a benchmark suite and report metrics.
    Bench(BenchArgs),
    /// Export the allocation problem as an LP file with cuts.
    ExportLp(ExportLpArgs),
}

/// `--graph` values are either a file path or a preset like `line:8`.
fn load_graph(spec: &str) -> Result<HardwareGraph> {
    if spec.contains(':') && !Path::new(spec).exists() {
        HardwareGraph::preset(spec)
    } else {
        HardwareGraph::parse(&std::fs::read_to_string(spec)?)
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    Circuit::parse(&std::fs::read_to_string(path)?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

#[derive(Args)]
struct SolverFlags {
    /// Maximum hops a token may move per transition.
    #[arg(long, value_name = "K")]
    distance_limit: Option<u32>,
    /// Enumerate only tokens participating in gates; freeze the rest.
    #[arg(long)]
    active_only: bool,
    /// Wall-clock budget for cut generation, in seconds.
    #[arg(long, value_name = "SECONDS", default_value_t = 10.0)]
    cut_budget: f64,
    /// Time limit for the allocation solve, in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Keep only this many allocation states per layer (heuristic mode).
    #[arg(long, value_name = "W")]
    beam_width: Option<usize>,
}

impl SolverFlags {
    fn tap_options(&self) -> TapOptions {
        TapOptions {
            distance_limit: self.distance_limit,
            active_only: self.active_only,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            cut_budget: Duration::from_secs_f64(self.cut_budget),
            beam_width: self.beam_width,
        }
    }
}

#[derive(Args)]
struct RouteArgs {
    /// Hardware graph file or preset (line:n, ring:n, ladder:n, grid:rxc).
    #[arg(long)]
    graph: String,
    /// Circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Write the routed circuit here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Solve every transition exactly instead of by approximation.
    #[arg(long)]
    exact_swaps: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

fn cmd_route(args: &RouteArgs) -> Result<u8> {
    let graph = load_graph(&args.graph)?;
    let circuit = load_circuit(&args.circuit)?;
    let options = RouteOptions {
        tap: args.solver.tap_options(),
        exact_swaps: args.exact_swaps,
        swap_limits: ExactLimits {
            time_limit: args.solver.time_limit.map(Duration::from_secs_f64),
            max_nodes: None,
        },
    };
    let routed = route(&circuit, &graph, &options)?;
    verify_routed(&circuit, &routed, &graph)
        .map_err(|diag| Error::InvalidInput(format!("internal verification failed: {diag}")))?;
    write_output(
        args.output.as_ref(),
        &routed.to_text(graph.num_vertices(), circuit.num_tokens),
    )?;
    let m = &routed.metrics;
    println!("swaps={}", m.swaps_added);
    println!("two_qubit_gates_in={}", m.two_qubit_gates_in);
    println!("two_qubit_gates_out={}", m.two_qubit_gates_out);
    println!("two_qubit_gates_out_3cx={}", m.two_qubit_gates_out_decomposed);
    println!("depth_in={}", m.depth_in);
    println!("depth_out={}", m.depth_out);
    println!("gate_increase={:.6}", m.relative_gate_increase);
    println!("gate_increase_3cx={:.6}", m.relative_gate_increase_decomposed);
    println!("depth_increase={:.6}", m.relative_depth_increase);
    println!("tap_cost={}", routed.tap_doubled_cost as f64 / 2.0);
    println!("tap_swap_bound={}", routed.tap_doubled_cost.div_ceil(2));
    println!("status={}", routed.status);
    Ok(if routed.limit_expired { 3 } else { 0 })
}

#[derive(Args)]
struct SwapSolveArgs {
    /// Swap instance file (graph reference plus start/target lines).
    #[arg(long)]
    instance: PathBuf,
    /// Solve exactly with branch and bound.
    #[arg(long, conflicts_with_all = ["approx", "original"])]
    exact: bool,
    /// Solve with the modified approximation (default).
    #[arg(long)]
    approx: bool,
    /// Solve with the unmodified approximation (comparison runs).
    #[arg(long, conflicts_with = "approx")]
    original: bool,
    /// Print the three lower bounds and the parity-adjusted maximum.
    #[arg(long)]
    bounds: bool,
    /// Seed for the unmodified approximation's choices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time limit for the exact solve, in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
}

fn cmd_swap_solve(args: &SwapSolveArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.instance)?;
    let file = SwapInstanceFile::parse(&text)?;
    let graph_ref = &file.graph_ref;
    let graph = if graph_ref.contains(':') && !Path::new(graph_ref).exists() {
        HardwareGraph::preset(graph_ref)?
    } else {
        let base = args.instance.parent().unwrap_or(Path::new("."));
        let path = base.join(graph_ref);
        let resolved = if path.exists() { path } else { PathBuf::from(graph_ref) };
        HardwareGraph::parse(&std::fs::read_to_string(resolved)?)?
    };
    let start = Allocation::from_to_vertex(file.start)?;
    let target = Allocation::from_to_vertex(file.target)?;
    if start.len() != graph.num_vertices() {
        return Err(Error::InvalidInput(format!(
            "allocation covers {} tokens, graph has {} vertices",
            start.len(),
            graph.num_vertices()
        )));
    }

    if args.bounds {
        let distance = distance_lower_bound(&graph, &start, &target);
        let blocking = blocking_lower_bound(&graph, &start, &target);
        let sets = candidate_independent_sets(&graph, args.seed);
        let split = sets
            .iter()
            .map(|s| split_graph_lower_bound(&graph, &start, &target, s).expect("independent"))
            .max()
            .unwrap_or(0);
        let combined = combined_lower_bound(&graph, &start, &target, &sets);
        println!("distance_bound={distance}");
        println!("blocking_bound={blocking}");
        println!("split_bound={split}");
        println!("parity_adjusted_max={}", parity_adjust(&start, &target, blocking.max(split)));
        println!("combined_bound={combined}");
        return Ok(0);
    }

    let mut expired = false;
    let (sequence, status): (SwapSequence, SolveStatus) = if args.exact {
        let out = exact_solve(
            &graph,
            &start,
            &target,
            ExactLimits {
                time_limit: args.time_limit.map(Duration::from_secs_f64),
                max_nodes: None,
            },
        );
        println!("lower_bound={}", out.proven_lower_bound);
        expired = !out.optimal;
        (out.sequence, if out.optimal { SolveStatus::Optimal } else { SolveStatus::Heuristic })
    } else if args.original {
        (approx_solve_original(&graph, &start, &target, args.seed), SolveStatus::Heuristic)
    } else {
        (approx_solve(&graph, &start, &target), SolveStatus::Heuristic)
    };
    println!("length={}", sequence.len());
    println!("depth={}", sequence.depth);
    println!("status={status}");
    for &(u, v) in &sequence.swaps {
        println!("swap {u} {v}");
    }
    Ok(if expired { 3 } else { 0 })
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Quantum-volume style circuit: depth layers of floor(m/2) random
    /// pairs.
    Qv {
        #[arg(long, value_name = "M")]
        width: usize,
        #[arg(long, value_name = "D")]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Circuit that admits a zero-swap routing on the given graph.
    ZeroSwap {
        #[arg(long)]
        graph: String,
        #[arg(long, value_name = "L")]
        depth: usize,
        /// Gates per layer.
        #[arg(long, value_name = "G")]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hardware graph preset file (line:n, ring:n, ladder:n, grid:rxc).
    Graph {
        #[arg(long)]
        preset: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    match &args.kind {
        GenerateKind::Qv { width, depth, seed, output } => {
            let circuit = gen_qv(*width, *depth, *seed)?;
            write_output(output.as_ref(), &circuit.to_text())?;
        }
        GenerateKind::ZeroSwap { graph, depth, gates, seed, output } => {
            let graph = load_graph(graph)?;
            let circuit = gen_zero_swap(&graph, *depth, *gates, *seed)?;
            write_output(output.as_ref(), &circuit.to_text())?;
        }
        GenerateKind::Graph { preset, output } => {
            let graph = HardwareGraph::preset(preset)?;
            write_output(output.as_ref(), &graph.to_text())?;
        }
    }
    Ok(0)
}

#[derive(Args)]
struct BenchArgs {
    /// Hardware graph file or preset.
    #[arg(long)]
    graph: String,
    /// Suite kind: qv or zero-swap.
    #[arg(long, default_value = "qv")]
    kind: String,
    /// Smallest circuit depth.
    #[arg(long, default_value_t = 4)]
    depth_min: usize,
    /// Largest circuit depth (inclusive).
    #[arg(long, default_value_t = 8)]
    depth_max: usize,
    /// Instances per depth.
    #[arg(long, default_value_t = 10)]
    instances: usize,
    /// Gates per layer for zero-swap suites.
    #[arg(long, default_value_t = 2)]
    gates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Solve every transition exactly instead of by approximation.
    #[arg(long)]
    exact_swaps: bool,
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let graph = load_graph(&args.graph)?;
    let kind = match args.kind.as_str() {
        "qv" => SuiteKind::Qv,
        "zero-swap" => SuiteKind::ZeroSwap { gates_per_layer: args.gates },
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown suite kind `{other}` (expected qv or zero-swap)"
            )))
        }
    };
    let depths: Vec<usize> = if args.depth_min <= args.depth_max {
        (args.depth_min..=args.depth_max).collect()
    } else {
        Vec::new()
    };
    let config = BenchConfig {
        kind,
        graph,
        graph_name: args.graph.clone(),
        depths,
        instances_per_depth: args.instances,
        seed: args.seed,
        route: RouteOptions {
            exact_swaps: args.exact_swaps,
            ..RouteOptions::default()
        },
    };
    let report = qroute::bench::run(&config)?;
    print!("{}", report.to_table());
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv())?;
    }
    Ok(0)
}

#[derive(Args)]
struct ExportLpArgs {
    /// Hardware graph file or preset.
    #[arg(long)]
    graph: String,
    /// Circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Write the LP here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

fn cmd_export_lp(args: &ExportLpArgs) -> Result<u8> {
    let graph = load_graph(&args.graph)?;
    let circuit = load_circuit(&args.circuit)?;
    let instance = TapInstance::from_circuit(graph, &circuit, args.solver.tap_options())?;
    let cuts = generate_sgi_cuts(&instance, instance.options.cut_budget);
    let model = build_model(&instance, &cuts);
    write_output(args.output.as_ref(), &model.to_lp_text())?;
    eprintln!("cuts={}", cuts.len());
    eprintln!("variables={}", model.num_vars());
    eprintln!("constraints={}", model.constraints.len());
    Ok(0)
}

/// Exit codes: 0 success, 2 infeasible input, 3 limit expired with an
/// incumbent result.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InfeasibleLayer(_)
        | Error::DistanceLimitInfeasible(_)
        | Error::NoMatching { .. }
        | Error::TooManyTokens { .. }
        | Error::Disconnected(..) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Route(args) => cmd_route(args),
        Command::SwapSolve(args) => cmd_swap_solve(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::ExportLp(args) => cmd_export_lp(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

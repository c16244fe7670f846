//! Command-line front end: validate inputs, enumerate paths, solve games,
//! print policies, run coverage sweeps, generate scenarios.
//!
//! Exit codes: 0 success, 1 domain-level failure (validation violations,
//! non-convergence), 2 usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mtdgame::error::Error;
use mtdgame::{
    build_game, load_attack_graph, load_catalog, run_sweep, solve_exact, solve_pure,
    attack_graph::parse_attack_graph, generate_scenario, AttackGraph, Catalog, GameConfig,
    ScenarioSpec, SolveReport,
};

#[derive(Parser)]
#[command(
    name = "mtdgame",
    version,
    about = "Zero-sum Markov games on attack graphs: solve, plan countermeasures, sweep coverage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Pure,
}

#[derive(Args)]
struct SolverArgs {
    /// Attack-graph JSON file.
    #[arg(long)]
    graph: PathBuf,
    /// Vulnerability catalog JSON file.
    #[arg(long)]
    catalog: PathBuf,
    /// Config JSON file (GameConfig fields, all optional).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Solver mode.
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Override the discount factor.
    #[arg(long)]
    gamma: Option<f64>,
    /// Override the convergence tolerance.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the iteration cap.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Size of the worker thread pool (defaults to the number of cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check an attack graph (and optionally a catalog) against every
    /// structural invariant.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Enumerate monotonic attack paths between two privileges.
    Paths {
        #[arg(long)]
        graph: PathBuf,
        /// Source privilege (defaults to the graph's initial state).
        #[arg(long)]
        from: Option<String>,
        /// Target privilege (defaults to the graph's goal).
        #[arg(long)]
        to: Option<String>,
    },
    /// Solve the game and write a JSON value/policy report.
    Solve {
        #[command(flatten)]
        solver: SolverArgs,
        /// Where to write the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the game and print the per-state policies.
    Policy {
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Sweep coverage levels, comparing naive and strategic countermeasures.
    Sweep {
        #[command(flatten)]
        solver: SolverArgs,
        /// Comma-separated ascending coverage percentages, e.g. 10,20,30.
        #[arg(long, value_delimiter = ',', required = true)]
        coverages: Vec<u32>,
        /// Scenario seed echoed into the report.
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic layered scenario (graph + catalog files).
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        vms: u32,
        #[arg(long, default_value_t = 100)]
        vulns: u32,
        #[arg(long, default_value_t = 3)]
        layers: u32,
        #[arg(long, default_value_t = 1.0)]
        cia_min: f64,
        #[arg(long, default_value_t = 10.0)]
        cia_max: f64,
        /// Sampling weights for easy,medium,high access complexity.
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.3, 0.5, 0.2])]
        ac_weights: Vec<f64>,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // Domain-level failures.
        Error::InvalidGraph(_) => 1,
        // Usage, parse and configuration errors.
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::Config(_)
        | Error::Query(_)
        | Error::UnknownKey(_)
        | Error::Graph(_)
        | Error::Solver(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate { graph, catalog } => cmd_validate(&graph, catalog.as_deref()),
        Command::Paths { graph, from, to } => cmd_paths(&graph, from.as_deref(), to.as_deref()),
        Command::Solve { solver, out } => cmd_solve(&solver, out.as_deref(), false),
        Command::Policy { solver } => cmd_solve(&solver, None, true),
        Command::Sweep { solver, coverages, seed, out } => {
            cmd_sweep(&solver, &coverages, seed, out.as_deref())
        }
        Command::Gen { seed, vms, vulns, layers, cia_min, cia_max, ac_weights, out } => {
            cmd_gen(seed, vms, vulns, layers, cia_min, cia_max, &ac_weights, &out)
        }
    }
}

fn cmd_validate(graph_path: &Path, catalog_path: Option<&Path>) -> Result<ExitCode, Error> {
    let graph = parse_attack_graph(graph_path)?;
    let report = graph.validate();
    let mut violations = report.violations.clone();

    if let Some(path) = catalog_path {
        let catalog = load_catalog(path)?;
        for exploit in graph.exploits() {
            if let Some(key) = &exploit.vuln_ref {
                if catalog.get(key).is_none() {
                    violations.push(mtdgame::attack_graph::Violation {
                        code: "unresolved-vuln-ref",
                        message: format!(
                            "exploit `{}` references `{}`, which is not in the catalog",
                            exploit.id, key
                        ),
                    });
                }
            }
        }
        println!("catalog: {} records", catalog.len());
    }

    if violations.is_empty() {
        println!("ok: {} nodes, {} edges", graph.nodes.len(), graph.edges.len());
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &violations {
            println!("{v}");
        }
        println!("{} violation(s)", violations.len());
        Ok(ExitCode::from(1))
    }
}

fn cmd_paths(graph_path: &Path, from: Option<&str>, to: Option<&str>) -> Result<ExitCode, Error> {
    let graph = load_attack_graph(graph_path)?;
    let from = from.unwrap_or(&graph.initial);
    let to = to.unwrap_or(&graph.goal);
    let paths = graph.enumerate_attack_paths(from, to)?;
    for path in &paths {
        if path.is_empty() {
            println!("(empty path)");
        } else {
            println!("{}", path.join(" -> "));
        }
    }
    eprintln!("{} path(s) from {from} to {to}", paths.len());
    Ok(ExitCode::SUCCESS)
}

struct LoadedProblem {
    graph: AttackGraph,
    catalog: Catalog,
    cfg: GameConfig,
}

fn load_problem(args: &SolverArgs) -> Result<LoadedProblem, Error> {
    if let Some(threads) = args.threads {
        // Ignore the error if a pool already exists (repeat calls in-process).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let graph = load_attack_graph(&args.graph)?;
    let catalog = load_catalog(&args.catalog)?;
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<GameConfig>(&text)
                .map_err(|e| Error::parse(Some(path.clone()), e.to_string()))?
        }
        None => GameConfig::default(),
    };
    if let Some(gamma) = args.gamma {
        cfg.gamma = gamma;
    }
    if let Some(epsilon) = args.epsilon {
        cfg.epsilon = epsilon;
    }
    if let Some(max_iters) = args.max_iters {
        cfg.max_iters = max_iters;
    }
    cfg.validate()?;
    Ok(LoadedProblem { graph, catalog, cfg })
}

fn cmd_solve(
    args: &SolverArgs,
    out: Option<&Path>,
    print_policies: bool,
) -> Result<ExitCode, Error> {
    let problem = load_problem(args)?;
    let game = build_game(&problem.graph, &problem.catalog, &problem.cfg)?;
    let solution = match args.mode {
        Mode::Exact => solve_exact(&game, &problem.cfg)?,
        Mode::Pure => solve_pure(&game, &problem.cfg)?,
    };
    let report = SolveReport::new(&game, &problem.cfg, &solution);

    if let Some(path) = out {
        std::fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))?;
    }

    println!(
        "{} solve: {} iterations, residual {:.3e}{}",
        solution.mode,
        solution.iterations,
        solution.residual,
        if solution.converged { "" } else { " (did not converge)" },
    );
    println!("V*({}) = {:.6}", report.initial_state, report.initial_value);

    if print_policies {
        for state in &report.states {
            println!();
            println!(
                "state {} (value {:.6}{})",
                state.id,
                state.value,
                if state.terminal { ", terminal" } else { "" }
            );
            for ap in &state.attacker_policy {
                println!("  attacker {:<24} {:.6}", ap.action, ap.prob);
            }
            for ap in &state.defender_policy {
                println!("  defender {:<24} {:.6}", ap.action, ap.prob);
            }
        }
    }

    if solution.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: solver hit the iteration cap before reaching epsilon");
        Ok(ExitCode::from(1))
    }
}

fn cmd_sweep(
    args: &SolverArgs,
    coverages: &[u32],
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let problem = load_problem(args)?;
    let game = build_game(&problem.graph, &problem.catalog, &problem.cfg)?;
    let report = run_sweep(&game, &problem.catalog, &problem.cfg, coverages, seed)?;
    let csv = report.to_csv();
    match out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| Error::io(path, e))?;
            for row in &report.rows {
                println!(
                    "coverage {:>3}%: naive {:>10.6}  strategic {:>10.6}",
                    row.coverage_pct, row.naive_value, row.strategic_value
                );
            }
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    seed: u64,
    vms: u32,
    vulns: u32,
    layers: u32,
    cia_min: f64,
    cia_max: f64,
    ac_weights: &[f64],
    out: &Path,
) -> Result<ExitCode, Error> {
    let spec = ScenarioSpec {
        seed,
        n_vms: vms,
        n_vulns: vulns,
        n_layers: layers,
        cia_range: (cia_min, cia_max),
        ac_weights: [ac_weights[0], ac_weights[1], ac_weights[2]],
    };
    let (graph, catalog) = generate_scenario(&spec)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let graph_path = out.join("graph.json");
    let catalog_path = out.join("catalog.json");
    graph.save(&graph_path)?;
    catalog.save(&catalog_path)?;
    println!(
        "wrote {} ({} nodes) and {} ({} records)",
        graph_path.display(),
        graph.nodes.len(),
        catalog_path.display(),
        catalog.len()
    );
    Ok(ExitCode::SUCCESS)
}

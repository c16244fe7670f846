//! Turn an attack graph plus CVSS-style vulnerability data into a two-player
//! zero-sum Markov game between an attacker and a network administrator,
//! solve it, and use the solution to place countermeasures.
//!
//! The pipeline:
//!
//! 1. [`attack_graph`] loads and validates the graph of privileges and
//!    exploits; [`vuln_catalog`] loads the vulnerability records (CIA impact,
//!    access complexity) the exploits reference.
//! 2. [`game_builder`] compiles graph + catalog + [`GameConfig`] into a
//!    [`MarkovGame`]: one state per privilege, exploit/monitor action sets,
//!    CVSS-derived rewards and transition probabilities.
//! 3. [`game_solver`] solves the game exactly (minimax value iteration with a
//!    per-state matrix-game LP from [`matrix_solver`]) or approximately
//!    (pure-strategy value iteration).
//! 4. [`countermeasure`] selects patch sets under a budget — naive CIA
//!    ranking vs. greedy game-guided interdiction — and sweeps coverage
//!    levels to compare the two.
//! 5. [`scenario_gen`] deterministically generates synthetic layered cloud
//!    scenarios for experiments, and ships the built-in LDAP/Web/FTP demo.
//!
//! ```no_run
//! use mtdgame::{build_game, demo_scenario, solve_exact, GameConfig};
//!
//! let (graph, catalog) = demo_scenario();
//! let cfg = GameConfig::default();
//! let game = build_game(&graph, &catalog, &cfg).unwrap();
//! let solution = solve_exact(&game, &cfg).unwrap();
//! println!("attacker value at {}: {:.4}",
//!          game.states[game.initial].id,
//!          solution.values[game.initial]);
//! ```

pub mod attack_graph;
pub mod countermeasure;
pub mod error;
pub mod game_builder;
pub mod game_solver;
pub mod matrix_solver;
pub mod report;
pub mod scenario_gen;
pub mod vuln_catalog;

pub use attack_graph::{
    load_attack_graph, AgEdge, AgNode, AttackGraph, EdgeKind, NodeKind, ValidationReport,
};
pub use countermeasure::{
    evaluate_placement, naive_placement, run_sweep, strategic_placement, Placement,
    PlacementStrategy, SweepReport,
};
pub use error::{Error, Result};
pub use game_builder::{build_game, restrict_game, ExploitAction, GameConfig, GameState, MarkovGame};
pub use game_solver::{
    bellman_residual, pure_strategy_backup, q_matrix, shapley_backup, solve_exact, solve_pure,
    BackupResult, EquilibriumSolution, SolveMode,
};
pub use matrix_solver::{pure_minimax, solve_matrix_game, MatrixSolution, PayoffMatrix};
pub use report::SolveReport;
pub use scenario_gen::{generate_scenario, demo_scenario, ScenarioSpec, SplitMix64};
pub use vuln_catalog::{
    ac_to_probability, load_catalog, AcProbabilityMap, AccessComplexity, Catalog, VulnRecord,
};

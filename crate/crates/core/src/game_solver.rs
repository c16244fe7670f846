//! Markov game solvers: exact minimax (Shapley-style) value iteration, where
//! every backup solves a per-state zero-sum matrix game over the Q values,
//! and the pure-strategy approximation, where the backup takes the best
//! max-min action pair instead.
//!
//! Both solvers iterate from the all-zero value function and stop when the
//! sup-norm of successive value functions drops to the configured epsilon
//! (or the iteration cap is hit, in which case the result is returned marked
//! as not converged). Goal states are pinned to value zero: the payoff for
//! winning is collected on the transition into the goal, not at the goal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game_builder::{GameConfig, MarkovGame};
use crate::matrix_solver::{
    pure_minimax_parts, solve_parts, PayoffMatrix, SimplexWorkspace, DEFAULT_TOL,
};

/// Which backup a solution was produced with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Pure,
}

impl std::fmt::Display for SolveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveMode::Exact => write!(f, "exact"),
            SolveMode::Pure => write!(f, "pure"),
        }
    }
}

/// One application of the backup operator: new values plus the per-state
/// strategies that achieve them.
#[derive(Debug, Clone)]
pub struct BackupResult {
    pub values: Vec<f64>,
    pub attacker_policy: Vec<Vec<f64>>,
    pub defender_policy: Vec<Vec<f64>>,
}

/// Converged (or capped) solution of a Markov game.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    pub values: Vec<f64>,
    pub attacker_policy: Vec<Vec<f64>>,
    pub defender_policy: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
    pub mode: SolveMode,
    pub converged: bool,
}

/// The Q matrix of a state: entry `(i, j)` is the attacker's expected
/// discounted payoff for joint action `(a1_i, a2_j)` under `values`.
pub fn q_matrix(game: &MarkovGame, s: usize, values: &[f64]) -> PayoffMatrix {
    let n1 = game.attacker_actions(s);
    let n2 = game.defender_actions(s);
    let mut data = Vec::with_capacity(n1 * n2);
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            data.push(game.q_value(s, a1, a2, values));
        }
    }
    PayoffMatrix::new(n1, n2, data).expect("state has at least the idle actions")
}

struct StateScratch {
    q: Vec<f64>,
    ws: SimplexWorkspace,
}

fn backup_state(
    game: &MarkovGame,
    s: usize,
    values: &[f64],
    mode: SolveMode,
    scratch: &mut StateScratch,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let state = &game.states[s];
    if state.terminal {
        return Ok((0.0, vec![1.0], vec![1.0]));
    }
    let n = 1 + state.exploits.len();
    scratch.q.clear();
    for a1 in 0..n {
        for a2 in 0..n {
            scratch.q.push(game.q_value(s, a1, a2, values));
        }
    }
    match mode {
        SolveMode::Exact => {
            let sol = solve_parts(&scratch.q, n, n, DEFAULT_TOL, &mut scratch.ws)?;
            Ok((sol.value, sol.row_strategy, sol.col_strategy))
        }
        SolveMode::Pure => {
            let (value, row, col) = pure_minimax_parts(&scratch.q, n, n)?;
            let mut att = vec![0.0; n];
            att[row] = 1.0;
            let mut def = vec![0.0; n];
            def[col] = 1.0;
            Ok((value, att, def))
        }
    }
}

fn backup_with(
    game: &MarkovGame,
    values: &[f64],
    mode: SolveMode,
    scratch: &mut [StateScratch],
) -> Result<BackupResult> {
    let n = game.n_states();
    let mut out = BackupResult {
        values: Vec::with_capacity(n),
        attacker_policy: Vec::with_capacity(n),
        defender_policy: Vec::with_capacity(n),
    };
    for (s, slot) in scratch.iter_mut().enumerate() {
        let (v, att, def) = backup_state(game, s, values, mode, slot)?;
        out.values.push(v);
        out.attacker_policy.push(att);
        out.defender_policy.push(def);
    }
    Ok(out)
}

fn fresh_scratch(game: &MarkovGame) -> Vec<StateScratch> {
    game.states
        .iter()
        .map(|_| StateScratch { q: Vec::new(), ws: SimplexWorkspace::default() })
        .collect()
}

/// One minimax backup: each non-terminal state's value becomes the solution
/// of its Q matrix game; terminal states stay at zero.
pub fn shapley_backup(game: &MarkovGame, values: &[f64]) -> Result<BackupResult> {
    backup_with(game, values, SolveMode::Exact, &mut fresh_scratch(game))
}

/// One pure-strategy backup: max over rows of the column minimum of the Q
/// matrix, per state.
pub fn pure_strategy_backup(game: &MarkovGame, values: &[f64]) -> Result<BackupResult> {
    backup_with(game, values, SolveMode::Pure, &mut fresh_scratch(game))
}

fn check_discount(game: &MarkovGame, mode: SolveMode) -> Result<()> {
    if game.gamma >= 1.0 {
        return Err(Error::Config(format!("discount must be < 1 for {mode} mode")));
    }
    Ok(())
}

fn solve(game: &MarkovGame, cfg: &GameConfig, mode: SolveMode) -> Result<EquilibriumSolution> {
    cfg.validate()?;
    check_discount(game, mode)?;

    let n = game.n_states();
    let mut scratch = fresh_scratch(game);
    let mut values = vec![0.0; n];
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut backup = BackupResult {
        values: values.clone(),
        attacker_policy: Vec::new(),
        defender_policy: Vec::new(),
    };

    while iterations < cfg.max_iters {
        backup = backup_with(game, &values, mode, &mut scratch)?;
        iterations += 1;
        residual = 0.0;
        for (new, old) in backup.values.iter().zip(&values) {
            residual = residual.max((new - old).abs());
        }
        values.copy_from_slice(&backup.values);
        if residual <= cfg.epsilon {
            converged = true;
            break;
        }
    }

    Ok(EquilibriumSolution {
        values,
        attacker_policy: backup.attacker_policy,
        defender_policy: backup.defender_policy,
        iterations,
        residual,
        mode,
        converged,
    })
}

/// Solve the game by iterating [`shapley_backup`] from the all-zero value
/// function until the sup-norm residual reaches `cfg.epsilon`.
///
/// If the iteration cap is hit first, the result is still returned with
/// `converged == false`.
pub fn solve_exact(game: &MarkovGame, cfg: &GameConfig) -> Result<EquilibriumSolution> {
    solve(game, cfg, SolveMode::Exact)
}

/// Same loop as [`solve_exact`] but with the pure-strategy backup; both
/// players end up with deterministic per-state policies.
pub fn solve_pure(game: &MarkovGame, cfg: &GameConfig) -> Result<EquilibriumSolution> {
    solve(game, cfg, SolveMode::Pure)
}

/// Sup-norm distance between the solution's values and one more backup in
/// the solution's mode: a convergence certificate.
pub fn bellman_residual(game: &MarkovGame, solution: &EquilibriumSolution) -> Result<f64> {
    let next = backup_with(
        game,
        &solution.values,
        solution.mode,
        &mut fresh_scratch(game),
    )?;
    let mut residual = 0.0_f64;
    for s in 0..game.n_states() {
        residual = residual.max((next.values[s] - solution.values[s]).abs());
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_builder::build_game;
    use crate::matrix_solver::solve_matrix_game;
    use crate::scenario_gen::{demo_scenario, SplitMix64};

    fn fixture_game() -> MarkovGame {
        let (graph, catalog) = demo_scenario();
        build_game(&graph, &catalog, &GameConfig::default()).unwrap()
    }

    #[test]
    fn q_matrix_of_terminal_state_is_zero() {
        let game = fixture_game();
        let goal = game.find_state("FTP:root").unwrap();
        let values = vec![3.0, 2.0, 1.0, 0.0];
        let q = q_matrix(&game, goal, &values);
        assert_eq!((q.rows(), q.cols()), (1, 1));
        assert_eq!(q.get(0, 0), 0.0);
    }

    #[test]
    fn q_matrix_at_zero_values_is_the_one_shot_table() {
        let game = fixture_game();
        let s1 = game.find_state("LDAP:user").unwrap();
        let q = q_matrix(&game, s1, &[0.0; 4]);
        assert_eq!((q.rows(), q.cols()), (2, 2));
        assert_eq!(q.get(0, 0), 0.0);
        assert_eq!(q.get(0, 1), 0.5);
        assert_eq!(q.get(1, 0), 5.0);
        assert_eq!(q.get(1, 1), -5.0);
    }

    /// Independent scalar evaluation of the Q formula for a hand-picked
    /// entry: reward plus discounted expected continuation.
    #[test]
    fn q_value_matches_hand_evaluation() {
        let game = fixture_game();
        let s1 = game.find_state("LDAP:user").unwrap();
        let s2 = game.find_state("LDAP:root").unwrap();
        let mut values = vec![0.0; 4];
        values[s2] = 10.0;

        // exp-ldap-dirtycow vs no-mon: cia + gamma * (p * V(s2) + (1-p) * V(s1))
        let expected: f64 = 5.0 + 0.9 * (0.66 * 10.0 + 0.34 * 0.0);
        assert!((expected - 10.94).abs() < 1e-12);
        assert!((game.q_value(s1, 1, 0, &values) - expected).abs() <= 1e-12);
        assert!((q_matrix(&game, s1, &values).get(1, 0) - expected).abs() <= 1e-12);

        // Same attempt under matching monitoring: negated reward, damped advance.
        let p = 0.66 * (1.0 - 0.95);
        let expected = -5.0 + 0.9 * (p * 10.0 + (1.0 - p) * 0.0);
        assert!((game.q_value(s1, 1, 1, &values) - expected).abs() <= 1e-12);
    }

    #[test]
    fn backup_from_zero_solves_the_one_shot_games() {
        let game = fixture_game();
        let s1 = game.find_state("LDAP:user").unwrap();
        let goal = game.find_state("FTP:root").unwrap();
        let backup = shapley_backup(&game, &[0.0; 4]).unwrap();
        assert!((backup.values[s1] - 5.0 / 21.0).abs() <= 1e-9);
        assert_eq!(backup.values[goal], 0.0);
        assert_eq!(backup.attacker_policy[goal], vec![1.0]);
    }

    #[test]
    fn pure_backup_never_exceeds_mixed_backup() {
        let game = fixture_game();
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let values: Vec<f64> = (0..4).map(|_| rng.next_f64() * 20.0 - 5.0).collect();
            let mixed = shapley_backup(&game, &values).unwrap();
            let pure = pure_strategy_backup(&game, &values).unwrap();
            for s in 0..game.n_states() {
                assert!(pure.values[s] <= mixed.values[s] + 1e-9);
            }
        }
    }

    #[test]
    fn pure_backup_at_zero_is_zero_at_s1() {
        let game = fixture_game();
        let s1 = game.find_state("LDAP:user").unwrap();
        let pure = pure_strategy_backup(&game, &[0.0; 4]).unwrap();
        assert_eq!(pure.values[s1], 0.0);
        let mixed = shapley_backup(&game, &[0.0; 4]).unwrap();
        assert!(pure.values[s1] <= mixed.values[s1]);
    }

    #[test]
    fn backups_contract_with_factor_gamma() {
        let game = fixture_game();
        let mut rng = SplitMix64::new(23);
        for mode in [SolveMode::Exact, SolveMode::Pure] {
            for _ in 0..100 {
                let v: Vec<f64> = (0..4).map(|_| rng.next_f64() * 40.0 - 20.0).collect();
                let w: Vec<f64> = (0..4).map(|_| rng.next_f64() * 40.0 - 20.0).collect();
                let mut scratch = fresh_scratch(&game);
                let tv = backup_with(&game, &v, mode, &mut scratch).unwrap();
                let tw = backup_with(&game, &w, mode, &mut scratch).unwrap();
                let lhs = tv
                    .values
                    .iter()
                    .zip(&tw.values)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                let rhs = v
                    .iter()
                    .zip(&w)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                assert!(
                    lhs <= 0.9 * rhs + 1e-9,
                    "{mode} backup expanded: {lhs} > 0.9 * {rhs}"
                );
            }
        }
    }

    /// Value iteration recoded from scratch against the fixture data:
    /// states, exploits, rewards and transitions written out by hand rather
    /// than taken from the game structure.
    fn oracle_fixture_values(gamma: f64) -> Vec<f64> {
        // exploits per state: (p_success, cia, target index)
        // state order: s1 (LDAP:user), s2 (LDAP:root), s3 (Web:root), goal.
        let exploits: [Vec<(f64, f64, usize)>; 4] = [
            vec![(0.66, 5.0, 1)],                      // dirtycow -> LDAP:root
            vec![(0.66, 10.0, 3), (0.9, 7.0, 2)],      // ftp-rce -> goal, web-xss -> Web:root
            vec![(0.66, 10.0, 3)],                     // ftp-rce -> goal
            vec![],
        ];
        let p_detect = 0.95;
        let monitor_cost = 0.5;
        let mut values = vec![0.0; 4];
        for _ in 0..4000 {
            let mut next = vec![0.0; 4];
            for s in 0..3 {
                let n = 1 + exploits[s].len();
                let mut q = Vec::with_capacity(n * n);
                for a1 in 0..n {
                    for a2 in 0..n {
                        let entry = if a1 == 0 {
                            let r = if a2 == 0 { 0.0 } else { monitor_cost };
                            r + gamma * values[s]
                        } else {
                            let (p, cia, target) = exploits[s][a1 - 1];
                            let (r, adv) = if a2 == a1 {
                                (-cia, p * (1.0 - p_detect))
                            } else {
                                (cia, p)
                            };
                            r + gamma * (adv * values[target] + (1.0 - adv) * values[s])
                        };
                        q.push(entry);
                    }
                }
                let m = PayoffMatrix::new(n, n, q).unwrap();
                next[s] = solve_matrix_game(&m, DEFAULT_TOL).unwrap().value;
            }
            values = next;
        }
        values
    }

    #[test]
    fn exact_solve_converges_and_matches_the_oracle() {
        let game = fixture_game();
        let cfg = GameConfig::default();
        let sol = solve_exact(&game, &cfg).unwrap();
        assert!(sol.converged);
        assert!(sol.iterations < 1000, "took {} iterations", sol.iterations);
        assert!(sol.residual <= cfg.epsilon);
        let goal = game.find_state("FTP:root").unwrap();
        assert_eq!(sol.values[goal], 0.0);

        let oracle = oracle_fixture_values(0.9);
        for (s, (got, want)) in sol.values.iter().zip(&oracle).enumerate() {
            assert!((got - want).abs() <= 1e-4, "state {s}: solver {got} vs oracle {want}");
        }

        for s in 0..4 {
            let sum: f64 = sol.attacker_policy[s].iter().sum();
            assert!((sum - 1.0).abs() <= 1e-9);
            let sum: f64 = sol.defender_policy[s].iter().sum();
            assert!((sum - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn all_zero_reward_game_solves_in_one_iteration() {
        let game = fixture_game();
        let idle = game.restrict(&game.vuln_keys()).unwrap();
        let sol = solve_exact(&idle, &GameConfig::default()).unwrap();
        assert_eq!(sol.iterations, 1);
        assert!(sol.values.iter().all(|v| *v == 0.0));
        // With nothing to monitor the defender's only action is no-mon.
        assert_eq!(sol.defender_policy[idle.initial], vec![1.0]);
    }

    #[test]
    fn pure_solve_yields_deterministic_policies() {
        let game = fixture_game();
        let sol = solve_pure(&game, &GameConfig::default()).unwrap();
        assert_eq!(sol.mode, SolveMode::Pure);
        assert!(sol.converged);
        for s in 0..game.n_states() {
            let ones = sol.attacker_policy[s].iter().filter(|p| **p == 1.0).count();
            let zeros = sol.attacker_policy[s].iter().filter(|p| **p == 0.0).count();
            assert_eq!(ones, 1);
            assert_eq!(zeros, sol.attacker_policy[s].len() - 1);
        }
    }

    #[test]
    fn pure_solve_value_never_exceeds_exact() {
        let game = fixture_game();
        let cfg = GameConfig::default();
        let exact = solve_exact(&game, &cfg).unwrap();
        let pure = solve_pure(&game, &cfg).unwrap();
        for s in 0..game.n_states() {
            assert!(pure.values[s] <= exact.values[s] + 1e-6);
        }
    }

    #[test]
    fn discount_of_one_is_rejected() {
        let (graph, catalog) = demo_scenario();
        let cfg = GameConfig { gamma: 1.0, ..GameConfig::default() };
        let game = build_game(&graph, &catalog, &cfg).unwrap();
        let err = solve_exact(&game, &cfg).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("discount must be < 1"));
        assert!(matches!(solve_pure(&game, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let game = fixture_game();
        let cfg = GameConfig { max_iters: 3, ..GameConfig::default() };
        let sol = solve_exact(&game, &cfg).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 3);
        assert!(sol.residual > cfg.epsilon);
    }

    #[test]
    fn residual_of_converged_solution_is_small() {
        let game = fixture_game();
        let cfg = GameConfig::default();
        let sol = solve_exact(&game, &cfg).unwrap();
        assert!(bellman_residual(&game, &sol).unwrap() <= cfg.epsilon);
        let pure = solve_pure(&game, &cfg).unwrap();
        assert!(bellman_residual(&game, &pure).unwrap() <= cfg.epsilon);
    }

    #[test]
    fn residual_at_zero_is_the_largest_one_shot_value() {
        let game = fixture_game();
        let zero = EquilibriumSolution {
            values: vec![0.0; 4],
            attacker_policy: vec![],
            defender_policy: vec![],
            iterations: 0,
            residual: f64::INFINITY,
            mode: SolveMode::Exact,
            converged: false,
        };
        let residual = bellman_residual(&game, &zero).unwrap();
        // One-shot values: 5/21 at s1, and the larger s2/s3 games.
        let backup = shapley_backup(&game, &[0.0; 4]).unwrap();
        let expected = backup.values.iter().copied().fold(0.0_f64, f64::max);
        assert_eq!(residual, expected);
        assert!(residual >= 5.0 / 21.0 - 1e-12);
    }

    #[test]
    fn perturbed_solution_has_residual_of_at_least_the_contraction_bound() {
        let game = fixture_game();
        let cfg = GameConfig::default();
        let mut sol = solve_exact(&game, &cfg).unwrap();
        let s1 = game.find_state("LDAP:user").unwrap();
        sol.values[s1] += 1.0;
        let residual = bellman_residual(&game, &sol).unwrap();
        assert!(residual >= (1.0 - 0.9) - cfg.epsilon);
    }

    #[test]
    fn solving_twice_is_bit_identical() {
        let game = fixture_game();
        let cfg = GameConfig::default();
        let a = solve_exact(&game, &cfg).unwrap();
        let b = solve_exact(&game, &cfg).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.attacker_policy, b.attacker_policy);
        assert_eq!(a.defender_policy, b.defender_policy);
        assert_eq!(a.iterations, b.iterations);
    }
}

//! Machine-readable solve reports: values and per-state policies as JSON.

use serde::Serialize;

use crate::game_builder::{GameConfig, MarkovGame};
use crate::game_solver::{EquilibriumSolution, SolveMode};

#[derive(Debug, Clone, Serialize)]
pub struct ActionProb {
    pub action: String,
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateReport {
    pub id: String,
    pub terminal: bool,
    pub value: f64,
    pub attacker_policy: Vec<ActionProb>,
    pub defender_policy: Vec<ActionProb>,
}

/// Full solver output for one game, in a stable field and state order.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub mode: SolveMode,
    pub gamma: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub initial_state: String,
    pub initial_value: f64,
    pub states: Vec<StateReport>,
}

impl SolveReport {
    pub fn new(game: &MarkovGame, cfg: &GameConfig, solution: &EquilibriumSolution) -> Self {
        let states = (0..game.n_states())
            .map(|s| StateReport {
                id: game.states[s].id.clone(),
                terminal: game.states[s].terminal,
                value: solution.values[s],
                attacker_policy: solution.attacker_policy[s]
                    .iter()
                    .enumerate()
                    .map(|(a, p)| ActionProb {
                        action: game.attacker_action_label(s, a),
                        prob: *p,
                    })
                    .collect(),
                defender_policy: solution.defender_policy[s]
                    .iter()
                    .enumerate()
                    .map(|(a, p)| ActionProb {
                        action: game.defender_action_label(s, a),
                        prob: *p,
                    })
                    .collect(),
            })
            .collect();
        SolveReport {
            mode: solution.mode,
            gamma: game.gamma,
            epsilon: cfg.epsilon,
            iterations: solution.iterations,
            residual: solution.residual,
            converged: solution.converged,
            initial_state: game.states[game.initial].id.clone(),
            initial_value: solution.values[game.initial],
            states,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_builder::build_game;
    use crate::game_solver::solve_exact;
    use crate::scenario_gen::demo_scenario;

    #[test]
    fn report_carries_values_and_labelled_policies() {
        let (graph, catalog) = demo_scenario();
        let cfg = GameConfig::default();
        let game = build_game(&graph, &catalog, &cfg).unwrap();
        let solution = solve_exact(&game, &cfg).unwrap();
        let report = SolveReport::new(&game, &cfg, &solution);

        assert_eq!(report.initial_state, "LDAP:user");
        assert_eq!(report.states.len(), 4);
        let goal = report.states.iter().find(|s| s.id == "FTP:root").unwrap();
        assert!(goal.terminal);
        assert_eq!(goal.value, 0.0);

        let s2 = report.states.iter().find(|s| s.id == "LDAP:root").unwrap();
        let actions: Vec<&str> =
            s2.attacker_policy.iter().map(|ap| ap.action.as_str()).collect();
        assert_eq!(actions, vec!["no-act", "exp-ftp-rce", "exp-web-xss"]);

        let json = report.to_json();
        assert!(json.contains("\"initial_state\": \"LDAP:user\""));
        assert!(json.ends_with('\n'));
        // Identical inputs serialize identically.
        assert_eq!(json, SolveReport::new(&game, &cfg, &solution).to_json());
    }
}

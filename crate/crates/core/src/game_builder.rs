//! Compile an attack graph and a vulnerability catalog into a two-player
//! zero-sum Markov game.
//!
//! States are the privilege/goal nodes of the graph. In every non-terminal
//! state the attacker chooses between doing nothing and attempting one of
//! the exploits launchable from that privilege; the defender simultaneously
//! chooses between not monitoring and monitoring one of those same exploits.
//! Rewards come from the CIA score of the attempted exploit (negated when
//! the defender monitors exactly that exploit, a small monitoring cost paid
//! to an idle attacker otherwise), transition probabilities from the
//! access-complexity map, damped by the detection probability on a monitored
//! attempt. Goal states are absorbing with zero reward.

use serde::{Deserialize, Serialize};

use crate::attack_graph::{AttackGraph, NodeKind};
use crate::error::{Error, Result};
use crate::vuln_catalog::{AcProbabilityMap, Catalog};

/// Parameters of the game compilation and of the solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    /// Discount factor in (0, 1]; the solvers additionally require < 1.
    pub gamma: f64,
    /// Probability that an exploit attempt against a monitored service is
    /// blocked.
    pub p_detect: f64,
    /// Attacker's reward when idling while the defender pays for monitoring.
    pub monitor_cost: f64,
    /// Access-complexity to success-probability table.
    pub ac_map: AcProbabilityMap,
    /// Convergence tolerance on the sup-norm of successive value functions.
    pub epsilon: f64,
    /// Iteration cap for the solvers.
    pub max_iters: usize,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            gamma: 0.9,
            p_detect: 0.95,
            monitor_cost: 0.5,
            ac_map: AcProbabilityMap::default(),
            epsilon: 1e-6,
            max_iters: 10_000,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Config(format!("gamma {} outside (0, 1]", self.gamma)));
        }
        if !(self.p_detect >= 0.0 && self.p_detect <= 1.0) {
            return Err(Error::Config(format!("p_detect {} outside [0, 1]", self.p_detect)));
        }
        if self.monitor_cost < 0.0 || self.monitor_cost.is_nan() {
            return Err(Error::Config(format!("monitor_cost {} is negative", self.monitor_cost)));
        }
        if self.epsilon <= 0.0 || self.epsilon.is_nan() {
            return Err(Error::Config(format!("epsilon {} must be positive", self.epsilon)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        self.ac_map.validate()
    }
}

/// One exploit action available in a state (with the matching monitor action
/// on the defender side).
#[derive(Debug, Clone, PartialEq)]
pub struct ExploitAction {
    /// Catalog key of the underlying vulnerability.
    pub key: String,
    /// Attack-graph exploit node.
    pub exploit_id: String,
    /// State index reached on success.
    pub target: usize,
    /// Success probability of an unmonitored attempt.
    pub p_success: f64,
    /// Reward magnitude (CIA impact).
    pub cia: f64,
}

/// One game state: a privilege/goal node plus its enabled exploits.
///
/// Attacker actions are `no-act` followed by the exploits in order;
/// defender actions are `no-mon` followed by the matching monitors.
#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    pub id: String,
    pub terminal: bool,
    pub exploits: Vec<ExploitAction>,
}

/// A compiled zero-sum Markov game. Immutable; queries are read-only.
///
/// The defender's payoff is the negation of every reward returned here.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovGame {
    pub states: Vec<GameState>,
    pub initial: usize,
    pub gamma: f64,
    pub p_detect: f64,
    pub monitor_cost: f64,
}

impl MarkovGame {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn find_state(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    /// Number of attacker actions in state `s` (`no-act` + exploits).
    pub fn attacker_actions(&self, s: usize) -> usize {
        1 + self.states[s].exploits.len()
    }

    /// Number of defender actions in state `s` (`no-mon` + monitors).
    pub fn defender_actions(&self, s: usize) -> usize {
        1 + self.states[s].exploits.len()
    }

    pub fn attacker_action_label(&self, s: usize, a: usize) -> String {
        if a == 0 {
            "no-act".into()
        } else {
            format!("exp-{}", self.states[s].exploits[a - 1].key)
        }
    }

    pub fn defender_action_label(&self, s: usize, a: usize) -> String {
        if a == 0 {
            "no-mon".into()
        } else {
            format!("mon-{}", self.states[s].exploits[a - 1].key)
        }
    }

    /// Attacker's immediate reward for the joint action `(a1, a2)` in `s`.
    pub fn reward(&self, s: usize, a1: usize, a2: usize) -> f64 {
        if a1 == 0 {
            if a2 == 0 {
                0.0
            } else {
                self.monitor_cost
            }
        } else {
            let e = &self.states[s].exploits[a1 - 1];
            if a2 == a1 {
                -e.cia
            } else {
                e.cia
            }
        }
    }

    /// Probability of the exploit behind attacker action `a1` advancing,
    /// given defender action `a2`. Zero for `no-act`.
    fn advance_probability(&self, s: usize, a1: usize, a2: usize) -> f64 {
        if a1 == 0 {
            return 0.0;
        }
        let e = &self.states[s].exploits[a1 - 1];
        if a2 == a1 {
            e.p_success * (1.0 - self.p_detect)
        } else {
            e.p_success
        }
    }

    /// Transition distribution over successor states for `(s, a1, a2)`.
    /// At most two entries; probabilities sum to one.
    pub fn transitions(&self, s: usize, a1: usize, a2: usize) -> Vec<(usize, f64)> {
        let p = self.advance_probability(s, a1, a2);
        if p == 0.0 {
            return vec![(s, 1.0)];
        }
        let target = self.states[s].exploits[a1 - 1].target;
        if p == 1.0 {
            return vec![(target, 1.0)];
        }
        vec![(target, p), (s, 1.0 - p)]
    }

    /// Expected one-step quality of the joint action: reward plus the
    /// discounted expected continuation value under `values`.
    pub fn q_value(&self, s: usize, a1: usize, a2: usize, values: &[f64]) -> f64 {
        let r = self.reward(s, a1, a2);
        let p = self.advance_probability(s, a1, a2);
        let cont = if p == 0.0 {
            values[s]
        } else {
            let target = self.states[s].exploits[a1 - 1].target;
            p * values[target] + (1.0 - p) * values[s]
        };
        r + self.gamma * cont
    }

    /// Distinct vulnerability keys wired into any state's actions,
    /// ascending.
    pub fn vuln_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self
            .states
            .iter()
            .flat_map(|s| s.exploits.iter().map(|e| e.key.clone()))
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// Copy of the game with the exploit and monitor actions of every
    /// patched vulnerability removed. States are left intact.
    pub fn restrict(&self, patched: &[String]) -> Result<MarkovGame> {
        let known = self.vuln_keys();
        for key in patched {
            if !known.contains(key) {
                return Err(Error::UnknownKey(key.clone()));
            }
        }
        let mut game = self.clone();
        for state in &mut game.states {
            state.exploits.retain(|e| !patched.contains(&e.key));
        }
        Ok(game)
    }
}

/// Free-function alias for [`MarkovGame::restrict`].
pub fn restrict_game(game: &MarkovGame, patched: &[String]) -> Result<MarkovGame> {
    game.restrict(patched)
}

/// Compile a validated attack graph and catalog into a Markov game.
///
/// Every exploit node must reference a catalog entry and establish exactly
/// one privilege. Exploits launchable from a goal state are ignored (goals
/// are absorbing). Deterministic: per-state exploit actions are sorted by
/// `(key, exploit id)`.
pub fn build_game(graph: &AttackGraph, catalog: &Catalog, cfg: &GameConfig) -> Result<MarkovGame> {
    cfg.validate()?;
    let report = graph.validate();
    if !report.is_ok() {
        return Err(Error::InvalidGraph(report));
    }

    let mut states: Vec<GameState> = graph
        .privileges()
        .map(|n| GameState {
            id: n.id.clone(),
            terminal: n.kind == NodeKind::Goal,
            exploits: Vec::new(),
        })
        .collect();
    let index_of = |id: &str| states.iter().position(|s| s.id == id);

    let initial = index_of(&graph.initial)
        .ok_or_else(|| Error::Graph(format!("initial node `{}` not found", graph.initial)))?;

    let mut placed: Vec<(usize, ExploitAction)> = Vec::new();
    for exploit in graph.exploits() {
        let key = exploit
            .vuln_ref
            .as_ref()
            .ok_or_else(|| Error::Graph(format!("exploit `{}` has no vuln_ref", exploit.id)))?;
        let record = catalog.get(key).ok_or_else(|| Error::UnknownKey(key.clone()))?;

        let targets = graph.exploit_targets(&exploit.id);
        if targets.len() != 1 {
            return Err(Error::Graph(format!(
                "exploit `{}` must establish exactly one privilege, found {}",
                exploit.id,
                targets.len()
            )));
        }
        let target = index_of(targets[0]).ok_or_else(|| {
            Error::Graph(format!("exploit `{}` targets unknown node `{}`", exploit.id, targets[0]))
        })?;

        for source in graph.exploit_sources(&exploit.id) {
            let Some(s) = index_of(source) else {
                return Err(Error::Graph(format!(
                    "exploit `{}` is launched from unknown node `{}`",
                    exploit.id, source
                )));
            };
            if states[s].terminal {
                continue;
            }
            placed.push((
                s,
                ExploitAction {
                    key: key.clone(),
                    exploit_id: exploit.id.clone(),
                    target,
                    p_success: cfg.ac_map.probability(record.ac),
                    cia: record.cia,
                },
            ));
        }
    }
    for (s, action) in placed {
        states[s].exploits.push(action);
    }
    for state in &mut states {
        state.exploits.sort_by(|a, b| (&a.key, &a.exploit_id).cmp(&(&b.key, &b.exploit_id)));
    }

    Ok(MarkovGame {
        states,
        initial,
        gamma: cfg.gamma,
        p_detect: cfg.p_detect,
        monitor_cost: cfg.monitor_cost,
    })
}

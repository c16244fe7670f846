//! Countermeasure (patch) selection under a coverage budget, and coverage
//! sweeps comparing the naive CIA ranking against game-guided greedy
//! interdiction.
//!
//! The naive defender patches the highest-CIA vulnerabilities. The strategic
//! defender repeatedly patches whichever remaining vulnerability minimizes
//! the attacker's solved game value at the initial state — a greedy
//! interdiction stand-in for "analyze the game, harden the high-value
//! targets". Both are evaluated at the same objective: the exact game value
//! of the restricted game at the initial state.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game_builder::{GameConfig, MarkovGame};
use crate::game_solver::solve_exact;
use crate::vuln_catalog::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementStrategy {
    Naive,
    Strategic,
}

/// A chosen patch set: `patched` holds distinct keys in selection order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    pub strategy: PlacementStrategy,
    pub coverage_pct: u32,
    pub patched: Vec<String>,
}

/// Ceiling of `pct%` of `total`, computed in integer arithmetic.
pub fn coverage_budget(total: usize, pct: u32) -> usize {
    (total * pct as usize).div_ceil(100)
}

/// Patch the top `pct%` of the catalog by descending CIA score, ties broken
/// by ascending key.
pub fn naive_placement(catalog: &Catalog, coverage_pct: u32) -> Placement {
    let mut ranked: Vec<(&str, f64)> = catalog.iter().map(|r| (r.key.as_str(), r.cia)).collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let budget = coverage_budget(catalog.len(), coverage_pct).min(catalog.len());
    Placement {
        strategy: PlacementStrategy::Naive,
        coverage_pct,
        patched: ranked[..budget].iter().map(|(k, _)| k.to_string()).collect(),
    }
}

/// One greedy interdiction step: the chosen key and the attacker value at
/// the initial state after patching it (on top of everything before it).
#[derive(Debug, Clone)]
struct GreedyStep {
    key: String,
    value: f64,
}

/// Greedy interdiction up to `budget` patches.
///
/// Each step solves the restricted game once per remaining candidate and
/// keeps the candidate minimizing the initial-state value, ties broken by
/// ascending key. Candidates are solved in parallel; the selection scans a
/// fixed key order, so results do not depend on thread count.
fn greedy_interdiction(
    game: &MarkovGame,
    cfg: &GameConfig,
    budget: usize,
) -> Result<Vec<GreedyStep>> {
    let mut remaining = game.vuln_keys();
    let mut patched: Vec<String> = Vec::new();
    let mut steps = Vec::new();

    for _ in 0..budget.min(remaining.len()) {
        let evals: Vec<(String, f64)> = remaining
            .par_iter()
            .map(|key| -> Result<(String, f64)> {
                let mut trial = patched.clone();
                trial.push(key.clone());
                let restricted = game.restrict(&trial)?;
                let sol = solve_exact(&restricted, cfg)?;
                Ok((key.clone(), sol.values[restricted.initial]))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut best: Option<&(String, f64)> = None;
        for eval in &evals {
            if best.is_none_or(|b| eval.1 < b.1) {
                best = Some(eval);
            }
        }
        let (key, value) = best.expect("budget loop runs only while candidates remain").clone();
        remaining.retain(|k| *k != key);
        patched.push(key.clone());
        steps.push(GreedyStep { key, value });
    }
    Ok(steps)
}

/// Strategic placement: greedy interdiction with a budget of `pct%` of the
/// game's vulnerabilities.
pub fn strategic_placement(
    game: &MarkovGame,
    cfg: &GameConfig,
    coverage_pct: u32,
) -> Result<Placement> {
    let total = game.vuln_keys().len();
    let budget = coverage_budget(total, coverage_pct).min(total);
    let steps = greedy_interdiction(game, cfg, budget)?;
    Ok(Placement {
        strategy: PlacementStrategy::Strategic,
        coverage_pct,
        patched: steps.into_iter().map(|s| s.key).collect(),
    })
}

/// Attacker value at the initial state of the game restricted by the
/// placement.
pub fn evaluate_placement(game: &MarkovGame, cfg: &GameConfig, p: &Placement) -> Result<f64> {
    let restricted = game.restrict(&p.patched)?;
    let sol = solve_exact(&restricted, cfg)?;
    Ok(sol.values[restricted.initial])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub coverage_pct: u32,
    pub naive_value: f64,
    pub strategic_value: f64,
}

/// Rows of (coverage, naive value, strategic value), plus the scenario seed
/// and the config the sweep ran under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: Option<u64>,
    pub config: GameConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// The CSV interface: fixed header, one row per coverage, six decimal
    /// places, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("coverage_pct,naive_value,strategic_value\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{:.6},{:.6}\n",
                row.coverage_pct, row.naive_value, row.strategic_value
            ));
        }
        out
    }
}

/// Evaluate both placement strategies at each coverage level.
///
/// Greedy interdiction is prefix-consistent — the first `k` picks do not
/// depend on the budget — so the greedy sequence is computed once up to the
/// largest coverage and each row takes a prefix; the value recorded at each
/// step is reused as that prefix's evaluation.
pub fn run_sweep(
    game: &MarkovGame,
    catalog: &Catalog,
    cfg: &GameConfig,
    coverages: &[u32],
    seed: Option<u64>,
) -> Result<SweepReport> {
    if coverages.is_empty() {
        return Err(Error::Config("coverage list must not be empty".into()));
    }
    if coverages.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("coverages must be strictly ascending".into()));
    }
    if coverages.iter().any(|pct| *pct > 100) {
        return Err(Error::Config("coverages are percentages in 0..=100".into()));
    }

    let total = game.vuln_keys().len();
    let max_budget = coverage_budget(total, *coverages.last().unwrap()).min(total);
    let steps = greedy_interdiction(game, cfg, max_budget)?;
    let unrestricted = solve_exact(game, cfg)?.values[game.initial];

    let mut rows = Vec::with_capacity(coverages.len());
    for &pct in coverages {
        let naive = naive_placement(catalog, pct);
        let naive_value = evaluate_placement(game, cfg, &naive)?;
        let budget = coverage_budget(total, pct).min(total);
        let strategic_value = if budget == 0 { unrestricted } else { steps[budget - 1].value };
        rows.push(SweepRow { coverage_pct: pct, naive_value, strategic_value });
    }

    Ok(SweepReport { seed, config: cfg.clone(), rows })
}

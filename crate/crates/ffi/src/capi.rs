//! The exported C functions.
//!
//! Conventions:
//! - Heap objects are returned through out-pointers as opaque handles and
//!   released with the matching `_free` function.
//! - Every fallible call returns an [`MtdStatus`]; on failure a description
//!   is available from [`mtdgame_last_error`] until the next failing call on
//!   the same thread.
//! - Strings returned through out-pointers are NUL-terminated copies owned
//!   by the caller; release them with [`mtdgame_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mtdgame::error::Error;
use mtdgame::{
    build_game, generate_scenario, load_attack_graph, load_catalog, run_sweep, solve_exact,
    solve_pure, AcProbabilityMap, AttackGraph, Catalog, EquilibriumSolution, GameConfig,
    MarkovGame, ScenarioSpec, SolveReport,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtdStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidGraph = 5,
    BadConfig = 6,
    UnknownKey = 7,
    SolverFailure = 8,
    Panic = 9,
}

/// Solver selector for [`mtdgame_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtdSolveMode {
    Exact = 0,
    Pure = 1,
}

/// Plain-data mirror of the game configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MtdConfig {
    pub gamma: f64,
    pub p_detect: f64,
    pub monitor_cost: f64,
    pub ac_easy: f64,
    pub ac_medium: f64,
    pub ac_high: f64,
    pub epsilon: f64,
    pub max_iters: u64,
}

impl From<&MtdConfig> for GameConfig {
    fn from(c: &MtdConfig) -> GameConfig {
        GameConfig {
            gamma: c.gamma,
            p_detect: c.p_detect,
            monitor_cost: c.monitor_cost,
            ac_map: AcProbabilityMap { easy: c.ac_easy, medium: c.ac_medium, high: c.ac_high },
            epsilon: c.epsilon,
            max_iters: c.max_iters as usize,
        }
    }
}

/// Opaque attack graph handle.
pub struct MtdGraph {
    inner: AttackGraph,
}

/// Opaque vulnerability catalog handle.
pub struct MtdCatalog {
    inner: Catalog,
}

/// Opaque compiled game handle.
pub struct MtdGame {
    inner: MarkovGame,
    cfg: GameConfig,
}

/// Opaque solution handle.
pub struct MtdSolution {
    game: MarkovGame,
    cfg: GameConfig,
    solution: EquilibriumSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let cstring = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> MtdStatus {
    match err {
        Error::Io { .. } => MtdStatus::Io,
        Error::Parse { .. } => MtdStatus::Parse,
        Error::InvalidGraph(_) => MtdStatus::InvalidGraph,
        Error::Graph(_) => MtdStatus::InvalidGraph,
        Error::Config(_) => MtdStatus::BadConfig,
        Error::UnknownKey(_) => MtdStatus::UnknownKey,
        Error::Query(_) => MtdStatus::UnknownKey,
        Error::Solver(_) => MtdStatus::SolverFailure,
    }
}

fn fail(err: &Error) -> MtdStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn guard(f: impl FnOnce() -> MtdStatus) -> MtdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic inside mtdgame");
            MtdStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string valid for the call.
unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, MtdStatus> {
    if ptr.is_null() {
        set_last_error("null string argument");
        return Err(MtdStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        MtdStatus::InvalidUtf8
    })
}

fn require<'a, T>(ptr: *const T) -> Result<&'a T, MtdStatus> {
    if ptr.is_null() {
        set_last_error("null handle argument");
        return Err(MtdStatus::NullArgument);
    }
    // SAFETY: caller promised a valid handle; nullness checked above.
    Ok(unsafe { &*ptr })
}

fn require_out<'a, T>(ptr: *mut T) -> Result<&'a mut T, MtdStatus> {
    if ptr.is_null() {
        set_last_error("null out-pointer");
        return Err(MtdStatus::NullArgument);
    }
    // SAFETY: caller promised a writable location.
    Ok(unsafe { &mut *ptr })
}

fn give_string(out: &mut *mut c_char, s: String) -> MtdStatus {
    match CString::new(s) {
        Ok(cstring) => {
            *out = cstring.into_raw();
            MtdStatus::Ok
        }
        Err(_) => {
            set_last_error("string contains interior NUL");
            MtdStatus::SolverFailure
        }
    }
}

/// Message describing the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread;
/// do not free it.
#[no_mangle]
pub extern "C" fn mtdgame_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(std::ptr::null(), |msg| msg.as_ptr())
    })
}

/// Fill `out` with the default configuration.
///
/// # Safety
/// `out` must point to writable memory for one `MtdConfig`.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_config_default(out: *mut MtdConfig) -> MtdStatus {
    guard(|| {
        let out = match require_out(out) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let cfg = GameConfig::default();
        *out = MtdConfig {
            gamma: cfg.gamma,
            p_detect: cfg.p_detect,
            monitor_cost: cfg.monitor_cost,
            ac_easy: cfg.ac_map.easy,
            ac_medium: cfg.ac_map.medium,
            ac_high: cfg.ac_map.high,
            epsilon: cfg.epsilon,
            max_iters: cfg.max_iters as u64,
        };
        MtdStatus::Ok
    })
}

/// Load and validate an attack graph from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_graph_load(
    path: *const c_char,
    out: *mut *mut MtdGraph,
) -> MtdStatus {
    guard(|| {
        let (path, out) = match (str_arg(path), require_out(out)) {
            (Ok(p), Ok(o)) => (p, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match load_attack_graph(path) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MtdGraph { inner }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `graph` must come from [`mtdgame_graph_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_graph_free(graph: *mut MtdGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Load a vulnerability catalog from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_catalog_load(
    path: *const c_char,
    out: *mut *mut MtdCatalog,
) -> MtdStatus {
    guard(|| {
        let (path, out) = match (str_arg(path), require_out(out)) {
            (Ok(p), Ok(o)) => (p, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match load_catalog(path) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MtdCatalog { inner }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `catalog` must come from [`mtdgame_catalog_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_catalog_free(catalog: *mut MtdCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Generate a deterministic layered scenario.
///
/// # Safety
/// `out_graph` and `out_catalog` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_generate(
    seed: u64,
    n_vms: u32,
    n_vulns: u32,
    n_layers: u32,
    out_graph: *mut *mut MtdGraph,
    out_catalog: *mut *mut MtdCatalog,
) -> MtdStatus {
    guard(|| {
        let (out_graph, out_catalog) = match (require_out(out_graph), require_out(out_catalog)) {
            (Ok(g), Ok(c)) => (g, c),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let spec = ScenarioSpec { seed, n_vms, n_vulns, n_layers, ..ScenarioSpec::default() };
        match generate_scenario(&spec) {
            Ok((graph, catalog)) => {
                *out_graph = Box::into_raw(Box::new(MtdGraph { inner: graph }));
                *out_catalog = Box::into_raw(Box::new(MtdCatalog { inner: catalog }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Compile graph + catalog + config into a game.
///
/// # Safety
/// All handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_game_build(
    graph: *const MtdGraph,
    catalog: *const MtdCatalog,
    cfg: *const MtdConfig,
    out: *mut *mut MtdGame,
) -> MtdStatus {
    guard(|| {
        let (graph, catalog, cfg, out) =
            match (require(graph), require(catalog), require(cfg), require_out(out)) {
                (Ok(g), Ok(c), Ok(f), Ok(o)) => (g, c, f, o),
                (Err(s), _, _, _) | (_, Err(s), _, _) | (_, _, Err(s), _) | (_, _, _, Err(s)) => {
                    return s
                }
            };
        let game_cfg = GameConfig::from(cfg);
        match build_game(&graph.inner, &catalog.inner, &game_cfg) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MtdGame { inner, cfg: game_cfg }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `game` must come from a build/restrict call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_game_free(game: *mut MtdGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Copy of the game with the given vulnerability keys patched out.
///
/// # Safety
/// `keys` must point to `n_keys` NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_game_restrict(
    game: *const MtdGame,
    keys: *const *const c_char,
    n_keys: usize,
    out: *mut *mut MtdGame,
) -> MtdStatus {
    guard(|| {
        let (game, out) = match (require(game), require_out(out)) {
            (Ok(g), Ok(o)) => (g, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if n_keys > 0 && keys.is_null() {
            set_last_error("null key array");
            return MtdStatus::NullArgument;
        }
        let mut patched = Vec::with_capacity(n_keys);
        for i in 0..n_keys {
            match str_arg(*keys.add(i)) {
                Ok(k) => patched.push(k.to_string()),
                Err(s) => return s,
            }
        }
        match game.inner.restrict(&patched) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MtdGame { inner, cfg: game.cfg.clone() }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Solve the game; query the solution handle for values and policies.
/// A solve that hits the iteration cap still returns `Ok` with the handle's
/// `converged` flag unset.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solve(
    game: *const MtdGame,
    cfg: *const MtdConfig,
    mode: MtdSolveMode,
    out: *mut *mut MtdSolution,
) -> MtdStatus {
    guard(|| {
        let (game, cfg, out) = match (require(game), require(cfg), require_out(out)) {
            (Ok(g), Ok(c), Ok(o)) => (g, c, o),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let game_cfg = GameConfig::from(cfg);
        let solved = match mode {
            MtdSolveMode::Exact => solve_exact(&game.inner, &game_cfg),
            MtdSolveMode::Pure => solve_pure(&game.inner, &game_cfg),
        };
        match solved {
            Ok(solution) => {
                *out = Box::into_raw(Box::new(MtdSolution {
                    game: game.inner.clone(),
                    cfg: game_cfg,
                    solution,
                }));
                MtdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `solution` must come from [`mtdgame_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_free(solution: *mut MtdSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Attacker's value at the game's initial state.
///
/// # Safety
/// `solution` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_initial_value(
    solution: *const MtdSolution,
    out: *mut f64,
) -> MtdStatus {
    guard(|| {
        let (sol, out) = match (require(solution), require_out(out)) {
            (Ok(s), Ok(o)) => (s, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        *out = sol.solution.values[sol.game.initial];
        MtdStatus::Ok
    })
}

/// Attacker's value at a named state.
///
/// # Safety
/// `solution` and `state_id` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_state_value(
    solution: *const MtdSolution,
    state_id: *const c_char,
    out: *mut f64,
) -> MtdStatus {
    guard(|| {
        let (sol, id, out) = match (require(solution), str_arg(state_id), require_out(out)) {
            (Ok(s), Ok(i), Ok(o)) => (s, i, o),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        match sol.game.find_state(id) {
            Some(s) => {
                *out = sol.solution.values[s];
                MtdStatus::Ok
            }
            None => {
                set_last_error(&format!("unknown state id `{id}`"));
                MtdStatus::UnknownKey
            }
        }
    })
}

/// # Safety
/// `solution` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_iterations(
    solution: *const MtdSolution,
    out: *mut u64,
) -> MtdStatus {
    guard(|| {
        let (sol, out) = match (require(solution), require_out(out)) {
            (Ok(s), Ok(o)) => (s, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        *out = sol.solution.iterations as u64;
        MtdStatus::Ok
    })
}

/// # Safety
/// `solution` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_residual(
    solution: *const MtdSolution,
    out: *mut f64,
) -> MtdStatus {
    guard(|| {
        let (sol, out) = match (require(solution), require_out(out)) {
            (Ok(s), Ok(o)) => (s, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        *out = sol.solution.residual;
        MtdStatus::Ok
    })
}

/// Whether the solve reached epsilon before the iteration cap.
///
/// # Safety
/// `solution` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_converged(
    solution: *const MtdSolution,
    out: *mut bool,
) -> MtdStatus {
    guard(|| {
        let (sol, out) = match (require(solution), require_out(out)) {
            (Ok(s), Ok(o)) => (s, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        *out = sol.solution.converged;
        MtdStatus::Ok
    })
}

/// Full JSON value/policy report; free with [`mtdgame_string_free`].
///
/// # Safety
/// `solution` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_solution_report_json(
    solution: *const MtdSolution,
    out: *mut *mut c_char,
) -> MtdStatus {
    guard(|| {
        let (sol, out) = match (require(solution), require_out(out)) {
            (Ok(s), Ok(o)) => (s, o),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let report = SolveReport::new(&sol.game, &sol.cfg, &sol.solution);
        give_string(out, report.to_json())
    })
}

/// Run a coverage sweep and return the CSV text; free the string with
/// [`mtdgame_string_free`]. `seed` is only echoed into the report when
/// `has_seed` is true.
///
/// # Safety
/// Handles must be valid; `coverages` must point to `n_coverages` values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_sweep_csv(
    graph: *const MtdGraph,
    catalog: *const MtdCatalog,
    cfg: *const MtdConfig,
    coverages: *const u32,
    n_coverages: usize,
    seed: u64,
    has_seed: bool,
    out: *mut *mut c_char,
) -> MtdStatus {
    guard(|| {
        let (graph, catalog, cfg, out) =
            match (require(graph), require(catalog), require(cfg), require_out(out)) {
                (Ok(g), Ok(c), Ok(f), Ok(o)) => (g, c, f, o),
                (Err(s), _, _, _) | (_, Err(s), _, _) | (_, _, Err(s), _) | (_, _, _, Err(s)) => {
                    return s
                }
            };
        if n_coverages > 0 && coverages.is_null() {
            set_last_error("null coverage array");
            return MtdStatus::NullArgument;
        }
        let coverages = std::slice::from_raw_parts(coverages, n_coverages);
        let game_cfg = GameConfig::from(cfg);
        let result = build_game(&graph.inner, &catalog.inner, &game_cfg).and_then(|game| {
            run_sweep(&game, &catalog.inner, &game_cfg, coverages, has_seed.then_some(seed))
        });
        match result {
            Ok(report) => give_string(out, report.to_csv()),
            Err(e) => fail(&e),
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from an mtdgame function and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mtdgame_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn default_config() -> MtdConfig {
        let mut cfg = MtdConfig {
            gamma: 0.0,
            p_detect: 0.0,
            monitor_cost: 0.0,
            ac_easy: 0.0,
            ac_medium: 0.0,
            ac_high: 0.0,
            epsilon: 0.0,
            max_iters: 0,
        };
        let status = unsafe { mtdgame_config_default(&mut cfg) };
        assert_eq!(status, MtdStatus::Ok);
        cfg
    }

    #[test]
    fn config_default_mirrors_the_library() {
        let cfg = default_config();
        assert_eq!(cfg.gamma, 0.9);
        assert_eq!(cfg.p_detect, 0.95);
        assert_eq!(cfg.monitor_cost, 0.5);
        assert_eq!(cfg.ac_medium, 0.66);
        assert_eq!(cfg.max_iters, 10_000);
    }

    #[test]
    fn full_pipeline_over_the_c_abi() {
        let dir = tempfile::tempdir().unwrap();
        let (graph, catalog) = mtdgame::demo_scenario();
        let graph_path = dir.path().join("graph.json");
        let catalog_path = dir.path().join("catalog.json");
        graph.save(&graph_path).unwrap();
        catalog.save(&catalog_path).unwrap();

        let cfg = default_config();
        unsafe {
            let mut g: *mut MtdGraph = ptr::null_mut();
            let path = CString::new(graph_path.to_str().unwrap()).unwrap();
            assert_eq!(mtdgame_graph_load(path.as_ptr(), &mut g), MtdStatus::Ok);

            let mut c: *mut MtdCatalog = ptr::null_mut();
            let path = CString::new(catalog_path.to_str().unwrap()).unwrap();
            assert_eq!(mtdgame_catalog_load(path.as_ptr(), &mut c), MtdStatus::Ok);

            let mut game: *mut MtdGame = ptr::null_mut();
            assert_eq!(mtdgame_game_build(g, c, &cfg, &mut game), MtdStatus::Ok);

            let mut sol: *mut MtdSolution = ptr::null_mut();
            assert_eq!(mtdgame_solve(game, &cfg, MtdSolveMode::Exact, &mut sol), MtdStatus::Ok);

            let mut converged = false;
            assert_eq!(mtdgame_solution_converged(sol, &mut converged), MtdStatus::Ok);
            assert!(converged);

            let mut value = -1.0;
            assert_eq!(mtdgame_solution_initial_value(sol, &mut value), MtdStatus::Ok);
            let direct = {
                let game_cfg = GameConfig::default();
                let built = build_game(&graph, &catalog, &game_cfg).unwrap();
                solve_exact(&built, &game_cfg).unwrap().values[built.initial]
            };
            assert_eq!(value, direct);

            let mut goal_value = -1.0;
            let goal = CString::new("FTP:root").unwrap();
            assert_eq!(
                mtdgame_solution_state_value(sol, goal.as_ptr(), &mut goal_value),
                MtdStatus::Ok
            );
            assert_eq!(goal_value, 0.0);

            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(mtdgame_solution_report_json(sol, &mut json), MtdStatus::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap();
            assert!(text.contains("\"initial_state\": \"LDAP:user\""));
            mtdgame_string_free(json);

            // Restrict to nothing and resolve: value collapses to zero.
            let keys: Vec<CString> = ["ldap-dirtycow", "web-xss", "ftp-rce"]
                .iter()
                .map(|k| CString::new(*k).unwrap())
                .collect();
            let key_ptrs: Vec<*const c_char> = keys.iter().map(|k| k.as_ptr()).collect();
            let mut patched: *mut MtdGame = ptr::null_mut();
            assert_eq!(
                mtdgame_game_restrict(game, key_ptrs.as_ptr(), key_ptrs.len(), &mut patched),
                MtdStatus::Ok
            );
            let mut sol2: *mut MtdSolution = ptr::null_mut();
            assert_eq!(
                mtdgame_solve(patched, &cfg, MtdSolveMode::Pure, &mut sol2),
                MtdStatus::Ok
            );
            let mut v = -1.0;
            assert_eq!(mtdgame_solution_initial_value(sol2, &mut v), MtdStatus::Ok);
            assert_eq!(v, 0.0);

            mtdgame_solution_free(sol2);
            mtdgame_game_free(patched);
            mtdgame_solution_free(sol);
            mtdgame_game_free(game);
            mtdgame_catalog_free(c);
            mtdgame_graph_free(g);
        }
    }

    #[test]
    fn sweep_csv_over_the_c_abi() {
        let cfg = default_config();
        unsafe {
            let mut g: *mut MtdGraph = ptr::null_mut();
            let mut c: *mut MtdCatalog = ptr::null_mut();
            assert_eq!(mtdgame_generate(7, 3, 12, 3, &mut g, &mut c), MtdStatus::Ok);

            let coverages = [25u32, 50, 100];
            let mut csv: *mut c_char = ptr::null_mut();
            assert_eq!(
                mtdgame_sweep_csv(g, c, &cfg, coverages.as_ptr(), coverages.len(), 7, true, &mut csv),
                MtdStatus::Ok
            );
            let text = CStr::from_ptr(csv).to_str().unwrap().to_string();
            assert!(text.starts_with("coverage_pct,naive_value,strategic_value\n"));
            assert_eq!(text.lines().count(), 4);
            mtdgame_string_free(csv);
            mtdgame_catalog_free(c);
            mtdgame_graph_free(g);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let mut g: *mut MtdGraph = ptr::null_mut();
            let path = CString::new("/no/such/file.json").unwrap();
            assert_eq!(mtdgame_graph_load(path.as_ptr(), &mut g), MtdStatus::Io);
            let msg = mtdgame_last_error();
            assert!(!msg.is_null());
            assert!(CStr::from_ptr(msg).to_str().unwrap().contains("no/such/file"));

            assert_eq!(mtdgame_graph_load(ptr::null(), &mut g), MtdStatus::NullArgument);

            let mut value = 0.0;
            assert_eq!(
                mtdgame_solution_initial_value(ptr::null(), &mut value),
                MtdStatus::NullArgument
            );
        }
    }

    #[test]
    fn gamma_of_one_is_a_config_error() {
        let mut cfg = default_config();
        cfg.gamma = 1.0;
        unsafe {
            let mut g: *mut MtdGraph = ptr::null_mut();
            let mut c: *mut MtdCatalog = ptr::null_mut();
            assert_eq!(mtdgame_generate(1, 2, 4, 2, &mut g, &mut c), MtdStatus::Ok);
            let mut game: *mut MtdGame = ptr::null_mut();
            assert_eq!(mtdgame_game_build(g, c, &cfg, &mut game), MtdStatus::Ok);
            let mut sol: *mut MtdSolution = ptr::null_mut();
            assert_eq!(
                mtdgame_solve(game, &cfg, MtdSolveMode::Exact, &mut sol),
                MtdStatus::BadConfig
            );
            let msg = CStr::from_ptr(mtdgame_last_error()).to_str().unwrap();
            assert!(msg.contains("discount must be < 1"));
            mtdgame_game_free(game);
            mtdgame_catalog_free(c);
            mtdgame_graph_free(g);
        }
    }
}

//! Solve the built-in LDAP/Web/FTP scenario and compare countermeasure
//! strategies at 34% coverage.
//!
//! Run with `cargo run --example quickstart`.

use mtdgame::{
    build_game, evaluate_placement, naive_placement, demo_scenario, solve_exact,
    strategic_placement, GameConfig,
};

fn main() {
    let (graph, catalog) = demo_scenario();
    let cfg = GameConfig::default();
    let game = build_game(&graph, &catalog, &cfg).expect("fixture compiles");

    let solution = solve_exact(&game, &cfg).expect("fixture solves");
    println!("converged in {} iterations (residual {:.2e})", solution.iterations, solution.residual);
    for (state, value) in game.states.iter().zip(&solution.values) {
        println!("  V*({}) = {:.4}", state.id, value);
    }

    let naive = naive_placement(&catalog, 34);
    let strategic = strategic_placement(&game, &cfg, 34).expect("placement solves");
    println!("naive patches     {:?}", naive.patched);
    println!("strategic patches {:?}", strategic.patched);
    println!(
        "attacker value after patching: naive {:.4}, strategic {:.4}",
        evaluate_placement(&game, &cfg, &naive).unwrap(),
        evaluate_placement(&game, &cfg, &strategic).unwrap(),
    );
}

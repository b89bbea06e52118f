//! Lifts a solver result into the mixed-integer model, checks every
//! constraint family, shows what an unpruned route breaks, and writes the
//! model file.
//!
//! ```text
//! cargo run --release --example minlp_check -- [model.lp]
//! ```

use thop::eval::{PackingPlan, Route};
use thop::generate::random_tiny_instance;
use thop::minlp::{export_model, lift_solution, lift_solution_unchecked, model_row_counts, verify};
use thop::{solve, SolverConfig};

fn main() {
    let inst = random_tiny_instance(21);
    let (best, _) = solve(&inst, &SolverConfig::deterministic(50, 1)).expect("solvable");
    print!("{}: solver found profit {}\n{}", inst.name(), best.profit(), best.to_text());
    let vars = lift_solution(&inst, &best.route, &best.plan).expect("feasible");
    print!("{}", verify(&inst, &vars));

    // Passing through every city without picking there breaks (3).
    let all: Vec<usize> = (0..inst.n()).collect();
    let full = Route::new(&inst, all).expect("valid route");
    let vars = lift_solution_unchecked(&inst, &full, &PackingPlan::empty(inst.m())).expect("valid plan");
    println!("route through all cities, nothing picked:");
    for r in verify(&inst, &vars).failed() {
        println!("  {}: {}", r.family, r.violation.as_deref().unwrap_or(""));
    }

    let text = export_model(&inst);
    let (linear, nonlinear) = model_row_counts(&inst);
    println!("model: {linear} linear rows, {nonlinear} nonlinear time rows");
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, text).expect("writable path"),
        None => print!("{text}"),
    }
}

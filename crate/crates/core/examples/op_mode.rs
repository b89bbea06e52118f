//! Orienteering mode: unit speed and an unlimited knapsack. With the time
//! limit set to the greedy tour time, the solver should collect every item.
//!
//! ```text
//! cargo run --release --example op_mode -- [cities]
//! ```

use thop::generate::{greedy_tour_time, op_saturation_instance};
use thop::{solve, SolverConfig};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(40, |s| s.parse().expect("city count"));
    let inst = op_saturation_instance(3, n);
    println!("{}: T = {} (greedy tour time {})", inst.name(), inst.max_time(), greedy_tour_time(&inst));
    let cfg = SolverConfig::for_instance(&inst);
    let (best, _) = solve(&inst, &cfg).expect("solvable");
    println!(
        "collected {} of {} visiting {} of {} cities, length {}",
        best.profit(),
        inst.total_profit(),
        best.route.len(),
        inst.n(),
        best.route.distance(&inst)
    );
    let tighter = inst.with_max_time(inst.max_time() * 0.5).expect("positive time");
    let (half, _) = solve(&tighter, &cfg).expect("solvable");
    println!("with half the time: {} ({:.1}%)", half.profit(), 100.0 * half.profit() / inst.total_profit());
}

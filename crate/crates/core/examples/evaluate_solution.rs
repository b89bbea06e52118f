//! Evaluates a solution file against an instance and prints the journey
//! leg by leg: arrival time and the weight carried when leaving.
//!
//! ```text
//! cargo run --release --example evaluate_solution -- instance.thop solution.txt
//! ```
//!
//! Without arguments a small built-in instance and solution are used.

use thop::instance::Item;
use thop::{Instance, Solution};

fn main() {
    let mut args = std::env::args().skip(1);
    let (inst, sol) = match (args.next(), args.next()) {
        (Some(i), Some(s)) => {
            let inst = Instance::parse(&std::fs::read_to_string(i).expect("instance file")).expect("valid instance");
            let sol = Solution::parse(&inst, &std::fs::read_to_string(s).expect("solution file")).expect("valid solution");
            (inst, sol)
        }
        _ => {
            let inst = Instance::new(
                "demo",
                vec![(0.0, 0.0), (30.0, 40.0), (60.0, 0.0), (90.0, 40.0)],
                vec![
                    Item { id: 0, profit: 50.0, weight: 20.0, city: 1 },
                    Item { id: 1, profit: 30.0, weight: 10.0, city: 2 },
                    Item { id: 2, profit: 25.0, weight: 15.0, city: 2 },
                ],
                40.0,
                300.0,
                0.1,
                1.0,
            )
            .expect("valid instance");
            let sol = Solution::parse(&inst, "[1,2,3,4]\n[1,2]\n").expect("valid solution");
            (inst, sol)
        }
    };
    let ev = sol.evaluate(&inst, false).expect("consistent solution");
    println!("{:>5} {:>10} {:>8}", "city", "arrival", "weight");
    for leg in &ev.legs {
        println!("{:>5} {:>10.3} {:>8}", leg.city + 1, leg.arrival, leg.weight_after);
    }
    println!(
        "profit {} time {:.3}/{} weight {}/{} -> {}",
        ev.profit,
        ev.travel_time,
        inst.max_time(),
        ev.final_weight,
        inst.capacity(),
        if ev.feasible { "feasible" } else { "infeasible" }
    );
}

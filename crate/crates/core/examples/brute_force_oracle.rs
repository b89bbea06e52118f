//! Compares the ant colony against exhaustive enumeration on tiny random
//! instances, and shows the fractional knapsack bound next to both.
//!
//! ```text
//! cargo run --release --example brute_force_oracle -- [instances]
//! ```

use std::time::Duration;

use thop::generate::random_tiny_instance;
use thop::{brute_force_solve, fractional_kp_ub, solve, BruteForceLimits, SolverConfig};

fn main() {
    let count: u64 = std::env::args().nth(1).map_or(10, |s| s.parse().expect("count"));
    let mut matched = 0;
    println!("{:<10} {:>3} {:>3} {:>8} {:>8} {:>8}", "instance", "n", "m", "exact", "aco", "bound");
    for seed in 0..count {
        let inst = random_tiny_instance(seed);
        let exact = brute_force_solve(&inst, BruteForceLimits::default()).expect("tiny instance");
        let cfg = SolverConfig {
            time_budget: Some(Duration::from_millis(300)),
            seed,
            threads: 1,
            ..SolverConfig::for_instance(&inst)
        };
        let (aco, _) = solve(&inst, &cfg).expect("solvable");
        assert!(aco.profit() <= exact.profit());
        matched += (aco.profit() == exact.profit()) as usize;
        println!(
            "{:<10} {:>3} {:>3} {:>8} {:>8} {:>8.1}",
            inst.name(),
            inst.n(),
            inst.m(),
            exact.profit(),
            aco.profit(),
            fractional_kp_ub(&inst).0
        );
    }
    println!("optimum reached on {matched}/{count}");
}

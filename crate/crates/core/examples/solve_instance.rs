//! Solves an instance file, or a generated one when no path is given, and
//! prints the solution with its route statistics.
//!
//! ```text
//! cargo run --release --example solve_instance -- [file.thop|-] [seconds] [seed]
//! ```

use std::time::Duration;

use thop::eval::solution_stats;
use thop::generate::{benchmark_instance, BenchmarkSpec};
use thop::instance::KnapsackType;
use thop::{fractional_kp_ub, solve, Instance, SolverConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let inst = match args.next().filter(|s| !s.is_empty() && s != "-") {
        Some(path) => Instance::parse(&std::fs::read_to_string(&path).expect("readable file")).expect("valid instance"),
        None => benchmark_instance(
            &BenchmarkSpec {
                n: 51,
                items_per_city: 3,
                kind: KnapsackType::Bsc,
                size: 5,
                time_class: 2,
                side: 100.0,
            },
            1,
        ),
    };
    let seconds: f64 = args.next().map_or(3.0, |s| s.parse().expect("seconds"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let cfg = SolverConfig {
        time_budget: Some(Duration::from_secs_f64(seconds)),
        seed,
        ..SolverConfig::for_instance(&inst)
    };
    let (best, log) = solve(&inst, &cfg).expect("solvable instance");
    let stats = solution_stats(&inst, &best.route, &best.plan).expect("feasible");

    println!("{}: n={} m={} W={} T={}", inst.name(), inst.n(), inst.m(), inst.capacity(), inst.max_time());
    println!("profit {} (fractional bound {:.1})", best.profit(), fractional_kp_ub(&inst).0);
    println!("{} iterations, {} improvements", log.iterations, log.records.len() - 1);
    println!(
        "visited {} cities, D={:.2} %T={:.1} %W={:.1}",
        best.route.len(),
        stats.distance_per_city,
        stats.pct_time,
        stats.pct_weight
    );
    print!("{}", best.to_text());
}

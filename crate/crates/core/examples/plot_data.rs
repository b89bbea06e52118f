//! Writes route geometry with the carried weight per leg, ready for a
//! plotting tool (line width proportional to `weight`).
//!
//! ```text
//! cargo run --release --example plot_data -- [out.csv]
//! ```

use thop::generate::{benchmark_instance, BenchmarkSpec};
use thop::harness::export_plot_data;
use thop::instance::KnapsackType;
use thop::{solve, SolverConfig};

fn main() {
    let inst = benchmark_instance(
        &BenchmarkSpec {
            n: 51,
            items_per_city: 5,
            kind: KnapsackType::Usw,
            size: 10,
            time_class: 2,
            side: 100.0,
        },
        3,
    );
    let (best, _) = solve(&inst, &SolverConfig::deterministic(100, 1)).expect("solvable");
    let csv = export_plot_data(&inst, &best).expect("feasible solution");
    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, &csv).expect("writable path");
            println!("{} segments written to {path}", best.route.len() - 1);
        }
        None => print!("{csv}"),
    }
}

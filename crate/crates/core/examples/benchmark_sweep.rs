//! Multi-seed sweep over generated instances followed by aggregation.
//! Rerunning with the same output file skips runs already present.
//!
//! ```text
//! cargo run --release --example benchmark_sweep -- [results.csv] [seeds]
//! ```

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Duration;

use thop::generate::{benchmark_instance, BenchmarkSpec};
use thop::harness::{aggregate, read_results, sweep};
use thop::instance::KnapsackType;
use thop::SolverConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep_results.csv".into()));
    let seeds: u64 = args.next().map_or(3, |s| s.parse().expect("seed count"));

    let instances: Vec<_> = KnapsackType::ALL
        .iter()
        .map(|&kind| {
            let spec = BenchmarkSpec {
                n: 30,
                items_per_city: 3,
                kind,
                size: 5,
                time_class: 2,
                side: 100.0,
            };
            benchmark_instance(&spec, 2)
        })
        .collect();
    let seeds: Vec<u64> = (1..=seeds).collect();
    let summary = sweep(
        &instances,
        &seeds,
        |inst, seed| SolverConfig {
            time_budget: Some(Duration::from_millis(500)),
            seed,
            threads: 1,
            ..SolverConfig::for_instance(inst)
        },
        &out,
        1,
    )
    .expect("sweep");
    println!("{} new runs, {} already present", summary.ran, summary.skipped);

    // Best value per instance over this sweep as the reference table.
    let results = read_results(&out).expect("results");
    let mut reference: HashMap<String, f64> = HashMap::new();
    for r in &results {
        let e = reference.entry(r.instance.clone()).or_insert(0.0);
        *e = e.max(r.profit);
    }
    print!("{}", aggregate(&results, &reference).to_csv().expect("csv"));
}

//! Writes random instances in the benchmark file format.
//!
//! ```text
//! cargo run --example generate_instances -- out_dir [cities] [seed]
//! ```
//!
//! Produces one instance per knapsack type for the given size, a tiny
//! instance for the exact oracle, and an orienteering instance.

use std::path::PathBuf;

use thop::generate::{benchmark_instance, op_saturation_instance, random_tiny_instance, BenchmarkSpec};
use thop::instance::KnapsackType;

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "instances".into()));
    let n: usize = args.next().map_or(51, |s| s.parse().expect("city count"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    std::fs::create_dir_all(&dir)?;

    for kind in KnapsackType::ALL {
        let spec = BenchmarkSpec {
            n,
            items_per_city: 3,
            kind,
            size: 5,
            time_class: 2,
            side: 100.0,
        };
        let inst = benchmark_instance(&spec, seed);
        let path = dir.join(format!("{}.thop", inst.name()));
        std::fs::write(&path, inst.to_text())?;
        println!("{}  n={} m={} W={} T={}", path.display(), inst.n(), inst.m(), inst.capacity(), inst.max_time());
    }

    let tiny = random_tiny_instance(seed);
    let path = dir.join(format!("{}.thop", tiny.name()));
    std::fs::write(&path, tiny.to_text())?;
    println!("{}  n={} m={}", path.display(), tiny.n(), tiny.m());

    let op = op_saturation_instance(seed, n.min(60));
    let path = dir.join(format!("{}.thop", op.name()));
    std::fs::write(&path, op.to_text())?;
    println!("{}  n={} m={} T={}", path.display(), op.n(), op.m(), op.max_time());
    Ok(())
}

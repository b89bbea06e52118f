//! Applies each local search to random routes and reports the distance
//! reduction.
//!
//! ```text
//! cargo run --release --example local_search -- [cities]
//! ```

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thop::generate::{benchmark_instance, BenchmarkSpec};
use thop::instance::KnapsackType;
use thop::{local_search, LocalSearch, Route};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(100, |s| s.parse().expect("city count"));
    let inst = benchmark_instance(
        &BenchmarkSpec {
            n,
            items_per_city: 1,
            kind: KnapsackType::Unc,
            size: 1,
            time_class: 1,
            side: 1000.0,
        },
        9,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [LocalSearch::TwoOpt, LocalSearch::TwoHalfOpt, LocalSearch::ThreeOpt];
    let mut totals = [0u64; 3];
    let mut base = 0u64;
    for _ in 0..10 {
        let mut mids: Vec<usize> = (1..inst.end()).collect();
        mids.shuffle(&mut rng);
        let mut cities = vec![inst.start()];
        cities.extend(mids);
        cities.push(inst.end());
        let route = Route::new(&inst, cities).expect("valid route");
        base += route.distance(&inst);
        for (t, kind) in totals.iter_mut().zip(kinds) {
            *t += local_search(&inst, &route, kind).distance(&inst);
        }
    }
    println!("random routes: mean length {}", base / 10);
    for (t, kind) in totals.iter().zip(kinds) {
        println!("{kind:<7} mean length {:>8} ({:.1}% shorter)", t / 10, 100.0 * (1.0 - *t as f64 / base as f64));
    }
}

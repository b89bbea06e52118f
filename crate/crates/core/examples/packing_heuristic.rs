//! Packs a fixed route with the deterministic heuristic and with its
//! randomised variant, showing how exponent noise changes the plan.
//!
//! ```text
//! cargo run --release --example packing_heuristic
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thop::generate::{benchmark_instance, nearest_neighbor_path, BenchmarkSpec};
use thop::instance::KnapsackType;
use thop::local_search::local_search;
use thop::packing::{pack, pack_deterministic, Exponents, PackingParams};
use thop::{evaluate, prune_route, LocalSearch};

fn main() {
    let inst = benchmark_instance(
        &BenchmarkSpec {
            n: 30,
            items_per_city: 3,
            kind: KnapsackType::Unc,
            size: 3,
            time_class: 2,
            side: 100.0,
        },
        4,
    );
    let route = local_search(&inst, &nearest_neighbor_path(&inst), LocalSearch::TwoOpt);
    println!("route through all {} cities, length {}", route.len(), route.distance(&inst));

    let det = pack_deterministic(&inst, &route, Exponents::default());
    report("deterministic", &inst, &route, &det);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for width in [0.1, 0.5, 1.0] {
        let params = PackingParams {
            ptries: 20,
            perturbation_width: width,
            ..Default::default()
        };
        let plan = pack(&inst, &route, &params, &mut rng);
        report(&format!("best of 20, width {width}"), &inst, &route, &plan);
    }
}

fn report(label: &str, inst: &thop::Instance, route: &thop::Route, plan: &thop::PackingPlan) {
    let pruned = prune_route(inst, route, plan);
    let ev = evaluate(inst, &pruned, plan, true).expect("packing is feasible on the pruned route");
    println!(
        "{label:<24} profit {:>7} items {:>3} weight {:>6}/{} time {:>8.2}/{} cities {}",
        plan.profit(),
        plan.count(),
        plan.weight(),
        inst.capacity(),
        ev.travel_time,
        inst.max_time(),
        pruned.len()
    );
}

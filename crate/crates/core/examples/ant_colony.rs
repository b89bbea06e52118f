//! Drives the ant-colony pieces by hand: route construction from the
//! trails, packing, and MAX-MIN updates with the fitness transform.
//! Prints how the trail range and route lengths evolve.
//!
//! ```text
//! cargo run --release --example ant_colony
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thop::aco::{fitness, mmas_bounds, update_pheromones, AcoParams, PheromoneState, RouteBuilder};
use thop::generate::{benchmark_instance, BenchmarkSpec};
use thop::instance::KnapsackType;
use thop::{fractional_kp_ub, pack, prune_route, PackingParams};

fn main() {
    let inst = benchmark_instance(
        &BenchmarkSpec {
            n: 40,
            items_per_city: 1,
            kind: KnapsackType::Bsc,
            size: 5,
            time_class: 1,
            side: 100.0,
        },
        8,
    );
    let params = AcoParams::default();
    let ub = fractional_kp_ub(&inst);
    let builder = RouteBuilder::new(&inst, &params);
    let mut pher = PheromoneState::for_instance(&inst, ub, params.rho);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut best = 0.0f64;

    println!("UB = {:.1}, tau in [{:.3e}, {:.3e}]", ub.0, pher.tau_min(), pher.tau_max());
    for iteration in 1..=30 {
        let choice = builder.choice_info(&pher);
        let mut iter_best = None;
        let mut cities = 0;
        for _ in 0..params.ants {
            let route = builder.construct(&choice, &mut rng);
            cities += route.len();
            let plan = pack(&inst, &route, &PackingParams::default(), &mut rng);
            let pruned = prune_route(&inst, &route, &plan);
            if iter_best.as_ref().map_or(true, |(_, p)| plan.profit() > *p) {
                iter_best = Some((pruned, plan.profit()));
            }
        }
        let (route, profit) = iter_best.expect("at least one ant");
        if profit > best {
            best = profit;
            let (lo, hi) = mmas_bounds(ub, best, params.rho, inst.n());
            pher.set_bounds(lo, hi);
        }
        update_pheromones(&mut pher, &route, fitness(ub, profit).expect("within bound"), params.rho);
        if iteration % 5 == 0 {
            let (lo, hi) = pher.extent();
            println!(
                "iter {iteration:>2}: best {best:>7}, mean ant route {:>5.1} cities, trails [{lo:.3e}, {hi:.3e}]",
                cities as f64 / params.ants as f64
            );
        }
    }
}

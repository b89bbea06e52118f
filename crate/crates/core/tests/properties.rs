use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thop::aco::{mmas_bounds, update_pheromones, PheromoneState};
use thop::bounds::{brute_force_solve, fractional_kp_ub, BruteForceLimits};
use thop::eval::{evaluate, PackingPlan, Route, Solution, EPS};
use thop::instance::{Instance, Item};
use thop::local_search::local_search;
use thop::minlp::{lift_solution, lift_solution_unchecked, verify};
use thop::packing::{pack, PackingParams};
use thop::solver::prune_route;
use thop::{LocalSearch, UpperBound};

#[derive(Debug, Clone)]
struct Raw {
    coords: Vec<(i32, i32)>,
    items: Vec<(u32, u32, usize)>,
    capacity_frac: f64,
    time_factor: f64,
    vmin: f64,
}

fn raw_instance(max_n: usize, max_m: usize) -> impl Strategy<Value = Raw> {
    (3..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((0..100i32, 0..100i32), n),
            prop::collection::vec((1..200u32, 1..100u32, 1..n - 1), 1..=max_m),
            0.2..1.2f64,
            1.0..4.0f64,
            0.05..0.9f64,
        )
            .prop_map(|(coords, items, capacity_frac, time_factor, vmin)| Raw {
                coords,
                items,
                capacity_frac,
                time_factor,
                vmin,
            })
    })
}

fn build(raw: &Raw) -> Instance {
    let coords: Vec<(f64, f64)> = raw.coords.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let items: Vec<Item> = raw
        .items
        .iter()
        .enumerate()
        .map(|(id, &(p, w, city))| Item {
            id,
            profit: p as f64,
            weight: w as f64,
            city,
        })
        .collect();
    let total: f64 = items.iter().map(|it| it.weight).sum();
    let capacity = (total * raw.capacity_frac).round().max(1.0);
    let n = coords.len();
    let tmp = Instance::new("p", coords.clone(), items.clone(), capacity, 1.0, raw.vmin, 1.0).unwrap();
    let direct = tmp.d(0, n - 1) as f64;
    let t = (direct.max(10.0) * raw.time_factor).round();
    Instance::new("p", coords, items, capacity, t, raw.vmin, 1.0).unwrap()
}

/// A random route through a random subset of interior cities.
fn random_route(inst: &Instance, seed: u64) -> Route {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mids: Vec<usize> = (1..inst.end()).filter(|_| rng.gen_bool(0.7)).collect();
    mids.shuffle(&mut rng);
    let mut cities = vec![inst.start()];
    cities.extend(mids);
    cities.push(inst.end());
    Route::new(inst, cities).unwrap()
}

fn random_plan(inst: &Instance, route: &Route, seed: u64) -> PackingPlan {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
    let mut on = vec![false; inst.n()];
    for &c in route.cities() {
        on[c] = true;
    }
    let ids: Vec<usize> = (0..inst.m())
        .filter(|&k| on[inst.item(k).city] && rng.gen_bool(0.5))
        .collect();
    PackingPlan::from_items(inst, &ids).unwrap()
}

fn items_on(inst: &Instance, route: &Route) -> Vec<usize> {
    let mut on = vec![false; inst.n()];
    for &c in route.cities() {
        on[c] = true;
    }
    (0..inst.m()).filter(|&k| on[inst.item(k).city]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adding_an_item_never_decreases_time(raw in raw_instance(10, 12), seed in any::<u64>()) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let plan = random_plan(&inst, &route, seed);
        let base = evaluate(&inst, &route, &plan, false).unwrap();
        for k in items_on(&inst, &route) {
            if plan.is_picked(k) {
                continue;
            }
            let mut more = plan.clone();
            more.pick(&inst, k);
            let ev = evaluate(&inst, &route, &more, false).unwrap();
            prop_assert!(ev.travel_time >= base.travel_time);
            prop_assert!(ev.final_weight > base.final_weight);
            prop_assert!(ev.profit >= base.profit);
        }
    }

    #[test]
    fn op_reduction_makes_time_independent_of_plan(raw in raw_instance(10, 12), seed in any::<u64>()) {
        let op = build(&raw).to_op_instance();
        let route = random_route(&op, seed);
        let empty = evaluate(&op, &route, &PackingPlan::empty(op.m()), false).unwrap();
        let all = PackingPlan::from_items(&op, &items_on(&op, &route)).unwrap();
        let full = evaluate(&op, &route, &all, false).unwrap();
        prop_assert_eq!(empty.travel_time, full.travel_time);
        prop_assert_eq!(empty.travel_time, route.distance(&op) as f64);
        prop_assert!(full.final_weight <= op.capacity());
        prop_assert_eq!(op.to_op_instance(), op);
    }

    #[test]
    fn pruning_never_increases_time(raw in raw_instance(12, 12), seed in any::<u64>()) {
        let inst = build(&raw);
        prop_assume!(inst.triangle_ok());
        let route = random_route(&inst, seed);
        let plan = random_plan(&inst, &route, seed);
        let pruned = prune_route(&inst, &route, &plan);
        let a = evaluate(&inst, &route, &plan, false).unwrap();
        let b = evaluate(&inst, &pruned, &plan, false).unwrap();
        prop_assert!(b.travel_time <= a.travel_time + 1e-9);
        prop_assert_eq!(a.profit, b.profit);
        prop_assert!(pruned.distance(&inst) <= route.distance(&inst));
        prop_assert_eq!(prune_route(&inst, &pruned, &plan), pruned.clone());
    }

    #[test]
    fn pheromones_stay_within_bounds(
        n in 3usize..15,
        rho in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let coords: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, (i * i % 7) as f64)).collect();
        let items = vec![Item { id: 0, profit: 10.0, weight: 1.0, city: 1 }];
        let inst = Instance::new("ph", coords, items, 1.0, 1e6, 0.1, 1.0).unwrap();
        let ub = UpperBound(1000.0);
        let mut pher = PheromoneState::for_instance(&inst, ub, rho);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0.0f64;
        for _ in 0..1000 {
            let route = random_route(&inst, rng.gen());
            let profit = rng.gen_range(0.0..=1000.0f64);
            if profit > best {
                best = profit;
                let (lo, hi) = mmas_bounds(ub, best, rho, n);
                pher.set_bounds(lo, hi);
            }
            update_pheromones(&mut pher, &route, 1.0 / (ub.0 + 1.0 - profit), rho);
            let (lo, hi) = pher.extent();
            prop_assert!(lo >= pher.tau_min() && hi <= pher.tau_max());
        }
        prop_assert!(pher.is_symmetric());
    }

    #[test]
    fn packing_is_feasible_on_the_recorded_route(
        raw in raw_instance(12, 15),
        seed in any::<u64>(),
        ptries in 1u32..4,
        width in 0.0..0.5f64,
    ) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let params = PackingParams { ptries, perturbation_width: width, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = pack(&inst, &route, &params, &mut rng);
        let pruned = prune_route(&inst, &route, &plan);
        let ev = evaluate(&inst, &pruned, &plan, true);
        prop_assert!(ev.is_ok(), "{:?}", ev);
        prop_assert!(plan.weight() <= inst.capacity() + EPS);
        let vars = lift_solution(&inst, &pruned, &plan).unwrap();
        let report = verify(&inst, &vars);
        prop_assert!(report.all_passed(), "{}", report);
    }

    #[test]
    fn local_search_never_lengthens_routes(raw in raw_instance(14, 3), seed in any::<u64>(), kind in 0u8..4) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let kind = match kind {
            0 => LocalSearch::None,
            1 => LocalSearch::TwoOpt,
            2 => LocalSearch::TwoHalfOpt,
            _ => LocalSearch::ThreeOpt,
        };
        let out = local_search(&inst, &route, kind);
        prop_assert!(out.distance(&inst) <= route.distance(&inst));
        prop_assert_eq!(out.cities()[0], inst.start());
        prop_assert_eq!(*out.cities().last().unwrap(), inst.end());
        let mut a = out.cities().to_vec();
        let mut b = route.cities().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert!(Route::new(&inst, out.into_inner()).is_ok());
    }

    #[test]
    fn instance_text_round_trip(raw in raw_instance(12, 12)) {
        let inst = build(&raw);
        let back = Instance::parse(&inst.to_text()).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_text(), inst.to_text());
    }

    #[test]
    fn solution_text_round_trip(raw in raw_instance(10, 10), seed in any::<u64>()) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let sol = Solution::new(route.clone(), random_plan(&inst, &route, seed));
        let back = Solution::parse(&inst, &sol.to_text()).unwrap();
        prop_assert_eq!(back, sol);
    }

    #[test]
    fn feasible_profit_is_bounded_by_the_relaxation(raw in raw_instance(10, 12), seed in any::<u64>()) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let plan = random_plan(&inst, &route, seed);
        let ev = evaluate(&inst, &route, &plan, false).unwrap();
        if ev.feasible {
            prop_assert!(ev.profit <= fractional_kp_ub(&inst).0 + 1e-9);
        }
    }

    #[test]
    fn verifier_agrees_with_evaluator_on_pruned_routes(raw in raw_instance(9, 10), seed in any::<u64>()) {
        let inst = build(&raw);
        let route = random_route(&inst, seed);
        let plan = random_plan(&inst, &route, seed);
        let pruned = prune_route(&inst, &route, &plan);
        let strict_ok = evaluate(&inst, &pruned, &plan, true).is_ok();
        let vars = lift_solution_unchecked(&inst, &pruned, &plan).unwrap();
        prop_assert_eq!(verify(&inst, &vars).all_passed(), strict_ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn brute_force_optimum_grows_with_time_limit(raw in raw_instance(6, 6), extra in 1.0..200.0f64) {
        let inst = build(&raw);
        let looser = inst.with_max_time(inst.max_time() + extra).unwrap();
        let limits = BruteForceLimits::default();
        if let Ok(tight) = brute_force_solve(&inst, limits) {
            let loose = brute_force_solve(&looser, limits).unwrap();
            prop_assert!(loose.profit() >= tight.profit());
            prop_assert!(tight.profit() <= fractional_kp_ub(&inst).0 + 1e-9);
            prop_assert!(evaluate(&inst, &tight.route, &tight.plan, true).is_ok());
        }
    }
}

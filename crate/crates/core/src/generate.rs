//! Random instance generators for tests, examples and desk-scale benchmarks.
//!
//! Benchmark-shaped instances follow the TTP item scheme: `unc` draws
//! profits and weights independently from `[1, 1000]`, `usw` draws weights
//! from `[1000, 1010]`, and `bsc` sets `p = w + 100`. The knapsack holds
//! `size / 11` of the total item weight, and the time limit is a fraction
//! (50%, 75% or 100% for classes 01, 02, 03) of a nearest-neighbour
//! reference path time.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::{evaluate, PackingPlan, Route};
use crate::instance::{Instance, InstanceId, Item, KnapsackType};

/// Maximum speed of generated instances.
pub const MAX_SPEED: f64 = 1.0;
/// Minimum speed of generated instances.
pub const MIN_SPEED: f64 = 0.1;

/// Nearest-neighbour path from the start city through every other city,
/// finishing at the destination.
pub fn nearest_neighbor_path(inst: &Instance) -> Route {
    let (start, end) = (inst.start(), inst.end());
    let mut visited = vec![false; inst.n()];
    visited[start] = true;
    visited[end] = true;
    let mut path = vec![start];
    let mut cur = start;
    while let Some(next) = (0..inst.n())
        .filter(|&j| !visited[j])
        .min_by_key(|&j| (inst.d(cur, j), j))
    {
        visited[next] = true;
        path.push(next);
        cur = next;
    }
    if end != start {
        path.push(end);
    }
    Route::new(inst, path).expect("nearest-neighbour path is a valid route")
}

/// Travel time of the nearest-neighbour path with every item on it picked.
/// For orienteering instances this is a time limit under which every city
/// can be visited.
pub fn greedy_tour_time(inst: &Instance) -> f64 {
    let route = nearest_neighbor_path(inst);
    let all: Vec<usize> = (0..inst.m()).collect();
    let plan = PackingPlan::from_items(inst, &all).expect("item ids are in range");
    evaluate(inst, &route, &plan, false)
        .map(|e| e.travel_time)
        .unwrap_or(f64::INFINITY)
}

/// Reference time used for the time classes: the empty-knapsack
/// nearest-neighbour path time.
pub fn reference_time(inst: &Instance) -> f64 {
    nearest_neighbor_path(inst).distance(inst) as f64 / inst.max_speed()
}

fn random_coords<R: Rng>(rng: &mut R, n: usize, side: f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(0..=side as i64) as f64, rng.gen_range(0..=side as i64) as f64))
        .collect()
}

fn draw_item<R: Rng>(rng: &mut R, kind: KnapsackType) -> (f64, f64) {
    match kind {
        KnapsackType::Unc => (rng.gen_range(1..=1000) as f64, rng.gen_range(1..=1000) as f64),
        KnapsackType::Usw => (rng.gen_range(1..=1000) as f64, rng.gen_range(1000..=1010) as f64),
        KnapsackType::Bsc => {
            let w = rng.gen_range(1..=1000) as f64;
            (w + 100.0, w)
        }
    }
}

/// Small instance with `n` cities and `m` items on random interior cities.
/// Capacity and time limit are drawn so that the constraints bind without
/// making every route infeasible.
pub fn tiny_instance(seed: u64, n: usize, m: usize) -> Instance {
    assert!(n >= 3, "need an interior city to hold items");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = random_coords(&mut rng, n, 50.0);
    let items: Vec<Item> = (0..m)
        .map(|id| Item {
            id,
            profit: rng.gen_range(1..=100) as f64,
            weight: rng.gen_range(1..=50) as f64,
            city: rng.gen_range(1..n - 1),
        })
        .collect();
    let total: f64 = items.iter().map(|it| it.weight).sum();
    let capacity = (total * rng.gen_range(0.3..0.9)).round().max(1.0);
    let base = Instance::new(format!("tiny_{seed}"), coords, items, capacity, 1.0, MIN_SPEED, MAX_SPEED)
        .expect("generated parts are valid");
    let direct = base.d(base.start(), base.end()) as f64 / MAX_SPEED;
    let full = reference_time(&base);
    let lo = direct.max(1.0) * 1.05;
    let hi = (full * 1.6).max(lo * 1.5);
    let t = rng.gen_range(lo..hi).round().max(lo.ceil());
    base.with_max_time(t).expect("positive time")
}

/// Tiny instance with `n ∈ [4, 7]` and `m ∈ [2, 6]` drawn from the seed.
pub fn random_tiny_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469_6e79);
    let n = rng.gen_range(4..=7);
    let m = rng.gen_range(2..=6);
    tiny_instance(seed, n, m)
}

/// Shape of a benchmark-like instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub n: usize,
    pub items_per_city: u32,
    pub kind: KnapsackType,
    /// Knapsack size class, 1 to 10.
    pub size: u32,
    /// Time class 1, 2 or 3.
    pub time_class: u32,
    /// Coordinates are drawn from `[0, side]²`.
    pub side: f64,
}

impl BenchmarkSpec {
    /// Identifier in the benchmark naming scheme, with a `rndN` base.
    pub fn id(&self) -> InstanceId {
        InstanceId {
            tsp_base: format!("rnd{}", self.n),
            items_per_city: self.items_per_city,
            knapsack_type: self.kind,
            knapsack_size: format!("{:02}", self.size),
            time_class: format!("{:02}", self.time_class),
        }
    }
}

/// Benchmark-shaped random instance.
pub fn benchmark_instance(spec: &BenchmarkSpec, seed: u64) -> Instance {
    assert!(spec.n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = random_coords(&mut rng, spec.n, spec.side);
    let mut items = Vec::new();
    for _ in 0..spec.items_per_city {
        for city in 1..spec.n - 1 {
            let (profit, weight) = draw_item(&mut rng, spec.kind);
            items.push(Item {
                id: items.len(),
                profit,
                weight,
                city,
            });
        }
    }
    let total: f64 = items.iter().map(|it| it.weight).sum();
    let capacity = (total * spec.size as f64 / 11.0).floor().max(1.0);
    let base = Instance::new(spec.id().to_string(), coords, items, capacity, 1.0, MIN_SPEED, MAX_SPEED)
        .expect("generated parts are valid");
    let fraction = match spec.time_class {
        1 => 0.5,
        2 => 0.75,
        _ => 1.0,
    };
    let t = (reference_time(&base) * fraction).ceil().max(1.0);
    base.with_max_time(t).expect("positive time")
}

/// Orienteering instance with one item per interior city and a time limit
/// equal to the greedy tour time, so that visiting every city is possible.
pub fn op_saturation_instance(seed: u64, n: usize) -> Instance {
    let spec = BenchmarkSpec {
        n,
        items_per_city: 1,
        kind: KnapsackType::Unc,
        size: 1,
        time_class: 3,
        side: 100.0,
    };
    let op = benchmark_instance(&spec, seed).to_op_instance();
    let t = greedy_tour_time(&op);
    op.with_max_time(t)
        .expect("positive time")
        .with_name(format!("rnd{n}_01_unc_inf_{seed}"))
}

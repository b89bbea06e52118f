//! Randomized packing heuristic for a fixed route.
//!
//! Each attempt scores the items available on the route by
//! `p^(A+δA) / (w^(B+δB) · d^(C+δC))`, where `d` is the distance left along
//! the route after the item's city, and inserts them greedily in descending
//! score order. The δ noise is drawn uniformly from `[-width, width]` once
//! per attempt; the best of `ptries` attempts is returned.
//!
//! Travel time is measured on the route restricted to the cities where
//! something is picked (plus both endpoints), which is the journey the
//! solver records. When the instance violates the triangle inequality the
//! full route is timed instead.

use std::cmp::Ordering;

use rand::Rng;

use crate::eval::{leg_time, within_capacity, within_time, PackingPlan, Route};
use crate::instance::Instance;

/// Scoring exponents for profit, weight and remaining distance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Exponents {
    pub profit: f64,
    pub weight: f64,
    pub distance: f64,
}

impl Default for Exponents {
    fn default() -> Self {
        Exponents {
            profit: 1.0,
            weight: 1.0,
            distance: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PackingParams {
    /// Number of randomized attempts, at least 1.
    pub ptries: u32,
    pub exponents: Exponents,
    /// Half-width of the uniform exponent noise.
    pub perturbation_width: f64,
}

impl Default for PackingParams {
    fn default() -> Self {
        PackingParams {
            ptries: 3,
            exponents: Exponents::default(),
            perturbation_width: 0.2,
        }
    }
}

/// Best plan over `params.ptries` randomized attempts.
pub fn pack<R: Rng + ?Sized>(
    inst: &Instance,
    route: &Route,
    params: &PackingParams,
    rng: &mut R,
) -> PackingPlan {
    let ctx = RouteContext::new(inst, route);
    let mut best: Option<PackingPlan> = None;
    for _ in 0..params.ptries.max(1) {
        let exps = if params.perturbation_width > 0.0 {
            let w = params.perturbation_width;
            Exponents {
                profit: params.exponents.profit + rng.gen_range(-w..=w),
                weight: params.exponents.weight + rng.gen_range(-w..=w),
                distance: params.exponents.distance + rng.gen_range(-w..=w),
            }
        } else {
            params.exponents
        };
        let plan = ctx.attempt(exps);
        if best.as_ref().map_or(true, |b| plan.profit() > b.profit()) {
            best = Some(plan);
        }
    }
    best.expect("at least one attempt")
}

/// Single unperturbed attempt.
pub fn pack_deterministic(inst: &Instance, route: &Route, exponents: Exponents) -> PackingPlan {
    RouteContext::new(inst, route).attempt(exponents)
}

struct Candidate {
    item: usize,
    pos: usize,
    remaining: f64,
}

struct RouteContext<'a> {
    inst: &'a Instance,
    cities: &'a [usize],
    candidates: Vec<Candidate>,
    prune: bool,
}

impl<'a> RouteContext<'a> {
    fn new(inst: &'a Instance, route: &'a Route) -> Self {
        let cities = route.cities();
        let len = cities.len();
        let mut remaining = vec![0u64; len];
        for i in (0..len.saturating_sub(1)).rev() {
            remaining[i] = remaining[i + 1] + inst.d(cities[i], cities[i + 1]);
        }
        let min_leg = cities
            .windows(2)
            .map(|w| inst.d(w[0], w[1]))
            .filter(|&d| d > 0)
            .min()
            .unwrap_or(1);
        let candidates = cities
            .iter()
            .enumerate()
            .flat_map(|(pos, &c)| {
                let rem = if remaining[pos] > 0 { remaining[pos] } else { min_leg };
                inst.items_at(c).iter().map(move |&item| Candidate {
                    item,
                    pos,
                    remaining: rem as f64,
                })
            })
            .collect();
        RouteContext {
            inst,
            cities,
            candidates,
            prune: inst.triangle_ok(),
        }
    }

    fn attempt(&self, exps: Exponents) -> PackingPlan {
        let inst = self.inst;
        let mut plan = PackingPlan::empty(inst.m());
        let len = self.cities.len();
        let mut load = vec![0.0; len];
        let mut active = vec![false; len];
        active[0] = true;
        active[len - 1] = true;
        if !within_time(inst, self.time(&load, &active, None)) {
            return plan;
        }

        let mut order: Vec<(f64, usize)> = self
            .candidates
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let it = inst.item(c.item);
                let s = it.profit.powf(exps.profit)
                    / (it.weight.powf(exps.weight) * c.remaining.powf(exps.distance));
                (if s.is_nan() { f64::NEG_INFINITY } else { s }, ci)
            })
            .collect();
        order.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| self.candidates[a.1].item.cmp(&self.candidates[b.1].item))
        });

        for (_, ci) in order {
            let cand = &self.candidates[ci];
            let item = inst.item(cand.item);
            if !within_capacity(inst, plan.weight() + item.weight) {
                continue;
            }
            let new_load = load_with(inst, plan.picks(), self.cities[cand.pos], cand.item);
            let t = self.time(&load, &active, Some((cand.pos, new_load)));
            if within_time(inst, t) {
                plan.pick(inst, cand.item);
                load[cand.pos] = new_load;
                active[cand.pos] = true;
            }
        }
        plan
    }

    /// Journey time with `load[pos]` optionally replaced by a tentative value.
    /// Stops early once the limit is exceeded.
    fn time(&self, load: &[f64], active: &[bool], tentative: Option<(usize, f64)>) -> f64 {
        let inst = self.inst;
        let mut t = 0.0;
        let mut q = load[0];
        let mut prev = self.cities[0];
        for i in 1..self.cities.len() {
            let (is_tentative, l) = match tentative {
                Some((p, l)) if p == i => (true, l),
                _ => (false, load[i]),
            };
            if self.prune && !active[i] && !is_tentative {
                continue;
            }
            let c = self.cities[i];
            t += leg_time(inst, inst.d(prev, c), q);
            if !within_time(inst, t) {
                return t;
            }
            q += l;
            prev = c;
        }
        t
    }
}

/// Load at `city` if `extra` were picked too, summed in item id order like
/// the evaluator does.
fn load_with(inst: &Instance, picks: &[bool], city: usize, extra: usize) -> f64 {
    inst.items_at(city)
        .iter()
        .filter(|&&k| picks[k] || k == extra)
        .fold(0.0, |acc, &k| acc + inst.item(k).weight)
}

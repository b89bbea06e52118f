//! Fractional-knapsack upper bound and an exhaustive solver for tiny instances.

use std::cmp::Ordering;

use thiserror::Error;

use crate::eval::{evaluate, PackingPlan, Route, Solution};
use crate::instance::Instance;

/// Upper bound on the optimal profit of an instance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UpperBound(pub f64);

impl UpperBound {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Optimal value of the fractional knapsack over all items, ignoring routing.
pub fn fractional_kp_ub(inst: &Instance) -> UpperBound {
    let mut order: Vec<usize> = (0..inst.m()).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (inst.item(a), inst.item(b));
        (ib.profit * ia.weight)
            .partial_cmp(&(ia.profit * ib.weight))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut room = inst.capacity();
    let mut value = 0.0;
    for k in order {
        let item = inst.item(k);
        if item.weight <= room {
            room -= item.weight;
            value += item.profit;
        } else {
            value += item.profit * room / item.weight;
            break;
        }
    }
    UpperBound(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    pub max_cities: usize,
    pub max_items: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits {
            max_cities: 8,
            max_items: 8,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BruteForceError {
    #[error("instance too large for exhaustive search: n={n}, m={m} (limits n<={max_n}, m<={max_m})")]
    TooLarge {
        n: usize,
        m: usize,
        max_n: usize,
        max_m: usize,
    },
    #[error("no feasible route: the direct journey already exceeds the time limit")]
    NoFeasibleRoute,
}

/// Exhaustively finds an optimal solution.
///
/// Every ordered subset of intermediate cities is crossed with every subset
/// of the items available on it. Ties go to the shorter travel time, then to
/// the lexicographically smaller route.
pub fn brute_force_solve(
    inst: &Instance,
    limits: BruteForceLimits,
) -> Result<Solution, BruteForceError> {
    if inst.n() > limits.max_cities || inst.m() > limits.max_items {
        return Err(BruteForceError::TooLarge {
            n: inst.n(),
            m: inst.m(),
            max_n: limits.max_cities,
            max_m: limits.max_items,
        });
    }
    let middle: Vec<usize> = (1..inst.end()).collect();
    let mut masks: Vec<u32> = (0..(1u32 << middle.len())).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));

    let mut best: Option<(Solution, f64)> = None;
    for mask in masks {
        let mut perm: Vec<usize> = middle
            .iter()
            .enumerate()
            .filter_map(|(b, &c)| (mask >> b & 1 == 1).then_some(c))
            .collect();
        loop {
            let mut cities = Vec::with_capacity(perm.len() + 2);
            cities.push(inst.start());
            cities.extend_from_slice(&perm);
            cities.push(inst.end());
            let route = Route::from_raw(cities);
            visit_plans(inst, &route, &mut best);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    best.map(|(s, _)| s).ok_or(BruteForceError::NoFeasibleRoute)
}

fn visit_plans(inst: &Instance, route: &Route, best: &mut Option<(Solution, f64)>) {
    let available: Vec<usize> = route
        .cities()
        .iter()
        .flat_map(|&c| inst.items_at(c).iter().copied())
        .collect();
    let empty = PackingPlan::empty(inst.m());
    // Items only slow the thief down, so an infeasible bare route stays infeasible.
    match evaluate(inst, route, &empty, false) {
        Ok(ev) if ev.feasible => {}
        _ => return,
    }
    for sub in 0..(1u64 << available.len()) {
        let picks: Vec<usize> = available
            .iter()
            .enumerate()
            .filter_map(|(b, &k)| (sub >> b & 1 == 1).then_some(k))
            .collect();
        let plan = PackingPlan::from_items(inst, &picks).expect("item ids are valid");
        let Ok(ev) = evaluate(inst, route, &plan, false) else {
            continue;
        };
        if !ev.feasible {
            continue;
        }
        let better = match best {
            None => true,
            Some((cur, cur_time)) => {
                let (p, q) = (ev.profit, cur.plan.profit());
                if p > q + 1e-9 {
                    true
                } else if p < q - 1e-9 {
                    false
                } else {
                    match ev.travel_time.partial_cmp(cur_time) {
                        Some(Ordering::Less) => true,
                        Some(Ordering::Greater) => false,
                        _ => route.cities() < cur.route.cities(),
                    }
                }
            }
        };
        if better {
            *best = Some((Solution::new(route.clone(), plan), ev.travel_time));
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

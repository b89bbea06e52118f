//! MAX-MIN ant system building variable-length routes from the start city to
//! the destination.
//!
//! Pheromone bounds follow the usual MAX-MIN recipe: `tau_max = 1 / (rho ·
//! (UB + 1 - p_best))` and `tau_min = tau_max / (2n)`, recomputed whenever the
//! best profit improves. Trails start at `tau_max`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::UpperBound;
use crate::eval::Route;
use crate::instance::Instance;

/// Evaporation rates below this are treated as this value when computing
/// pheromone bounds, so `tau_max` stays finite for `rho = 0`.
const MIN_BOUND_RHO: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum LocalSearch {
    None,
    #[default]
    TwoOpt,
    TwoHalfOpt,
    ThreeOpt,
}

impl fmt::Display for LocalSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalSearch::None => "none",
            LocalSearch::TwoOpt => "2opt",
            LocalSearch::TwoHalfOpt => "2.5opt",
            LocalSearch::ThreeOpt => "3opt",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown local search `{0}` (expected none, 2opt, 2.5opt or 3opt)")]
pub struct UnknownLocalSearch(pub String);

impl FromStr for LocalSearch {
    type Err = UnknownLocalSearch;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "0" => Ok(LocalSearch::None),
            "2opt" | "2-opt" | "1" => Ok(LocalSearch::TwoOpt),
            "2.5opt" | "2.5-opt" | "2" => Ok(LocalSearch::TwoHalfOpt),
            "3opt" | "3-opt" | "3" => Ok(LocalSearch::ThreeOpt),
            _ => Err(UnknownLocalSearch(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    pub ants: usize,
    /// Pheromone influence exponent.
    pub alpha: f64,
    /// Distance influence exponent.
    pub beta: f64,
    /// Evaporation rate in `[0, 1]`.
    pub rho: f64,
    pub local_search: LocalSearch,
    /// Nearest-neighbour candidate list length.
    pub candidates: usize,
    /// Every this many iterations the global best deposits instead of the
    /// iteration best.
    pub global_best_period: u64,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams {
            ants: 50,
            alpha: 1.0,
            beta: 2.0,
            rho: 0.2,
            local_search: LocalSearch::TwoOpt,
            candidates: 20,
            global_best_period: 25,
        }
    }
}

impl AcoParams {
    /// Values outside the standard tuning ranges.
    pub fn out_of_range(&self) -> Vec<String> {
        let mut out = Vec::new();
        if ![10, 20, 50, 100, 200, 500, 1000].contains(&self.ants) {
            out.push(format!("ants={} not in {{10,20,50,100,200,500,1000}}", self.ants));
        }
        if !(0.0..=10.0).contains(&self.alpha) {
            out.push(format!("alpha={} outside [0, 10]", self.alpha));
        }
        if !(0.0..=10.0).contains(&self.beta) {
            out.push(format!("beta={} outside [0, 10]", self.beta));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            out.push(format!("rho={} outside [0, 1]", self.rho));
        }
        out
    }
}

/// Symmetric pheromone matrix clamped into `[tau_min, tau_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneState {
    n: usize,
    tau: Vec<f64>,
    tau_min: f64,
    tau_max: f64,
}

/// MAX-MIN trail limits for the given best profit.
pub fn mmas_bounds(ub: UpperBound, best_profit: f64, rho: f64, n: usize) -> (f64, f64) {
    let tau_max = 1.0 / (rho.max(MIN_BOUND_RHO) * (ub.0 + 1.0 - best_profit));
    (tau_max / (2.0 * n as f64), tau_max)
}

impl PheromoneState {
    /// All trails start at `tau_max`.
    pub fn new(n: usize, tau_min: f64, tau_max: f64) -> Self {
        PheromoneState {
            n,
            tau: vec![tau_max; n * n],
            tau_min,
            tau_max,
        }
    }

    pub fn for_instance(inst: &Instance, ub: UpperBound, rho: f64) -> Self {
        let (lo, hi) = mmas_bounds(ub, 0.0, rho, inst.n());
        PheromoneState::new(inst.n(), lo, hi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Smallest and largest trail values.
    pub fn extent(&self) -> (f64, f64) {
        self.tau
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Installs new limits and clamps every trail into them.
    pub fn set_bounds(&mut self, tau_min: f64, tau_max: f64) {
        self.tau_min = tau_min;
        self.tau_max = tau_max;
        self.clamp();
    }

    fn clamp(&mut self) {
        let (lo, hi) = (self.tau_min, self.tau_max);
        for t in &mut self.tau {
            *t = t.clamp(lo, hi);
        }
    }
}

/// Route fitness, `1 / (UB + 1 - p(z))`.
pub fn fitness(ub: UpperBound, profit: f64) -> Result<f64, BoundViolation> {
    if profit > ub.0 + 1e-9 * ub.0.abs().max(1.0) {
        return Err(BoundViolation { profit, ub: ub.0 });
    }
    Ok(1.0 / (ub.0 + 1.0 - profit.min(ub.0)))
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("profit {profit} exceeds the upper bound {ub}")]
pub struct BoundViolation {
    pub profit: f64,
    pub ub: f64,
}

/// Evaporates every trail by `rho`, reinforces the arcs of `route` by
/// `deposit`, then clamps.
pub fn update_pheromones(pher: &mut PheromoneState, route: &Route, deposit: f64, rho: f64) {
    let keep = 1.0 - rho;
    for t in &mut pher.tau {
        *t *= keep;
    }
    let n = pher.n;
    for w in route.cities().windows(2) {
        let (i, j) = (w[0], w[1]);
        pher.tau[i * n + j] += deposit;
        if i != j {
            pher.tau[j * n + i] += deposit;
        }
    }
    pher.clamp();
}

/// Per-city nearest neighbours, excluding the city itself and the start city.
#[derive(Debug, Clone)]
pub struct NeighborLists {
    lists: Vec<Vec<usize>>,
}

impl NeighborLists {
    pub fn new(inst: &Instance, k: usize) -> Self {
        let n = inst.n();
        let lists = (0..n)
            .map(|i| {
                let mut others: Vec<usize> =
                    (0..n).filter(|&j| j != i && j != inst.start()).collect();
                others.sort_by_key(|&j| (inst.d(i, j), j));
                others.truncate(k);
                others
            })
            .collect();
        NeighborLists { lists }
    }

    pub fn of(&self, city: usize) -> &[usize] {
        &self.lists[city]
    }
}

/// Precomputed `tau^alpha · eta^beta` for one iteration.
pub struct ChoiceInfo {
    n: usize,
    total: Vec<f64>,
    /// `alpha·ln(tau) + beta·ln(eta)`, used when the products underflow.
    log_total: Vec<f64>,
}

/// Route construction state shared by all ants of a run.
pub struct RouteBuilder<'a> {
    inst: &'a Instance,
    alpha: f64,
    neighbors: NeighborLists,
    eta_pow: Vec<f64>,
    eta_log: Vec<f64>,
}

impl<'a> RouteBuilder<'a> {
    pub fn new(inst: &'a Instance, params: &AcoParams) -> Self {
        let n = inst.n();
        let mut eta_pow = vec![0.0; n * n];
        let mut eta_log = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = inst.d(i, j).max(1) as f64;
                eta_pow[i * n + j] = if params.beta == 0.0 { 1.0 } else { d.powf(-params.beta) };
                eta_log[i * n + j] = -params.beta * d.ln();
            }
        }
        RouteBuilder {
            inst,
            alpha: params.alpha,
            neighbors: NeighborLists::new(inst, params.candidates.max(1)),
            eta_pow,
            eta_log,
        }
    }

    pub fn neighbors(&self) -> &NeighborLists {
        &self.neighbors
    }

    pub fn choice_info(&self, pher: &PheromoneState) -> ChoiceInfo {
        let n = self.inst.n();
        let mut total = vec![0.0; n * n];
        let mut log_total = vec![0.0; n * n];
        for idx in 0..n * n {
            let tau = pher.tau[idx];
            let tau_pow = if self.alpha == 0.0 { 1.0 } else { tau.powf(self.alpha) };
            total[idx] = tau_pow * self.eta_pow[idx];
            log_total[idx] = self.alpha * tau.ln() + self.eta_log[idx];
        }
        ChoiceInfo { n, total, log_total }
    }

    /// One ant walk. The destination is always a legal next step; the walk
    /// ends as soon as it is chosen.
    pub fn construct<R: Rng + ?Sized>(&self, choice: &ChoiceInfo, rng: &mut R) -> Route {
        let inst = self.inst;
        let (start, end) = (inst.start(), inst.end());
        let mut visited = vec![false; inst.n()];
        visited[start] = true;
        let mut route = vec![start];
        let mut cur = start;
        let mut options: Vec<usize> = Vec::with_capacity(inst.n());
        while cur != end {
            options.clear();
            options.extend(
                self.neighbors
                    .of(cur)
                    .iter()
                    .copied()
                    .filter(|&j| !visited[j] && j != end),
            );
            if options.is_empty() {
                options.extend((0..inst.n()).filter(|&j| !visited[j] && j != end));
            }
            options.push(end);
            let next = select(choice, cur, &options, rng);
            visited[next] = true;
            route.push(next);
            cur = next;
        }
        Route::from_raw(route)
    }
}

fn select<R: Rng + ?Sized>(choice: &ChoiceInfo, cur: usize, options: &[usize], rng: &mut R) -> usize {
    let row = cur * choice.n;
    let sum: f64 = options.iter().map(|&j| choice.total[row + j]).sum();
    if sum > 0.0 && sum.is_finite() {
        let mut r = rng.gen::<f64>() * sum;
        for &j in options {
            r -= choice.total[row + j];
            if r < 0.0 {
                return j;
            }
        }
        // Rounding left a sliver; take the last option with positive weight.
        return *options
            .iter()
            .rev()
            .find(|&&j| choice.total[row + j] > 0.0)
            .unwrap_or(options.last().unwrap());
    }
    let mut best = options[0];
    for &j in &options[1..] {
        if choice.log_total[row + j] > choice.log_total[row + best] {
            best = j;
        }
    }
    best
}

/// Builds one route from scratch. Convenient for one-off use; the solver
/// reuses a [`RouteBuilder`] across ants instead.
pub fn construct_route<R: Rng + ?Sized>(
    inst: &Instance,
    pher: &PheromoneState,
    params: &AcoParams,
    rng: &mut R,
) -> Route {
    let builder = RouteBuilder::new(inst, params);
    let choice = builder.choice_info(pher);
    builder.construct(&choice, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Item;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cities(coords: Vec<(f64, f64)>) -> Instance {
        let m = coords.len().saturating_sub(2);
        let items = (0..m)
            .map(|k| Item { id: k, profit: 1.0, weight: 1.0, city: k + 1 })
            .collect();
        Instance::new("c", coords, items, 10.0, 1e6, 0.1, 1.0).unwrap()
    }

    #[test]
    fn two_cities_route() {
        let inst = cities(vec![(0.0, 0.0), (1.0, 1.0)]);
        let pher = PheromoneState::new(2, 0.1, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..5 {
            let r = construct_route(&inst, &pher, &AcoParams::default(), &mut rng);
            assert_eq!(r.cities(), &[0, 1]);
        }
    }

    #[test]
    fn large_beta_picks_nearest() {
        let inst = cities(vec![(0.0, 0.0), (1.0, 0.0), (5.0, 0.0), (9.0, 0.0), (30.0, 0.0)]);
        let pher = PheromoneState::new(5, 1.0, 1.0);
        let params = AcoParams { beta: 1000.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = construct_route(&inst, &pher, &params, &mut rng);
        assert_eq!(r.cities(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn uniform_choice_frequencies() {
        // Three middle cities plus the destination are all equally likely.
        let inst = cities(vec![(0.0, 0.0), (1.0, 5.0), (2.0, 7.0), (3.0, 1.0), (9.0, 9.0)]);
        let pher = PheromoneState::new(5, 1.0, 1.0);
        let params = AcoParams { beta: 0.0, ..Default::default() };
        let builder = RouteBuilder::new(&inst, &params);
        let choice = builder.choice_info(&pher);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000;
        let mut counts = [0usize; 5];
        for _ in 0..draws {
            counts[builder.construct(&choice, &mut rng).cities()[1]] += 1;
        }
        let p = 0.25;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for &c in &counts[1..] {
            assert!((c as f64 - draws as f64 * p).abs() <= 3.0 * sigma, "{counts:?}");
        }
        assert_eq!(counts[0], 0);
    }

    #[test]
    fn fitness_values() {
        assert_eq!(fitness(UpperBound(9.0), 9.0).unwrap(), 1.0);
        assert_eq!(fitness(UpperBound(9.0), 0.0).unwrap(), 0.1);
        assert!(fitness(UpperBound(9.0), 5.0).unwrap() > fitness(UpperBound(9.0), 4.0).unwrap());
        assert!(fitness(UpperBound(9.0), 10.0).is_err());
    }

    #[test]
    fn no_evaporation_reinforces_only_route_arcs() {
        let inst = cities(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let mut pher = PheromoneState::new(4, 0.01, 10.0);
        pher.set_bounds(0.01, 10.0);
        for t in &mut pher.tau {
            *t = 1.0;
        }
        let before = pher.clone();
        let route = Route::new(&inst, vec![0, 2, 3]).unwrap();
        update_pheromones(&mut pher, &route, 0.5, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let on = matches!((i, j), (0, 2) | (2, 0) | (2, 3) | (3, 2));
                if on {
                    assert!(pher.get(i, j) > before.get(i, j));
                } else {
                    assert_eq!(pher.get(i, j), before.get(i, j));
                }
            }
        }
    }

    #[test]
    fn full_evaporation_resets_to_tau_min() {
        let inst = cities(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let mut pher = PheromoneState::new(4, 0.05, 1.0);
        let route = Route::new(&inst, vec![0, 1, 3]).unwrap();
        update_pheromones(&mut pher, &route, 0.3, 1.0);
        assert_eq!(pher.get(0, 2), 0.05);
        assert_eq!(pher.get(1, 2), 0.05);
        assert_eq!(pher.get(0, 1), 0.3);
        let (lo, hi) = pher.extent();
        assert!(lo >= pher.tau_min() && hi <= pher.tau_max());
    }

    #[test]
    fn bounds_formula() {
        let (lo, hi) = mmas_bounds(UpperBound(99.0), 50.0, 0.5, 10);
        assert!((hi - 1.0 / (0.5 * 50.0)).abs() < 1e-15);
        assert!((lo - hi / 20.0).abs() < 1e-15);
        let (lo0, hi0) = mmas_bounds(UpperBound(99.0), 50.0, 0.0, 10);
        assert!(hi0.is_finite() && lo0 > 0.0);
    }

    #[test]
    fn local_search_names() {
        for ls in [
            LocalSearch::None,
            LocalSearch::TwoOpt,
            LocalSearch::TwoHalfOpt,
            LocalSearch::ThreeOpt,
        ] {
            assert_eq!(ls.to_string().parse::<LocalSearch>().unwrap(), ls);
        }
        assert!("4opt".parse::<LocalSearch>().is_err());
    }

    #[test]
    fn table_ranges() {
        assert!(AcoParams::default().out_of_range().is_empty());
        let p = AcoParams { ants: 7, rho: 1.5, ..Default::default() };
        assert_eq!(p.out_of_range().len(), 2);
    }
}

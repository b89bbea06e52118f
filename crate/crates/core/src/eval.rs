//! Travel-time, profit and feasibility evaluation of ⟨route, packing plan⟩
//! solutions, plus the two-line solution text format.

use std::fmt::Write as _;

use crate::error::{EvalError, SolutionFormatError};
use crate::instance::{Distance, Instance};

/// Tolerance on `t <= T` and `weight <= W` comparisons.
pub const EPS: f64 = 1e-6;

/// An ordered list of distinct cities from the start city to the destination.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Route(Vec<usize>);

impl Route {
    /// Validates a zero-based city sequence against the instance.
    pub fn new(inst: &Instance, cities: Vec<usize>) -> Result<Route, EvalError> {
        let n = inst.n();
        if cities.len() < 2 {
            return Err(EvalError::InvalidRoute(format!(
                "route needs at least 2 cities, got {}",
                cities.len()
            )));
        }
        if cities[0] != inst.start() {
            return Err(EvalError::InvalidRoute(format!(
                "route starts at city {} instead of 1",
                cities[0] + 1
            )));
        }
        if *cities.last().unwrap() != inst.end() {
            return Err(EvalError::InvalidRoute(format!(
                "route ends at city {} instead of {n}",
                cities.last().unwrap() + 1
            )));
        }
        let mut seen = vec![false; n];
        for &c in &cities {
            if c >= n {
                return Err(EvalError::CityOutOfRange(c));
            }
            if seen[c] {
                return Err(EvalError::InvalidRoute(format!(
                    "city {} visited twice",
                    c + 1
                )));
            }
            seen[c] = true;
        }
        Ok(Route(cities))
    }

    /// The shortest possible journey, straight from the start to the destination.
    pub fn direct(inst: &Instance) -> Route {
        Route(vec![inst.start(), inst.end()])
    }

    /// Wraps a sequence already known to be valid.
    pub(crate) fn from_raw(cities: Vec<usize>) -> Route {
        Route(cities)
    }

    pub fn cities(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Total travelled distance.
    pub fn distance(&self, inst: &Instance) -> Distance {
        path_distance(inst, &self.0)
    }
}

pub(crate) fn path_distance(inst: &Instance, cities: &[usize]) -> Distance {
    cities.windows(2).map(|w| inst.d(w[0], w[1])).sum()
}

/// Per-item pick indicators with cached totals.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingPlan {
    picks: Vec<bool>,
    profit: f64,
    weight: f64,
}

impl PackingPlan {
    pub fn empty(m: usize) -> PackingPlan {
        PackingPlan {
            picks: vec![false; m],
            profit: 0.0,
            weight: 0.0,
        }
    }

    /// Plan picking exactly the given zero-based item ids.
    pub fn from_items(inst: &Instance, items: &[usize]) -> Result<PackingPlan, EvalError> {
        let mut plan = PackingPlan::empty(inst.m());
        for &k in items {
            if k >= inst.m() {
                return Err(EvalError::InvalidRoute(format!("unknown item {}", k + 1)));
            }
            plan.picks[k] = true;
        }
        plan.recompute(inst);
        Ok(plan)
    }

    pub fn pick(&mut self, inst: &Instance, k: usize) {
        if !self.picks[k] {
            self.picks[k] = true;
            self.profit += inst.item(k).profit;
            self.weight += inst.item(k).weight;
        }
    }

    pub fn unpick(&mut self, inst: &Instance, k: usize) {
        if self.picks[k] {
            self.picks[k] = false;
            self.recompute(inst);
        }
    }

    fn recompute(&mut self, inst: &Instance) {
        let (p, w) = self
            .picked()
            .fold((0.0, 0.0), |(p, w), k| (p + inst.item(k).profit, w + inst.item(k).weight));
        self.profit = p;
        self.weight = w;
    }

    pub fn is_picked(&self, k: usize) -> bool {
        self.picks[k]
    }

    pub fn picks(&self) -> &[bool] {
        &self.picks
    }

    /// Picked item ids in increasing order.
    pub fn picked(&self) -> impl Iterator<Item = usize> + '_ {
        self.picks
            .iter()
            .enumerate()
            .filter_map(|(k, &z)| z.then_some(k))
    }

    pub fn count(&self) -> usize {
        self.picks.iter().filter(|&&z| z).count()
    }

    /// Total profit p(z).
    pub fn profit(&self) -> f64 {
        self.profit
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }
}

/// One visited city in an evaluated journey.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub city: usize,
    /// Arrival time at `city`.
    pub arrival: f64,
    /// Knapsack weight when leaving `city`.
    pub weight_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub profit: f64,
    pub travel_time: f64,
    pub final_weight: f64,
    /// Feasible with the `EPS` tolerance on time and capacity.
    pub feasible: bool,
    /// Feasible without any tolerance.
    pub raw_feasible: bool,
    pub legs: Vec<Leg>,
}

/// Thief speed when carrying `w` weight units.
pub fn speed(inst: &Instance, w: f64) -> Result<f64, EvalError> {
    if !(0.0..=inst.capacity()).contains(&w) {
        return Err(EvalError::WeightOutOfRange(w));
    }
    Ok(inst.max_speed() - inst.nu() * w)
}

/// Weight of the picked items at `city`, summed in item id order.
#[inline]
pub(crate) fn city_load(inst: &Instance, picks: &[bool], city: usize) -> f64 {
    inst.items_at(city)
        .iter()
        .filter(|&&k| picks[k])
        .fold(0.0, |acc, &k| acc + inst.item(k).weight)
}

/// Time of one leg of length `d` leaving with weight `q`.
#[inline]
pub(crate) fn leg_time(inst: &Instance, d: Distance, q: f64) -> f64 {
    let v = inst.max_speed() - inst.nu() * q;
    if v > 0.0 {
        d as f64 / v
    } else {
        f64::INFINITY
    }
}

#[inline]
pub(crate) fn within_time(inst: &Instance, t: f64) -> bool {
    t <= inst.max_time() + EPS
}

#[inline]
pub(crate) fn within_capacity(inst: &Instance, w: f64) -> bool {
    w <= inst.capacity() + EPS
}

/// Evaluates a solution.
///
/// Items are loaded on arrival at their city, so they slow down only the
/// legs departing from it. With `strict` set, capacity or time violations
/// are errors; otherwise they only clear the `feasible` flag.
pub fn evaluate(
    inst: &Instance,
    route: &Route,
    plan: &PackingPlan,
    strict: bool,
) -> Result<Evaluation, EvalError> {
    if plan.len() != inst.m() {
        return Err(EvalError::PlanSize {
            expected: inst.m(),
            found: plan.len(),
        });
    }
    let mut on_route = vec![false; inst.n()];
    for &c in route.cities() {
        if c >= inst.n() {
            return Err(EvalError::CityOutOfRange(c));
        }
        on_route[c] = true;
    }
    for k in plan.picked() {
        let city = inst.item(k).city;
        if !on_route[city] {
            return Err(EvalError::PickOffRoute {
                item: k + 1,
                city: city + 1,
            });
        }
    }

    let cities = route.cities();
    let mut legs = Vec::with_capacity(cities.len());
    let mut t = 0.0;
    let mut q = city_load(inst, plan.picks(), cities[0]);
    legs.push(Leg {
        city: cities[0],
        arrival: 0.0,
        weight_after: q,
    });
    for w in cities.windows(2) {
        t += leg_time(inst, inst.d(w[0], w[1]), q);
        q += city_load(inst, plan.picks(), w[1]);
        legs.push(Leg {
            city: w[1],
            arrival: t,
            weight_after: q,
        });
    }
    let profit = plan
        .picked()
        .fold(0.0, |acc, k| acc + inst.item(k).profit);
    let feasible = within_time(inst, t) && within_capacity(inst, q);
    let raw_feasible = t <= inst.max_time() && q <= inst.capacity();
    if strict {
        if !within_capacity(inst, q) {
            return Err(EvalError::OverCapacity {
                weight: q,
                capacity: inst.capacity(),
            });
        }
        if !within_time(inst, t) {
            return Err(EvalError::OverTime {
                time: t,
                limit: inst.max_time(),
            });
        }
    }
    Ok(Evaluation {
        profit,
        travel_time: t,
        final_weight: q,
        feasible,
        raw_feasible,
        legs,
    })
}

/// Route-shape statistics of a feasible solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionStats {
    /// Total distance divided by the number of visited cities.
    pub distance_per_city: f64,
    /// Percentage of the time limit spent.
    pub pct_time: f64,
    /// Percentage of the knapsack capacity used.
    pub pct_weight: f64,
}

pub fn solution_stats(
    inst: &Instance,
    route: &Route,
    plan: &PackingPlan,
) -> Result<SolutionStats, EvalError> {
    let ev = evaluate(inst, route, plan, true)?;
    Ok(SolutionStats {
        distance_per_city: route.distance(inst) as f64 / route.len() as f64,
        pct_time: 100.0 * ev.travel_time / inst.max_time(),
        pct_weight: 100.0 * ev.final_weight / inst.capacity(),
    })
}

/// A route together with its packing plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub route: Route,
    pub plan: PackingPlan,
}

impl Solution {
    pub fn new(route: Route, plan: PackingPlan) -> Solution {
        Solution { route, plan }
    }

    /// Empty plan on the direct route.
    pub fn empty(inst: &Instance) -> Solution {
        Solution {
            route: Route::direct(inst),
            plan: PackingPlan::empty(inst.m()),
        }
    }

    pub fn profit(&self) -> f64 {
        self.plan.profit()
    }

    pub fn evaluate(&self, inst: &Instance, strict: bool) -> Result<Evaluation, EvalError> {
        evaluate(inst, &self.route, &self.plan, strict)
    }

    /// Two lines: the one-based route, then the sorted one-based item ids.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_list(&mut out, self.route.cities().iter().map(|c| c + 1));
        write_list(&mut out, self.plan.picked().map(|k| k + 1));
        out
    }

    /// Reads the two-line format and validates it against `inst`.
    pub fn parse(inst: &Instance, text: &str) -> Result<Solution, SolutionParseError> {
        let (cities, items) = parse_solution_text(text)?;
        let to_zero = |v: Vec<usize>, limit: usize| {
            v.into_iter()
                .map(|x| {
                    if x == 0 || x > limit {
                        Err(SolutionFormatError::OutOfRange(x))
                    } else {
                        Ok(x - 1)
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let cities = to_zero(cities, inst.n())?;
        let items = to_zero(items, inst.m())?;
        let route = Route::new(inst, cities)?;
        let plan = PackingPlan::from_items(inst, &items)?;
        Ok(Solution { route, plan })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolutionParseError {
    #[error(transparent)]
    Format(#[from] SolutionFormatError),
    #[error(transparent)]
    Invalid(#[from] EvalError),
}

fn write_list(out: &mut String, values: impl Iterator<Item = usize>) {
    out.push('[');
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out.push_str("]\n");
}

/// Raw one-based lists from the two-line solution format.
pub fn parse_solution_text(text: &str) -> Result<(Vec<usize>, Vec<usize>), SolutionFormatError> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if lines.len() != 2 {
        return Err(SolutionFormatError::LineCount);
    }
    let parse_list = |line_no: usize, line: &str| {
        let inner = line
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| SolutionFormatError::NotAList {
                line: line_no,
                text: line.to_string(),
            })?;
        inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>().map_err(|_| SolutionFormatError::BadInteger {
                    line: line_no,
                    text: s.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    };
    Ok((parse_list(1, lines[0])?, parse_list(2, lines[1])?))
}

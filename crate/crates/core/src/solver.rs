//! The full ant-colony search loop: construct, pack, optionally improve the
//! route, record the best pruned solution and update the trails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aco::{
    fitness, mmas_bounds, update_pheromones, AcoParams, LocalSearch, PheromoneState, RouteBuilder,
};
use crate::bounds::fractional_kp_ub;
use crate::eval::{evaluate, PackingPlan, Route, Solution};
use crate::instance::Instance;
use crate::local_search::LocalSearcher;
use crate::packing::{pack, PackingParams};

/// Environment variable overriding the default worker count.
pub const THREADS_ENV: &str = "THOP_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub aco: AcoParams,
    pub packing: PackingParams,
    /// Wall-clock budget. `None` means the run stops on `max_iterations` only.
    pub time_budget: Option<Duration>,
    pub max_iterations: Option<u64>,
    pub seed: u64,
    pub threads: usize,
}

impl SolverConfig {
    /// Defaults with the ⌈0.1·m⌉ second budget for `inst`.
    pub fn for_instance(inst: &Instance) -> SolverConfig {
        SolverConfig {
            aco: AcoParams::default(),
            packing: PackingParams::default(),
            time_budget: Some(default_budget(inst.m())),
            max_iterations: None,
            seed: 1,
            threads: default_threads(),
        }
    }

    /// Iteration-limited configuration whose output does not depend on timing.
    pub fn deterministic(iterations: u64, seed: u64) -> SolverConfig {
        SolverConfig {
            aco: AcoParams::default(),
            packing: PackingParams::default(),
            time_budget: None,
            max_iterations: Some(iterations),
            seed,
            threads: 1,
        }
    }
}

/// ⌈0.1·m⌉ seconds, at least one second.
pub fn default_budget(m: usize) -> Duration {
    Duration::from_secs(m.div_ceil(10).max(1) as u64)
}

/// `THOP_THREADS` if set and valid, else the available parallelism.
pub fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub iteration: u64,
    /// Routes packed so far.
    pub evaluations: u64,
    pub best_profit: f64,
    /// Seconds since the start; only recorded for wall-clock budgets.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed: Option<f64>,
}

/// Chronological trace of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub seed: u64,
    pub config: SolverConfig,
    pub records: Vec<LogRecord>,
    pub iterations: u64,
    pub final_solution: Solution,
    pub final_travel_time: f64,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum LogLine<'a> {
    Config {
        instance: &'a str,
        seed: u64,
        config: &'a SolverConfig,
    },
    Improvement(&'a LogRecord),
    Final {
        iterations: u64,
        profit: f64,
        travel_time: f64,
        route: Vec<usize>,
        items: Vec<usize>,
    },
}

impl RunLog {
    /// JSON-lines form: a config line, one line per improvement and a final line.
    pub fn to_json_lines(&self, instance: &str) -> String {
        let mut lines = Vec::with_capacity(self.records.len() + 2);
        lines.push(LogLine::Config {
            instance,
            seed: self.seed,
            config: &self.config,
        });
        lines.extend(self.records.iter().map(LogLine::Improvement));
        lines.push(LogLine::Final {
            iterations: self.iterations,
            profit: self.final_solution.profit(),
            travel_time: self.final_travel_time,
            route: self.final_solution.route.cities().iter().map(|c| c + 1).collect(),
            items: self.final_solution.plan.picked().map(|k| k + 1).collect(),
        });
        let mut out = String::new();
        for l in lines {
            out.push_str(&serde_json::to_string(&l).expect("log lines serialize"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("no feasible route: the direct journey takes {time} > T = {limit}")]
    NoFeasibleRoute { time: f64, limit: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Removes every city where nothing is picked, keeping both endpoints.
/// Returns the route unchanged when the instance fails the triangle check.
pub fn prune_route(inst: &Instance, route: &Route, plan: &PackingPlan) -> Route {
    if !inst.triangle_ok() {
        return route.clone();
    }
    let (start, end) = (inst.start(), inst.end());
    let kept = route
        .cities()
        .iter()
        .copied()
        .filter(|&c| c == start || c == end || inst.items_at(c).iter().any(|&k| plan.is_picked(k)))
        .collect();
    Route::from_raw(kept)
}

fn ant_seed(seed: u64, iteration: u64, ant: usize) -> u64 {
    // splitmix64 over the combined key
    let mut z = seed
        ^ iteration.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (ant as u64).wrapping_mul(0xD1B5_4A32_D192_ED69);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct AntResult {
    route: Route,
    plan: PackingPlan,
}

/// Runs the search and returns the best feasible solution with its log.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<(Solution, RunLog), SolveError> {
    if cfg.time_budget.is_none() && cfg.max_iterations.is_none() {
        return Err(SolveError::InvalidConfig(
            "either a time budget or an iteration limit is required".into(),
        ));
    }
    if cfg.aco.ants == 0 {
        return Err(SolveError::InvalidConfig("ants must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.aco.rho) {
        return Err(SolveError::InvalidConfig(format!("rho={} outside [0, 1]", cfg.aco.rho)));
    }
    let start = Instant::now();
    let timed = cfg.time_budget.is_some();
    let elapsed = || timed.then(|| start.elapsed().as_secs_f64());
    let out_of_time = || cfg.time_budget.is_some_and(|b| start.elapsed() >= b);

    let mut best = Solution::empty(inst);
    let direct = evaluate(inst, &best.route, &best.plan, false).expect("direct route is valid");
    if !direct.feasible {
        return Err(SolveError::NoFeasibleRoute {
            time: direct.travel_time,
            limit: inst.max_time(),
        });
    }
    let mut best_time = direct.travel_time;
    let mut records = vec![LogRecord {
        iteration: 0,
        evaluations: 0,
        best_profit: 0.0,
        elapsed: elapsed(),
    }];
    let mut iteration = 0;

    if inst.m() > 0 {
        let ub = fractional_kp_ub(inst);
        let builder = RouteBuilder::new(inst, &cfg.aco);
        let searcher = LocalSearcher::new(inst, builder.neighbors());
        let mut pher = PheromoneState::for_instance(inst, ub, cfg.aco.rho);
        let pool = (cfg.threads > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .expect("thread pool")
        });
        let mut evaluations = 0u64;

        let run_ant = |choice: &crate::aco::ChoiceInfo, iteration: u64, ant: usize| {
            if out_of_time() {
                return None;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ant_seed(cfg.seed, iteration, ant));
            let mut route = builder.construct(choice, &mut rng);
            let mut plan = pack(inst, &route, &cfg.packing, &mut rng);
            if cfg.aco.local_search != LocalSearch::None {
                let improved = searcher.run(&route, cfg.aco.local_search);
                if improved != route {
                    let repacked = pack(inst, &improved, &cfg.packing, &mut rng);
                    if repacked.profit() > plan.profit() {
                        route = improved;
                        plan = repacked;
                    }
                }
            }
            Some(AntResult { route, plan })
        };

        while cfg.max_iterations.map_or(true, |limit| iteration < limit) && !out_of_time() {
            iteration += 1;
            let choice = builder.choice_info(&pher);
            let ants: Vec<Option<AntResult>> = match &pool {
                Some(pool) => pool.install(|| {
                    (0..cfg.aco.ants)
                        .into_par_iter()
                        .map(|a| run_ant(&choice, iteration, a))
                        .collect()
                }),
                None => (0..cfg.aco.ants).map(|a| run_ant(&choice, iteration, a)).collect(),
            };
            let ants: Vec<AntResult> = ants.into_iter().flatten().collect();
            if ants.is_empty() {
                break;
            }
            evaluations += ants.len() as u64;

            let mut improved = false;
            let mut iter_best: Option<(Route, f64)> = None;
            for ant in &ants {
                let pruned = prune_route(inst, &ant.route, &ant.plan);
                let Ok(ev) = evaluate(inst, &pruned, &ant.plan, false) else {
                    continue;
                };
                if !ev.feasible {
                    continue;
                }
                let profit = ant.plan.profit();
                if iter_best.as_ref().map_or(true, |(_, p)| profit > *p) {
                    iter_best = Some((pruned.clone(), profit));
                }
                if profit > best.profit() {
                    best = Solution::new(pruned, ant.plan.clone());
                    best_time = ev.travel_time;
                    improved = true;
                }
            }
            if improved {
                records.push(LogRecord {
                    iteration,
                    evaluations,
                    best_profit: best.profit(),
                    elapsed: elapsed(),
                });
                let (lo, hi) = mmas_bounds(ub, best.profit(), cfg.aco.rho, inst.n());
                pher.set_bounds(lo, hi);
            }

            let period = cfg.aco.global_best_period;
            let (route, profit) = match iter_best {
                Some(ib) if period == 0 || iteration % period != 0 => ib,
                _ => (best.route.clone(), best.profit()),
            };
            let deposit = fitness(ub, profit).expect("profit never exceeds the upper bound");
            update_pheromones(&mut pher, &route, deposit, cfg.aco.rho);
        }
    }

    let log = RunLog {
        seed: cfg.seed,
        config: cfg.clone(),
        records,
        iterations: iteration,
        final_solution: best.clone(),
        final_travel_time: best_time,
    };
    Ok((best, log))
}

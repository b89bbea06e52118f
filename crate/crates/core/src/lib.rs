//! Thief Orienteering Problem solver.
//!
//! A thief travels from the first city to the last within a time limit,
//! stealing items into a capacity-limited knapsack; the heavier the
//! knapsack, the slower the thief. Routes are built by a MAX-MIN ant
//! system and packed by a randomised greedy heuristic.
//!
//! ```no_run
//! use thop::{solve, Instance, SolverConfig};
//!
//! let text = std::fs::read_to_string("eil51_01_bsc_01_01.thop").unwrap();
//! let inst = Instance::parse(&text).unwrap();
//! let (best, _log) = solve(&inst, &SolverConfig::for_instance(&inst)).unwrap();
//! print!("{}", best.to_text());
//! ```

pub mod aco;
pub mod bounds;
pub mod error;
pub mod eval;
pub mod generate;
pub mod harness;
pub mod instance;
pub mod local_search;
pub mod minlp;
pub mod packing;
pub mod solver;

pub use aco::{AcoParams, LocalSearch, PheromoneState};
pub use bounds::{brute_force_solve, fractional_kp_ub, BruteForceLimits, UpperBound};
pub use error::{EvalError, ParseError};
pub use eval::{evaluate, Evaluation, PackingPlan, Route, Solution, EPS};
pub use instance::{Instance, InstanceId, Item};
pub use local_search::local_search;
pub use minlp::{export_model, lift_solution, verify};
pub use packing::{pack, PackingParams};
pub use solver::{prune_route, solve, RunLog, SolveError, SolverConfig};

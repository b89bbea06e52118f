use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use thop::aco::LocalSearch;
use thop::bounds::{brute_force_solve, fractional_kp_ub, BruteForceLimits};
use thop::eval::Solution;
use thop::harness::{
    self, load_instance, parse_exponents, read_reference, read_results, run_single, write_file,
    ParamProfile,
};
use thop::instance::{Instance, InstanceId};
use thop::minlp::{export_model, lift_solution_unchecked, verify};
use thop::solver::{SolverConfig, THREADS_ENV};

#[derive(Parser)]
#[command(name = "thop", version, about = "Thief Orienteering Problem solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Solution file to write (two lines: route, items).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// JSON-lines run log to write.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run several seeds on several instances, appending rows to a CSV.
    Sweep {
        instances: Vec<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Number of seeds; seeds are `seed .. seed + runs`.
        #[arg(long, default_value_t = 30)]
        runs: u64,
        #[arg(short, long, default_value = "results.csv")]
        out: PathBuf,
        /// Runs executed at the same time.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact optimum by enumeration (tiny instances only).
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_cities: usize,
        #[arg(long, default_value_t = 8)]
        max_items: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a solution against the evaluator and every model constraint.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Write the mixed-integer model in LP-style text.
    ExportModel {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Mean/best profit per instance and ratio to best-known values.
    Aggregate {
        results: PathBuf,
        /// CSV with columns `instance,best`.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Route segments with carried weight, for plotting.
    PlotData {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Time budget in seconds (default ⌈0.1·m⌉).
    #[arg(long)]
    time: Option<f64>,
    /// Stop after this many iterations. Without --time, the run is fully
    /// deterministic.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    #[arg(long)]
    ants: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// none, 2opt, 2.5opt or 3opt.
    #[arg(long)]
    localsearch: Option<LocalSearch>,
    #[arg(long)]
    ptries: Option<u32>,
    /// Packing exponents A,B,C.
    #[arg(long, value_parser = parse_exponents)]
    pack_exponents: Option<thop::packing::Exponents>,
    /// Exponent perturbation half-width.
    #[arg(long)]
    pack_width: Option<f64>,
    /// Solve the orienteering reduction (unit speed, unlimited knapsack).
    #[arg(long)]
    op_mode: bool,
    /// Parameter profile file, or a directory of `<group>.params` files.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl SolverArgs {
    fn instance(&self, path: &Path) -> Result<Instance, String> {
        let inst = load_instance(path).map_err(|e| e.to_string())?;
        Ok(if self.op_mode { inst.to_op_instance() } else { inst })
    }

    fn config(&self, inst: &Instance, path: &Path, seed: u64) -> Result<SolverConfig, String> {
        let mut cfg = SolverConfig::for_instance(inst);
        if let Some(p) = &self.params {
            let profile = if p.is_dir() {
                match InstanceId::from_path(path) {
                    Some(id) => ParamProfile::for_instance(p, &id).map_err(|e| e.to_string())?,
                    None => {
                        log::warn!("{}: no group in file name; profile skipped", path.display());
                        None
                    }
                }
            } else {
                Some(ParamProfile::load(p).map_err(|e| e.to_string())?)
            };
            if let Some(profile) = profile {
                profile.apply(&mut cfg);
            }
        }
        cfg.seed = seed;
        if let Some(t) = self.threads {
            cfg.threads = t.max(1);
        }
        match (self.time, self.iterations) {
            (Some(t), it) => {
                cfg.time_budget = Some(Duration::from_secs_f64(t));
                cfg.max_iterations = it;
            }
            (None, Some(it)) => {
                cfg.time_budget = None;
                cfg.max_iterations = Some(it);
            }
            (None, None) => {}
        }
        if let Some(v) = self.ants {
            cfg.aco.ants = v;
        }
        if let Some(v) = self.alpha {
            cfg.aco.alpha = v;
        }
        if let Some(v) = self.beta {
            cfg.aco.beta = v;
        }
        if let Some(v) = self.rho {
            cfg.aco.rho = v;
        }
        if let Some(v) = self.localsearch {
            cfg.aco.local_search = v;
        }
        if let Some(v) = self.ptries {
            cfg.packing.ptries = v;
        }
        if let Some(v) = self.pack_exponents {
            cfg.packing.exponents = v;
        }
        if let Some(v) = self.pack_width {
            cfg.packing.perturbation_width = v;
        }
        harness::warn_out_of_range(&cfg);
        Ok(cfg)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => write_file(p, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_solution(inst: &Instance, path: &Path) -> Result<Solution, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Solution::parse(inst, &text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Solve {
            instance,
            solver,
            out,
            log,
        } => {
            let inst = solver.instance(&instance)?;
            let cfg = solver.config(&inst, &instance, solver.seed)?;
            let (result, sol, run_log) = run_single(&inst, &cfg).map_err(|e| e.to_string())?;
            if let Some(p) = &out {
                write_file(p, &sol.to_text()).map_err(|e| e.to_string())?;
            }
            if let Some(p) = &log {
                write_file(p, &run_log.to_json_lines(inst.name())).map_err(|e| e.to_string())?;
            }
            println!(
                "{} seed={} profit={} time={:.4} elapsed={:.2}s",
                result.instance, result.seed, result.profit, result.travel_time, result.elapsed
            );
            if out.is_none() {
                print!("{}", sol.to_text());
            }
            Ok(true)
        }
        Command::Sweep {
            instances,
            solver,
            runs,
            out,
            workers,
        } => {
            let mut loaded = Vec::new();
            let mut configs = Vec::new();
            for path in &instances {
                let inst = solver.instance(path)?;
                configs.push(solver.config(&inst, path, 0)?);
                loaded.push(inst);
            }
            let seeds: Vec<u64> = (solver.seed..solver.seed + runs).collect();
            let summary = harness::sweep(
                &loaded,
                &seeds,
                |inst, seed| {
                    let idx = loaded.iter().position(|x| std::ptr::eq(x, inst)).unwrap();
                    SolverConfig {
                        seed,
                        ..configs[idx].clone()
                    }
                },
                &out,
                workers.max(1),
            )
            .map_err(|e| e.to_string())?;
            println!(
                "{} runs, {} skipped (already present), {} failed -> {}",
                summary.ran,
                summary.skipped,
                summary.failed,
                out.display()
            );
            Ok(summary.failed == 0)
        }
        Command::Oracle {
            instance,
            max_cities,
            max_items,
            out,
        } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let limits = BruteForceLimits {
                max_cities,
                max_items,
            };
            let sol = brute_force_solve(&inst, limits).map_err(|e| e.to_string())?;
            eprintln!(
                "optimal profit {} (fractional bound {})",
                sol.profit(),
                fractional_kp_ub(&inst).0
            );
            emit(&out, &sol.to_text())?;
            Ok(true)
        }
        Command::Verify { instance, solution } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let sol = read_solution(&inst, &solution)?;
            let mut ok = true;
            match sol.evaluate(&inst, true) {
                Ok(ev) => println!(
                    "PASS evaluation: profit {} time {} weight {}",
                    ev.profit, ev.travel_time, ev.final_weight
                ),
                Err(e) => {
                    println!("FAIL evaluation: {e}");
                    ok = false;
                }
            }
            let vars = lift_solution_unchecked(&inst, &sol.route, &sol.plan).map_err(|e| e.to_string())?;
            let report = verify(&inst, &vars);
            print!("{report}");
            Ok(ok && report.all_passed())
        }
        Command::ExportModel { instance, out } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            emit(&out, &export_model(&inst))?;
            Ok(true)
        }
        Command::Aggregate {
            results,
            reference,
            out,
        } => {
            let rows = read_results(&results).map_err(|e| e.to_string())?;
            let reference = match reference {
                Some(p) => read_reference(&p).map_err(|e| e.to_string())?,
                None => Default::default(),
            };
            let report = harness::aggregate(&rows, &reference);
            for name in &report.missing_reference {
                eprintln!("warning: no reference value for {name}; ratio omitted");
            }
            emit(&out, &report.to_csv().map_err(|e| e.to_string())?)?;
            Ok(true)
        }
        Command::PlotData {
            instance,
            solution,
            out,
        } => {
            let inst = load_instance(&instance).map_err(|e| e.to_string())?;
            let sol = read_solution(&inst, &solution)?;
            let csv = harness::export_plot_data(&inst, &sol).map_err(|e| e.to_string())?;
            emit(&out, &csv)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

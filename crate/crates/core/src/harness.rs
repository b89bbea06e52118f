//! Benchmark plumbing: single runs, resumable multi-seed sweeps, result
//! aggregation against best-known values, parameter profiles and plot data.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::aco::LocalSearch;
use crate::error::{EvalError, ParseError};
use crate::eval::{evaluate, Solution};
use crate::instance::{Instance, InstanceId};
use crate::packing::Exponents;
use crate::solver::{solve, RunLog, SolveError, SolverConfig};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{path}:{line}: {msg}")]
    Profile { path: PathBuf, line: usize, msg: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads and parses an instance file.
pub fn load_instance(path: &Path) -> Result<Instance, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Instance::parse(&text).map_err(|source| HarnessError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// One solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub instance: String,
    pub seed: u64,
    pub profit: f64,
    pub travel_time: f64,
    /// Wall-clock seconds.
    pub elapsed: f64,
    /// Compact `key=value` echo of the parameters.
    pub params: String,
    /// Content hash of (instance, seed, params), used to resume sweeps.
    pub key: String,
}

/// Compact, stable description of the tunable parameters of `cfg`.
pub fn params_echo(cfg: &SolverConfig) -> String {
    let budget = match (cfg.time_budget, cfg.max_iterations) {
        (Some(t), Some(i)) => format!("time={}s;iterations={i}", t.as_secs_f64()),
        (Some(t), None) => format!("time={}s", t.as_secs_f64()),
        (None, Some(i)) => format!("iterations={i}"),
        (None, None) => "unbounded".to_string(),
    };
    let e = cfg.packing.exponents;
    format!(
        "ants={};alpha={};beta={};rho={};localsearch={};ptries={};pack_exponents={},{},{};pack_width={};{}",
        cfg.aco.ants,
        cfg.aco.alpha,
        cfg.aco.beta,
        cfg.aco.rho,
        cfg.aco.local_search,
        cfg.packing.ptries,
        e.profit,
        e.weight,
        e.distance,
        cfg.packing.perturbation_width,
        budget
    )
}

/// SHA-256 over the instance text, the seed and the parameter echo.
pub fn run_key(inst: &Instance, seed: u64, params: &str) -> String {
    let mut h = Sha256::new();
    h.update(inst.to_text().as_bytes());
    h.update(seed.to_le_bytes());
    h.update(params.as_bytes());
    hex::encode(h.finalize())
}

/// Solves once and records the outcome.
pub fn run_single(
    inst: &Instance,
    cfg: &SolverConfig,
) -> Result<(RunResult, Solution, RunLog), SolveError> {
    let params = params_echo(cfg);
    let key = run_key(inst, cfg.seed, &params);
    let clock = Instant::now();
    let (sol, log) = solve(inst, cfg)?;
    let elapsed = clock.elapsed().as_secs_f64();
    let result = RunResult {
        instance: inst.name().to_string(),
        seed: cfg.seed,
        profit: sol.profit(),
        travel_time: log.final_travel_time,
        elapsed,
        params,
        key,
    };
    Ok((result, sol, log))
}

/// Reads a results CSV written by [`sweep`] or [`write_results`].
pub fn read_results(path: &Path) -> Result<Vec<RunResult>, HarnessError> {
    let mut rdr = csv::Reader::from_path(path)?;
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_results(path: &Path, results: &[RunResult]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in results {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Outcome counts of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepSummary {
    pub ran: usize,
    pub skipped: usize,
    pub failed: usize,
}

/// Runs every instance with every seed, appending one row per run to
/// `out`. Rows whose key is already present in `out` are skipped, so an
/// interrupted sweep can be resumed. Up to `workers` runs execute at once;
/// rows are appended under a lock.
pub fn sweep<F>(
    instances: &[Instance],
    seeds: &[u64],
    config_for: F,
    out: &Path,
    workers: usize,
) -> Result<SweepSummary, HarnessError>
where
    F: Fn(&Instance, u64) -> SolverConfig + Sync,
{
    let done: HashSet<String> = if out.exists() && std::fs::metadata(out).map_err(io_err(out))?.len() > 0 {
        read_results(out)?.into_iter().map(|r| r.key).collect()
    } else {
        HashSet::new()
    };
    let needs_header = done.is_empty()
        && std::fs::metadata(out).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(out)
        .map_err(io_err(out))?;
    let writer = Mutex::new(
        csv::WriterBuilder::new()
            .has_headers(needs_header)
            .from_writer(file),
    );

    let mut jobs = Vec::new();
    let mut skipped = 0;
    for inst in instances {
        for &seed in seeds {
            let cfg = config_for(inst, seed);
            let key = run_key(inst, seed, &params_echo(&cfg));
            if done.contains(&key) {
                skipped += 1;
            } else {
                jobs.push((inst, cfg));
            }
        }
    }

    let run = |(inst, cfg): &(&Instance, SolverConfig)| -> Result<bool, HarnessError> {
        match run_single(inst, cfg) {
            Ok((row, _, _)) => {
                let mut w = writer.lock().unwrap();
                w.serialize(&row)?;
                w.flush().map_err(io_err(out))?;
                Ok(true)
            }
            Err(e) => {
                log::warn!("{} seed {}: {e}", inst.name(), cfg.seed);
                Ok(false)
            }
        }
    };
    let outcomes: Vec<Result<bool, HarnessError>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| jobs.par_iter().map(run).collect())
    } else {
        jobs.iter().map(run).collect()
    };
    let mut summary = SweepSummary {
        skipped,
        ..Default::default()
    };
    for o in outcomes {
        if o? {
            summary.ran += 1;
        } else {
            summary.failed += 1;
        }
    }
    Ok(summary)
}

/// Best-known profits keyed by instance name, read from a CSV with columns
/// `instance,best`.
pub fn read_reference(path: &Path) -> Result<HashMap<String, f64>, HarnessError> {
    #[derive(Deserialize)]
    struct Row {
        instance: String,
        best: f64,
    }
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = HashMap::new();
    for row in rdr.deserialize::<Row>() {
        let row = row?;
        out.insert(row.instance.trim_end_matches(".thop").to_string(), row.best);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub instance: String,
    pub runs: usize,
    pub mean: f64,
    pub best: f64,
    pub reference: Option<f64>,
    /// `mean / reference`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateReport {
    pub rows: Vec<AggregateRow>,
    /// Instances without a reference value.
    pub missing_reference: Vec<String>,
}

impl AggregateReport {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Per-instance mean and best profit, and the approximation ratio against
/// the reference table. Rows are sorted by instance name.
pub fn aggregate(results: &[RunResult], reference: &HashMap<String, f64>) -> AggregateReport {
    let mut by_instance: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in results {
        by_instance.entry(r.instance.as_str()).or_default().push(r.profit);
    }
    let mut report = AggregateReport::default();
    for (name, profits) in by_instance {
        let mean = profits.iter().sum::<f64>() / profits.len() as f64;
        let best = profits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let reference = reference.get(name).copied();
        let ratio = match reference {
            Some(r) if r > 0.0 => Some(mean / r),
            Some(_) => Some(if mean > 0.0 { f64::INFINITY } else { 1.0 }),
            None => {
                log::warn!("no reference value for {name}; ratio omitted");
                report.missing_reference.push(name.to_string());
                None
            }
        };
        report.rows.push(AggregateRow {
            instance: name.to_string(),
            runs: profits.len(),
            mean,
            best,
            reference,
            ratio,
        });
    }
    report
}

/// Route geometry for plotting: one row per leg with the knapsack weight
/// carried on it, plus `start` and `end` marker rows.
pub fn export_plot_data(inst: &Instance, sol: &Solution) -> Result<String, HarnessError> {
    let ev = evaluate(inst, &sol.route, &sol.plan, true)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "from", "to", "x1", "y1", "x2", "y2", "weight"])?;
    let coord = |c: usize| inst.coords()[c];
    let marker = |w: &mut csv::Writer<Vec<u8>>, kind: &str, c: usize| -> Result<(), csv::Error> {
        let (x, y) = coord(c);
        w.write_record([
            kind.to_string(),
            (c + 1).to_string(),
            (c + 1).to_string(),
            x.to_string(),
            y.to_string(),
            x.to_string(),
            y.to_string(),
            String::new(),
        ])
    };
    marker(&mut w, "start", inst.start())?;
    for pair in ev.legs.windows(2) {
        let (a, b) = (pair[0].city, pair[1].city);
        let ((x1, y1), (x2, y2)) = (coord(a), coord(b));
        w.write_record([
            "segment".to_string(),
            (a + 1).to_string(),
            (b + 1).to_string(),
            x1.to_string(),
            y1.to_string(),
            x2.to_string(),
            y2.to_string(),
            pair[0].weight_after.to_string(),
        ])?;
    }
    marker(&mut w, "end", inst.end())?;
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parameter overrides read from a `key=value` profile.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamProfile {
    pub ants: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub local_search: Option<LocalSearch>,
    pub ptries: Option<u32>,
    pub exponents: Option<Exponents>,
    pub perturbation_width: Option<f64>,
}

/// Parses three comma-separated exponents `A,B,C`.
pub fn parse_exponents(s: &str) -> Result<Exponents, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad exponent `{p}`")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [profit, weight, distance] => Ok(Exponents {
            profit,
            weight,
            distance,
        }),
        _ => Err(format!("expected three exponents, got `{s}`")),
    }
}

impl ParamProfile {
    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse(text: &str, path: &Path) -> Result<ParamProfile, HarnessError> {
        let mut p = ParamProfile::default();
        for (idx, raw) in text.lines().enumerate() {
            let err = |msg: String| HarnessError::Profile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg,
            };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad number `{v}` for {key}")));
            match key {
                "ants" => p.ants = Some(value.parse().map_err(|_| err(format!("bad ant count `{value}`")))?),
                "alpha" => p.alpha = Some(num(value)?),
                "beta" => p.beta = Some(num(value)?),
                "rho" => p.rho = Some(num(value)?),
                "localsearch" | "local_search" => {
                    p.local_search = Some(value.parse().map_err(|e| err(format!("{e}")))?)
                }
                "ptries" => p.ptries = Some(value.parse().map_err(|_| err(format!("bad ptries `{value}`")))?),
                "pack_exponents" => p.exponents = Some(parse_exponents(value).map_err(err)?),
                "pack_width" => p.perturbation_width = Some(num(value)?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<ParamProfile, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        ParamProfile::parse(&text, path)
    }

    /// Finds `<group>.params` (or `<group>.txt`) in `dir` for the instance.
    pub fn for_instance(dir: &Path, id: &InstanceId) -> Result<Option<ParamProfile>, HarnessError> {
        for ext in ["params", "txt"] {
            let path = dir.join(format!("{}.{ext}", id.group()));
            if path.exists() {
                return ParamProfile::load(&path).map(Some);
            }
        }
        Ok(None)
    }

    pub fn apply(&self, cfg: &mut SolverConfig) {
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
        if let Some(v) = self.local_search {
            cfg.aco.local_search = v;
        }
        if let Some(v) = self.ptries {
            cfg.packing.ptries = v;
        }
        if let Some(v) = self.exponents {
            cfg.packing.exponents = v;
        }
        if let Some(v) = self.perturbation_width {
            cfg.packing.perturbation_width = v;
        }
    }
}

/// Logs a warning for each parameter outside the standard tuning ranges.
pub fn warn_out_of_range(cfg: &SolverConfig) -> Vec<String> {
    let issues = cfg.aco.out_of_range();
    for msg in &issues {
        log::warn!("parameter outside the tuning range: {msg}");
    }
    issues
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut f = File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))
}

//! The mixed-integer nonlinear model of the ThOP: lifting solutions into
//! model variables, checking every constraint family, and exporting the
//! model with Big-M linearised weight recurrences.
//!
//! Families are numbered as in the model:
//!
//! | # | constraint |
//! |---|------------|
//! | 1 | `Σ w_k z_k <= W` |
//! | 2 | `y_i >= z_k` for `k ∈ I_i` |
//! | 3 | `y_i <= Σ_{k ∈ I_i} z_k` for `i ∉ {1, n}` |
//! | 4 | `y_1 = y_n = 1` |
//! | 5 | `Σ_j x_ij = y_i` for `i ≠ n` |
//! | 6 | `Σ_i x_ij = y_j` for `j ≠ 1` |
//! | 7 | `q_j >= (q_i + Σ_{k ∈ I_j} w_k z_k) · x_ij` |
//! | 8 | `t_j >= (t_i + d_ij / (vmax - ν q_i)) · x_ij` |
//! | 9-11 | `x`, `y`, `z` binary |
//! | 12 | `0 <= q_i <= W` |
//! | 13 | `0 <= t_i <= T` |
//!
//! The arc set `A` holds every `(i, j)` with `i ≠ n`, `j ≠ 1` and `i ≠ j`.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::error::EvalError;
use crate::eval::{evaluate, PackingPlan, Route, EPS};
use crate::instance::Instance;

/// Iterates the arc set `A` in row-major order.
pub fn arcs(inst: &Instance) -> impl Iterator<Item = (usize, usize)> + '_ {
    let (start, end) = (inst.start(), inst.end());
    (0..inst.n())
        .filter(move |&i| i != end)
        .flat_map(move |i| (0..inst.n()).filter(move |&j| j != start && j != i).map(move |j| (i, j)))
}

/// Values for every model variable. Binary variables are stored as reals so
/// that fractional assignments can be checked too.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVariables {
    n: usize,
    x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    /// Knapsack weight after leaving each city.
    pub q: Vec<f64>,
    /// Arrival time at each city.
    pub t: Vec<f64>,
}

impl ModelVariables {
    /// All-zero assignment.
    pub fn zeros(inst: &Instance) -> Self {
        let n = inst.n();
        ModelVariables {
            n,
            x: vec![0.0; n * n],
            y: vec![0.0; n],
            z: vec![0.0; inst.m()],
            q: vec![0.0; n],
            t: vec![0.0; n],
        }
    }

    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.x[i * self.n + j]
    }

    pub fn set_x(&mut self, i: usize, j: usize, v: f64) {
        self.x[i * self.n + j] = v;
    }
}

/// Big-M constants for the linearised recurrences.
#[derive(Debug, Clone, PartialEq)]
pub struct BigM {
    n: usize,
    /// `W + Σ_{k ∈ I_j} w_k` per city `j`.
    pub weight: Vec<f64>,
    time: Vec<f64>,
}

impl BigM {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let weight = (0..n)
            .map(|j| inst.capacity() + inst.items_at(j).iter().map(|&k| inst.item(k).weight).sum::<f64>())
            .collect();
        let mut time = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                time[i * n + j] = inst.max_time() + inst.d(i, j) as f64 / inst.min_speed();
            }
        }
        BigM { n, weight, time }
    }

    /// `T + d_ij / vmin`.
    pub fn time(&self, i: usize, j: usize) -> f64 {
        self.time[i * self.n + j]
    }
}

/// Maps a feasible solution onto model variables.
pub fn lift_solution(
    inst: &Instance,
    route: &Route,
    plan: &PackingPlan,
) -> Result<ModelVariables, EvalError> {
    evaluate(inst, route, plan, true)?;
    lift_solution_unchecked(inst, route, plan)
}

/// Like [`lift_solution`] but also lifts infeasible solutions, so the
/// verifier can report which families they break.
pub fn lift_solution_unchecked(
    inst: &Instance,
    route: &Route,
    plan: &PackingPlan,
) -> Result<ModelVariables, EvalError> {
    let ev = evaluate(inst, route, plan, false)?;
    let mut vars = ModelVariables::zeros(inst);
    for w in route.cities().windows(2) {
        vars.set_x(w[0], w[1], 1.0);
    }
    for leg in &ev.legs {
        vars.y[leg.city] = 1.0;
        vars.q[leg.city] = leg.weight_after;
        vars.t[leg.city] = leg.arrival;
    }
    for k in plan.picked() {
        vars.z[k] = 1.0;
    }
    Ok(vars)
}

/// Constraint families of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Capacity,
    PickRequiresVisit,
    VisitRequiresPick,
    EndpointsVisited,
    OutDegree,
    InDegree,
    WeightRecurrence,
    TimeRecurrence,
    ArcDomain,
    VisitDomain,
    PickDomain,
    WeightBounds,
    TimeBounds,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Capacity,
        Family::PickRequiresVisit,
        Family::VisitRequiresPick,
        Family::EndpointsVisited,
        Family::OutDegree,
        Family::InDegree,
        Family::WeightRecurrence,
        Family::TimeRecurrence,
        Family::ArcDomain,
        Family::VisitDomain,
        Family::PickDomain,
        Family::WeightBounds,
        Family::TimeBounds,
    ];

    /// Constraint number in the model, 1 to 13.
    pub fn number(self) -> u8 {
        Family::ALL.iter().position(|&f| f == self).unwrap() as u8 + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Capacity => "capacity",
            Family::PickRequiresVisit => "pick implies visit",
            Family::VisitRequiresPick => "visit implies pick",
            Family::EndpointsVisited => "endpoints visited",
            Family::OutDegree => "out-degree",
            Family::InDegree => "in-degree",
            Family::WeightRecurrence => "weight recurrence",
            Family::TimeRecurrence => "time recurrence",
            Family::ArcDomain => "x binary",
            Family::VisitDomain => "y binary",
            Family::PickDomain => "z binary",
            Family::WeightBounds => "weight bounds",
            Family::TimeBounds => "time bounds",
        };
        write!(f, "({}) {}", self.number(), name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub family: Family,
    /// Description of the first violated index, if any.
    pub violation: Option<String>,
}

impl FamilyResult {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub results: Vec<FamilyResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(FamilyResult::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &FamilyResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn get(&self, family: Family) -> &FamilyResult {
        self.results.iter().find(|r| r.family == family).unwrap()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.violation {
                None => writeln!(f, "PASS {}", r.family)?,
                Some(v) => writeln!(f, "FAIL {}: {}", r.family, v)?,
            }
        }
        Ok(())
    }
}

fn is_binary(v: f64) -> bool {
    v.abs() <= EPS || (v - 1.0).abs() <= EPS
}

/// Checks every constraint family independently with tolerance `EPS`.
/// Indices in violation messages are one-based.
pub fn verify(inst: &Instance, vars: &ModelVariables) -> VerificationReport {
    let n = inst.n();
    let (start, end) = (inst.start(), inst.end());
    let item_load = |j: usize| -> f64 {
        inst.items_at(j)
            .iter()
            .fold(0.0, |acc, &k| acc + inst.item(k).weight * vars.z[k])
    };
    let check = |family: Family| -> Option<String> {
        match family {
            Family::Capacity => {
                let w: f64 = (0..inst.m()).map(|k| inst.item(k).weight * vars.z[k]).sum();
                (w > inst.capacity() + EPS).then(|| format!("total weight {w} > W = {}", inst.capacity()))
            }
            Family::PickRequiresVisit => (0..inst.m()).find_map(|k| {
                let c = inst.item(k).city;
                (vars.y[c] < vars.z[k] - EPS)
                    .then(|| format!("item {}: z = {} but y_{} = {}", k + 1, vars.z[k], c + 1, vars.y[c]))
            }),
            Family::VisitRequiresPick => (0..n).filter(|&i| i != start && i != end).find_map(|i| {
                let picks: f64 = inst.items_at(i).iter().map(|&k| vars.z[k]).sum();
                (vars.y[i] > picks + EPS)
                    .then(|| format!("city {}: y = {} but {} items picked", i + 1, vars.y[i], picks))
            }),
            Family::EndpointsVisited => [start, end].into_iter().find_map(|i| {
                ((vars.y[i] - 1.0).abs() > EPS).then(|| format!("y_{} = {}", i + 1, vars.y[i]))
            }),
            Family::OutDegree => (0..n).filter(|&i| i != end).find_map(|i| {
                let out: f64 = (0..n).filter(|&j| j != start && j != i).map(|j| vars.x(i, j)).sum();
                ((out - vars.y[i]).abs() > EPS)
                    .then(|| format!("city {}: out-degree {} != y = {}", i + 1, out, vars.y[i]))
            }),
            Family::InDegree => (0..n).filter(|&j| j != start).find_map(|j| {
                let inc: f64 = (0..n).filter(|&i| i != end && i != j).map(|i| vars.x(i, j)).sum();
                ((inc - vars.y[j]).abs() > EPS)
                    .then(|| format!("city {}: in-degree {} != y = {}", j + 1, inc, vars.y[j]))
            }),
            Family::WeightRecurrence => arcs(inst).find_map(|(i, j)| {
                let x = vars.x(i, j);
                let rhs = if x == 0.0 { 0.0 } else { (vars.q[i] + item_load(j)) * x };
                (vars.q[j] < rhs - EPS).then(|| {
                    format!("arc ({}, {}): q_j = {} < {}", i + 1, j + 1, vars.q[j], rhs)
                })
            }),
            Family::TimeRecurrence => arcs(inst).find_map(|(i, j)| {
                let x = vars.x(i, j);
                if x == 0.0 {
                    return (vars.t[j] < -EPS).then(|| format!("t_{} = {} < 0", j + 1, vars.t[j]));
                }
                let v = inst.max_speed() - inst.nu() * vars.q[i];
                let leg = if v > 0.0 { inst.d(i, j) as f64 / v } else { f64::INFINITY };
                let rhs = (vars.t[i] + leg) * x;
                (!(vars.t[j] >= rhs - EPS)).then(|| {
                    format!("arc ({}, {}): t_j = {} < {}", i + 1, j + 1, vars.t[j], rhs)
                })
            }),
            Family::ArcDomain => arcs(inst).find_map(|(i, j)| {
                (!is_binary(vars.x(i, j))).then(|| format!("x_{}_{} = {}", i + 1, j + 1, vars.x(i, j)))
            }),
            Family::VisitDomain => (0..n).find_map(|i| {
                (!is_binary(vars.y[i])).then(|| format!("y_{} = {}", i + 1, vars.y[i]))
            }),
            Family::PickDomain => (0..inst.m()).find_map(|k| {
                (!is_binary(vars.z[k])).then(|| format!("z_{} = {}", k + 1, vars.z[k]))
            }),
            Family::WeightBounds => (0..n).find_map(|i| {
                let q = vars.q[i];
                (!(q >= -EPS && q <= inst.capacity() + EPS))
                    .then(|| format!("q_{} = {} outside [0, {}]", i + 1, q, inst.capacity()))
            }),
            Family::TimeBounds => (0..n).find_map(|i| {
                let t = vars.t[i];
                (!(t >= -EPS && t <= inst.max_time() + EPS))
                    .then(|| format!("t_{} = {} outside [0, {}]", i + 1, t, inst.max_time()))
            }),
        }
    };
    VerificationReport {
        results: Family::ALL
            .iter()
            .map(|&family| FamilyResult {
                family,
                violation: check(family),
            })
            .collect(),
    }
}

fn push_term(out: &mut String, first: &mut bool, coef: f64, var: &str) {
    if *first {
        if coef < 0.0 {
            let _ = write!(out, "- {} {}", -coef, var);
        } else {
            let _ = write!(out, "{coef} {var}");
        }
        *first = false;
    } else if coef < 0.0 {
        let _ = write!(out, " - {} {}", -coef, var);
    } else {
        let _ = write!(out, " + {coef} {var}");
    }
}

/// Writes the model in an LP-style text format.
///
/// The nonlinear time recurrences are emitted as `\`-comments since they
/// have no linear form. Variables are named `x_i_j`, `y_i`, `z_k`, `q_i`,
/// `t_i` with one-based indices.
pub fn export_model(inst: &Instance) -> String {
    let n = inst.n();
    let (start, end) = (inst.start(), inst.end());
    let big = BigM::new(inst);
    let mut out = String::new();
    let _ = writeln!(out, "\\ ThOP model for {}", inst.name());
    let _ = writeln!(out, "\\ n = {n}, m = {}, W = {}, T = {}", inst.m(), inst.capacity(), inst.max_time());
    let _ = writeln!(out, "\\ vmin = {}, vmax = {}, nu = {}", inst.min_speed(), inst.max_speed(), inst.nu());

    out.push_str("Maximize\n obj: ");
    let mut first = true;
    for it in inst.items() {
        push_term(&mut out, &mut first, it.profit, &format!("z_{}", it.id + 1));
    }
    if first {
        out.push('0');
    }
    out.push_str("\nSubject To\n");

    let mut line = |name: String, terms: Vec<(f64, String)>, sense: &str, rhs: f64| {
        let _ = write!(out, " {name}: ");
        let mut first = true;
        for (c, v) in &terms {
            push_term(&mut out, &mut first, *c, v);
        }
        if first {
            out.push('0');
        }
        let _ = writeln!(out, " {sense} {rhs}");
    };

    line(
        "c1".into(),
        inst.items().iter().map(|it| (it.weight, format!("z_{}", it.id + 1))).collect(),
        "<=",
        inst.capacity(),
    );
    for it in inst.items() {
        line(
            format!("c2_{}_{}", it.city + 1, it.id + 1),
            vec![(1.0, format!("y_{}", it.city + 1)), (-1.0, format!("z_{}", it.id + 1))],
            ">=",
            0.0,
        );
    }
    for i in (0..n).filter(|&i| i != start && i != end) {
        let mut terms = vec![(1.0, format!("y_{}", i + 1))];
        terms.extend(inst.items_at(i).iter().map(|&k| (-1.0, format!("z_{}", k + 1))));
        line(format!("c3_{}", i + 1), terms, "<=", 0.0);
    }
    line(format!("c4_{}", start + 1), vec![(1.0, format!("y_{}", start + 1))], "=", 1.0);
    line(format!("c4_{}", end + 1), vec![(1.0, format!("y_{}", end + 1))], "=", 1.0);
    for i in (0..n).filter(|&i| i != end) {
        let mut terms: Vec<(f64, String)> = (0..n)
            .filter(|&j| j != start && j != i)
            .map(|j| (1.0, format!("x_{}_{}", i + 1, j + 1)))
            .collect();
        terms.push((-1.0, format!("y_{}", i + 1)));
        line(format!("c5_{}", i + 1), terms, "=", 0.0);
    }
    for j in (0..n).filter(|&j| j != start) {
        let mut terms: Vec<(f64, String)> = (0..n)
            .filter(|&i| i != end && i != j)
            .map(|i| (1.0, format!("x_{}_{}", i + 1, j + 1)))
            .collect();
        terms.push((-1.0, format!("y_{}", j + 1)));
        line(format!("c6_{}", j + 1), terms, "=", 0.0);
    }
    // q_j - q_i - Σ w_k z_k - M'_j x_ij >= -M'_j
    for (i, j) in arcs(inst) {
        let mut terms = vec![(1.0, format!("q_{}", j + 1)), (-1.0, format!("q_{}", i + 1))];
        terms.extend(inst.items_at(j).iter().map(|&k| (-inst.item(k).weight, format!("z_{}", k + 1))));
        terms.push((-big.weight[j], format!("x_{}_{}", i + 1, j + 1)));
        line(format!("c14_{}_{}", i + 1, j + 1), terms, ">=", -big.weight[j]);
    }

    out.push_str("\\ Nonlinear time recurrences (not representable as linear rows):\n");
    for (i, j) in arcs(inst) {
        let _ = writeln!(
            out,
            "\\ c15_{a}_{b}: t_{b} >= t_{a} + {d} / ({vmax} - {nu} q_{a}) - {m} (1 - x_{a}_{b})",
            a = i + 1,
            b = j + 1,
            d = inst.d(i, j),
            vmax = inst.max_speed(),
            nu = inst.nu(),
            m = big.time(i, j)
        );
    }

    out.push_str("Bounds\n");
    for i in 0..n {
        let _ = writeln!(out, " 0 <= q_{} <= {}", i + 1, inst.capacity());
    }
    for i in 0..n {
        let _ = writeln!(out, " 0 <= t_{} <= {}", i + 1, inst.max_time());
    }
    out.push_str("Binaries\n");
    for (i, j) in arcs(inst) {
        let _ = writeln!(out, " x_{}_{}", i + 1, j + 1);
    }
    for i in 0..n {
        let _ = writeln!(out, " y_{}", i + 1);
    }
    for k in 0..inst.m() {
        let _ = writeln!(out, " z_{}", k + 1);
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub name: String,
    pub terms: Vec<(f64, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Parsed contents of an exported model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedModel {
    pub objective: Vec<(f64, String)>,
    pub rows: Vec<LinearRow>,
    /// Names of the annotated nonlinear rows.
    pub nonlinear: Vec<String>,
    pub bounds: Vec<(f64, String, f64)>,
    pub binaries: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("model line {line}: {msg}")]
pub struct ModelParseError {
    pub line: usize,
    pub msg: String,
}

/// Reads the text written by [`export_model`].
pub fn parse_model(text: &str) -> Result<ParsedModel, ModelParseError> {
    #[derive(PartialEq)]
    enum Sec {
        None,
        Obj,
        Rows,
        Bounds,
        Bin,
        End,
    }
    let mut sec = Sec::None;
    let mut model = ParsedModel::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: &str| ModelParseError {
            line: line_no,
            msg: msg.to_string(),
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            let comment = comment.trim();
            if let Some((name, _)) = comment.split_once(':') {
                if name.starts_with("c15_") {
                    model.nonlinear.push(name.to_string());
                }
            }
            continue;
        }
        match line {
            "Maximize" => {
                sec = Sec::Obj;
                continue;
            }
            "Subject To" => {
                sec = Sec::Rows;
                continue;
            }
            "Bounds" => {
                sec = Sec::Bounds;
                continue;
            }
            "Binaries" => {
                sec = Sec::Bin;
                continue;
            }
            "End" => {
                sec = Sec::End;
                continue;
            }
            _ => {}
        }
        match sec {
            Sec::Obj => {
                let (_, expr) = line.split_once(':').ok_or_else(|| err("objective needs a name"))?;
                model.objective = parse_terms(expr).map_err(|m| err(&m))?;
            }
            Sec::Rows => {
                let (name, rest) = line.split_once(':').ok_or_else(|| err("row needs a name"))?;
                let (sense, pos, len) = ["<=", ">=", "="]
                    .iter()
                    .find_map(|op| rest.find(op).map(|p| (*op, p, op.len())))
                    .ok_or_else(|| err("row needs <=, >= or ="))?;
                let terms = parse_terms(&rest[..pos]).map_err(|m| err(&m))?;
                let rhs: f64 = rest[pos + len..].trim().parse().map_err(|_| err("bad right-hand side"))?;
                model.rows.push(LinearRow {
                    name: name.trim().to_string(),
                    terms,
                    sense: match sense {
                        "<=" => Sense::Le,
                        ">=" => Sense::Ge,
                        _ => Sense::Eq,
                    },
                    rhs,
                });
            }
            Sec::Bounds => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 5 || parts[1] != "<=" || parts[3] != "<=" {
                    return Err(err("bounds must read `lo <= var <= hi`"));
                }
                let lo = parts[0].parse().map_err(|_| err("bad lower bound"))?;
                let hi = parts[4].parse().map_err(|_| err("bad upper bound"))?;
                model.bounds.push((lo, parts[2].to_string(), hi));
            }
            Sec::Bin => model.binaries.push(line.to_string()),
            Sec::None | Sec::End => return Err(err("content outside a section")),
        }
    }
    if sec != Sec::End {
        return Err(ModelParseError {
            line: text.lines().count(),
            msg: "missing End".into(),
        });
    }
    Ok(model)
}

fn parse_terms(expr: &str) -> Result<Vec<(f64, String)>, String> {
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    if tokens == ["0"] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut sign = 1.0;
    while i < tokens.len() {
        match tokens[i] {
            "+" => {
                sign = 1.0;
                i += 1;
                continue;
            }
            "-" => {
                sign = -1.0;
                i += 1;
                continue;
            }
            _ => {}
        }
        let coef: f64 = tokens[i].parse().map_err(|_| format!("bad coefficient `{}`", tokens[i]))?;
        let var = tokens.get(i + 1).ok_or("coefficient without variable")?;
        terms.push((sign * coef, var.to_string()));
        sign = 1.0;
        i += 2;
    }
    Ok(terms)
}

/// Expected row counts of the exported model: `(linear rows, nonlinear rows)`.
pub fn model_row_counts(inst: &Instance) -> (usize, usize) {
    let n = inst.n();
    let arcs = arcs(inst).count();
    let linear = 1 + inst.m() + n.saturating_sub(2) + 2 + (n - 1) + (n - 1) + arcs;
    (linear, arcs)
}

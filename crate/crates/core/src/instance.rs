//! Benchmark instances: parsing, validation, the canonical writer and the
//! orienteering (OP) reduction.
//!
//! Cities and items are indexed from zero in memory. The file format and the
//! solution format use one-based indices; conversion happens at the I/O
//! boundary only. City `0` is the start and city `n - 1` the destination.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{EvalError, ParseError};

/// Integer travel distance (ceiling of the Euclidean distance).
pub type Distance = u64;

/// Instances with more cities than this get a sampled triangle check.
const EXHAUSTIVE_TRIANGLE_LIMIT: usize = 300;
const SAMPLED_TRIANGLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    /// Zero-based item index.
    pub id: usize,
    pub profit: f64,
    pub weight: f64,
    /// Zero-based city index, never the start or destination city.
    pub city: usize,
}

/// A validated, immutable ThOP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    knapsack_data_type: Option<String>,
    coords: Vec<(f64, f64)>,
    dist: Vec<Distance>,
    items: Vec<Item>,
    items_by_city: Vec<Vec<usize>>,
    capacity: f64,
    max_time: f64,
    min_speed: f64,
    max_speed: f64,
    nu: f64,
    triangle_ok: bool,
    extra: Vec<(String, String)>,
}

impl Instance {
    /// Builds an instance from its raw parts, validating every invariant.
    ///
    /// `items` must be ordered by id (`items[k].id == k`).
    pub fn new(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        items: Vec<Item>,
        capacity: f64,
        max_time: f64,
        min_speed: f64,
        max_speed: f64,
    ) -> Result<Self, ParseError> {
        let n = coords.len();
        if n < 2 {
            return Err(ParseError::InvalidParameters(format!(
                "need at least 2 cities, got {n}"
            )));
        }
        if !(capacity > 0.0) || !capacity.is_finite() {
            return Err(ParseError::InvalidParameters(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        if !(max_time > 0.0) {
            return Err(ParseError::InvalidParameters(format!(
                "max time must be positive, got {max_time}"
            )));
        }
        if !(min_speed > 0.0) || max_speed < min_speed {
            return Err(ParseError::InvalidParameters(format!(
                "speeds must satisfy vmax >= vmin > 0, got vmin={min_speed} vmax={max_speed}"
            )));
        }
        let mut items_by_city = vec![Vec::new(); n];
        for (k, item) in items.iter().enumerate() {
            if item.id != k {
                return Err(ParseError::InvalidParameters(format!(
                    "item ids must be sequential, found {} at position {k}",
                    item.id
                )));
            }
            if item.city >= n {
                return Err(ParseError::UnknownCity {
                    line: 0,
                    item: k + 1,
                    city: item.city + 1,
                });
            }
            if item.city == 0 || item.city == n - 1 {
                return Err(ParseError::ItemAtDepot {
                    line: 0,
                    item: k + 1,
                    city: item.city + 1,
                });
            }
            if !(item.weight > 0.0) {
                return Err(ParseError::NegativeWeight {
                    line: 0,
                    item: k + 1,
                    weight: item.weight,
                });
            }
            if !(item.profit >= 0.0) {
                return Err(ParseError::NegativeProfit {
                    line: 0,
                    item: k + 1,
                    profit: item.profit,
                });
            }
            items_by_city[item.city].push(k);
        }
        let dist = ceil_2d_matrix(&coords);
        let mut inst = Instance {
            name: name.into(),
            knapsack_data_type: None,
            coords,
            dist,
            items,
            items_by_city,
            capacity,
            max_time,
            min_speed,
            max_speed,
            nu: (max_speed - min_speed) / capacity,
            triangle_ok: true,
            extra: Vec::new(),
        };
        inst.triangle_ok = inst.check_triangle_inequality();
        if !inst.triangle_ok {
            log::warn!(
                "instance {}: distances violate the triangle inequality; route pruning disabled",
                inst.name
            );
        }
        Ok(inst)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of cities.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Number of items.
    pub fn m(&self) -> usize {
        self.items.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn end(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, k: usize) -> &Item {
        &self.items[k]
    }

    /// Item ids located at `city`, in increasing id order.
    pub fn items_at(&self, city: usize) -> &[usize] {
        &self.items_by_city[city]
    }

    /// Knapsack capacity W.
    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Travel time limit T.
    pub fn max_time(&self) -> f64 {
        self.max_time
    }

    pub fn min_speed(&self) -> f64 {
        self.min_speed
    }

    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    /// Speed decay per unit of carried weight, (vmax - vmin) / W.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Whether the distance matrix passed the triangle-inequality check.
    pub fn triangle_ok(&self) -> bool {
        self.triangle_ok
    }

    pub fn knapsack_data_type(&self) -> Option<&str> {
        self.knapsack_data_type.as_deref()
    }

    /// Header entries the parser did not interpret, in file order.
    pub fn extra_headers(&self) -> &[(String, String)] {
        &self.extra
    }

    pub fn total_weight(&self) -> f64 {
        self.items.iter().map(|it| it.weight).sum()
    }

    pub fn total_profit(&self) -> f64 {
        self.items.iter().map(|it| it.profit).sum()
    }

    /// Unchecked distance lookup for hot loops.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Distance {
        self.dist[i * self.coords.len() + j]
    }

    /// Distance between two cities, with index validation.
    pub fn distance(&self, i: usize, j: usize) -> Result<Distance, EvalError> {
        let n = self.n();
        if i >= n {
            return Err(EvalError::CityOutOfRange(i));
        }
        if j >= n {
            return Err(EvalError::CityOutOfRange(j));
        }
        Ok(self.d(i, j))
    }

    /// Reduces the instance to an orienteering instance: constant unit
    /// speed and a knapsack that can hold every item.
    pub fn to_op_instance(&self) -> Instance {
        let mut op = self.clone();
        op.max_speed = 1.0;
        op.min_speed = 1.0;
        op.capacity = self.total_weight() + 1.0;
        op.nu = 0.0;
        op
    }

    /// Copy with a different time limit.
    pub fn with_max_time(&self, max_time: f64) -> Result<Instance, ParseError> {
        if !(max_time > 0.0) {
            return Err(ParseError::InvalidParameters(format!(
                "max time must be positive, got {max_time}"
            )));
        }
        let mut out = self.clone();
        out.max_time = max_time;
        Ok(out)
    }

    /// Copy with a different name.
    pub fn with_name(&self, name: impl Into<String>) -> Instance {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    /// Parses the text of an instance file.
    pub fn parse(text: &str) -> Result<Instance, ParseError> {
        parse_instance(text)
    }

    /// Canonical text form, readable by [`Instance::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "PROBLEM NAME:\t{}", self.name);
        if let Some(kind) = &self.knapsack_data_type {
            let _ = writeln!(out, "KNAPSACK DATA TYPE:\t{kind}");
        }
        let _ = writeln!(out, "DIMENSION:\t{}", self.n());
        let _ = writeln!(out, "NUMBER OF ITEMS:\t{}", self.m());
        let _ = writeln!(out, "CAPACITY OF KNAPSACK:\t{}", self.capacity);
        let _ = writeln!(out, "MAX TIME:\t{}", self.max_time);
        let _ = writeln!(out, "MIN SPEED:\t{}", self.min_speed);
        let _ = writeln!(out, "MAX SPEED:\t{}", self.max_speed);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE:\tCEIL_2D");
        for (k, v) in &self.extra {
            let _ = writeln!(out, "{k}:\t{v}");
        }
        let _ = writeln!(out, "NODE_COORD_SECTION\t(INDEX, X, Y):");
        for (i, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}", i + 1, x, y);
        }
        let _ = writeln!(
            out,
            "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):"
        );
        for it in &self.items {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                it.id + 1,
                it.profit,
                it.weight,
                it.city + 1
            );
        }
        out
    }

    fn check_triangle_inequality(&self) -> bool {
        let n = self.n();
        let violates = |i: usize, j: usize, k: usize| self.d(i, k) > self.d(i, j) + self.d(j, k);
        if n <= EXHAUSTIVE_TRIANGLE_LIMIT {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if violates(i, j, k) {
                            return false;
                        }
                    }
                }
            }
            true
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7431_616e_676c_65);
            (0..SAMPLED_TRIANGLES).all(|_| {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                !violates(i, j, k)
            })
        }
    }
}

/// Ceiling of the Euclidean distance between two points.
pub fn ceil_2d(a: (f64, f64), b: (f64, f64)) -> Distance {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt().ceil() as Distance
}

fn ceil_2d_matrix(coords: &[(f64, f64)]) -> Vec<Distance> {
    let n = coords.len();
    let mut dist = vec![0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = ceil_2d(coords[i], coords[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    dist
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Items,
}

fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut name = String::new();
    let mut kind = None;
    let mut dimension: Option<usize> = None;
    let mut num_items: Option<usize> = None;
    let mut capacity: Option<f64> = None;
    let mut max_time: Option<f64> = None;
    let mut min_speed: Option<f64> = None;
    let mut max_speed: Option<f64> = None;
    let mut extra = Vec::new();
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut raw_items: Vec<(usize, f64, f64, usize)> = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line == "EOF" {
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            section = Section::Coords;
            continue;
        }
        if line.starts_with("ITEMS SECTION") {
            check_count(line_no, "cities", dimension, coords.len())?;
            section = Section::Items;
            continue;
        }
        match section {
            Section::Header => {
                let (key, value) = line.split_once(':').ok_or_else(|| ParseError::MalformedHeader {
                    line: line_no,
                    text: line.to_string(),
                })?;
                let key = key.trim();
                let value = value.trim();
                let bad = || ParseError::InvalidValue {
                    line: line_no,
                    key: key.to_string(),
                };
                match key {
                    "PROBLEM NAME" => name = value.to_string(),
                    "KNAPSACK DATA TYPE" => kind = Some(value.to_string()),
                    "DIMENSION" => dimension = Some(value.parse().map_err(|_| bad())?),
                    "NUMBER OF ITEMS" => num_items = Some(value.parse().map_err(|_| bad())?),
                    "CAPACITY OF KNAPSACK" => capacity = Some(parse_f64(value).ok_or_else(bad)?),
                    "MAX TIME" => max_time = Some(parse_f64(value).ok_or_else(bad)?),
                    "MIN SPEED" => min_speed = Some(parse_f64(value).ok_or_else(bad)?),
                    "MAX SPEED" => max_speed = Some(parse_f64(value).ok_or_else(bad)?),
                    "EDGE_WEIGHT_TYPE" => {
                        if value != "CEIL_2D" {
                            log::warn!("edge weight type {value} treated as CEIL_2D");
                        }
                    }
                    _ => extra.push((key.to_string(), value.to_string())),
                }
            }
            Section::Coords => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                let malformed = || ParseError::MalformedEntry {
                    line: line_no,
                    section: "coordinate",
                    text: line.to_string(),
                };
                if fields.len() != 3 {
                    return Err(malformed());
                }
                let index: usize = fields[0].parse().map_err(|_| malformed())?;
                let x = parse_f64(fields[1]).ok_or_else(malformed)?;
                let y = parse_f64(fields[2]).ok_or_else(malformed)?;
                if index != coords.len() + 1 {
                    return Err(ParseError::BadIndex {
                        line: line_no,
                        what: "city",
                        expected: coords.len() + 1,
                        found: index,
                    });
                }
                coords.push((x, y));
            }
            Section::Items => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                let malformed = || ParseError::MalformedEntry {
                    line: line_no,
                    section: "item",
                    text: line.to_string(),
                };
                if fields.len() != 4 {
                    return Err(malformed());
                }
                let index: usize = fields[0].parse().map_err(|_| malformed())?;
                let profit = parse_f64(fields[1]).ok_or_else(malformed)?;
                let weight = parse_f64(fields[2]).ok_or_else(malformed)?;
                let city: usize = fields[3].parse().map_err(|_| malformed())?;
                if index != raw_items.len() + 1 {
                    return Err(ParseError::BadIndex {
                        line: line_no,
                        what: "item",
                        expected: raw_items.len() + 1,
                        found: index,
                    });
                }
                let n = coords.len();
                if city == 0 || city > n {
                    return Err(ParseError::UnknownCity {
                        line: line_no,
                        item: index,
                        city,
                    });
                }
                if city == 1 || city == n {
                    return Err(ParseError::ItemAtDepot {
                        line: line_no,
                        item: index,
                        city,
                    });
                }
                if !(weight > 0.0) {
                    return Err(ParseError::NegativeWeight {
                        line: line_no,
                        item: index,
                        weight,
                    });
                }
                if !(profit >= 0.0) {
                    return Err(ParseError::NegativeProfit {
                        line: line_no,
                        item: index,
                        profit,
                    });
                }
                raw_items.push((index, profit, weight, city));
            }
        }
    }

    if section == Section::Header {
        return Err(ParseError::MissingHeader("NODE_COORD_SECTION"));
    }
    if section == Section::Coords {
        check_count(last_line, "cities", dimension, coords.len())?;
    }
    check_count(last_line, "items", num_items, raw_items.len())?;
    let capacity = capacity.ok_or(ParseError::MissingHeader("CAPACITY OF KNAPSACK"))?;
    let max_time = max_time.ok_or(ParseError::MissingHeader("MAX TIME"))?;
    let min_speed = min_speed.ok_or(ParseError::MissingHeader("MIN SPEED"))?;
    let max_speed = max_speed.ok_or(ParseError::MissingHeader("MAX SPEED"))?;

    let items = raw_items
        .into_iter()
        .map(|(index, profit, weight, city)| Item {
            id: index - 1,
            profit,
            weight,
            city: city - 1,
        })
        .collect();
    let mut inst = Instance::new(name, coords, items, capacity, max_time, min_speed, max_speed)?;
    inst.knapsack_data_type = kind;
    inst.extra = extra;
    Ok(inst)
}

fn check_count(
    line: usize,
    what: &'static str,
    declared: Option<usize>,
    found: usize,
) -> Result<(), ParseError> {
    let declared = declared.ok_or(ParseError::MissingHeader(if what == "cities" {
        "DIMENSION"
    } else {
        "NUMBER OF ITEMS"
    }))?;
    if declared != found {
        return Err(ParseError::DimensionMismatch {
            line,
            what,
            declared,
            found,
        });
    }
    Ok(())
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Correlation type of item profits and weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnapsackType {
    /// Uncorrelated.
    Unc,
    /// Uncorrelated with similar weights.
    Usw,
    /// Bounded strongly correlated.
    Bsc,
}

impl KnapsackType {
    pub const ALL: [KnapsackType; 3] = [KnapsackType::Bsc, KnapsackType::Unc, KnapsackType::Usw];

    pub fn as_str(self) -> &'static str {
        match self {
            KnapsackType::Unc => "unc",
            KnapsackType::Usw => "usw",
            KnapsackType::Bsc => "bsc",
        }
    }
}

/// Benchmark identifier `XXX_YY_ZZZ_WW_TT`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceId {
    pub tsp_base: String,
    pub items_per_city: u32,
    pub knapsack_type: KnapsackType,
    /// Knapsack size class, e.g. `01`, `05`, `10` or `inf` for OP instances.
    pub knapsack_size: String,
    /// Time limit class, e.g. `01`, `02`, `03`.
    pub time_class: String,
}

impl InstanceId {
    /// Parameter-tuning group `XXX_YY_ZZZ`.
    pub fn group(&self) -> String {
        format!(
            "{}_{:02}_{}",
            self.tsp_base,
            self.items_per_city,
            self.knapsack_type.as_str()
        )
    }

    /// True for orienteering-mode identifiers (`WW = inf`).
    pub fn is_op(&self) -> bool {
        self.knapsack_size == "inf"
    }

    /// Extracts the identifier from a path such as `dir/eil51_01_bsc_05_02.thop`.
    pub fn from_path(path: &std::path::Path) -> Option<InstanceId> {
        path.file_stem()?.to_str()?.parse().ok()
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{:02}_{}_{}_{}",
            self.tsp_base,
            self.items_per_city,
            self.knapsack_type.as_str(),
            self.knapsack_size,
            self.time_class
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not of the form XXX_YY_ZZZ_WW_TT")]
pub struct InstanceIdError(pub String);

impl FromStr for InstanceId {
    type Err = InstanceIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || InstanceIdError(s.to_string());
        let s = s.strip_suffix(".thop").unwrap_or(s);
        let parts: Vec<&str> = s.split('_').collect();
        if parts.len() != 5 || parts[0].is_empty() {
            return Err(err());
        }
        let two_digits = |p: &str| p.len() == 2 && p.bytes().all(|b| b.is_ascii_digit());
        if !two_digits(parts[1]) || !two_digits(parts[4]) {
            return Err(err());
        }
        if !(two_digits(parts[3]) || parts[3] == "inf") {
            return Err(err());
        }
        let knapsack_type = match parts[2] {
            "unc" => KnapsackType::Unc,
            "usw" => KnapsackType::Usw,
            "bsc" => KnapsackType::Bsc,
            _ => return Err(err()),
        };
        Ok(InstanceId {
            tsp_base: parts[0].to_string(),
            items_per_city: parts[1].parse().map_err(|_| err())?,
            knapsack_type,
            knapsack_size: parts[3].to_string(),
            time_class: parts[4].to_string(),
        })
    }
}

/// TSP bases of the benchmark suite.
pub const TSP_BASES: [&str; 4] = ["eil51", "pr107", "a280", "dsj1000"];

/// All 432 identifiers of the ThOP benchmark suite.
pub fn benchmark_grid() -> Vec<InstanceId> {
    let mut out = Vec::with_capacity(432);
    for base in TSP_BASES {
        for ipc in [1, 3, 5, 10] {
            for kt in KnapsackType::ALL {
                for size in ["01", "05", "10"] {
                    for time in ["01", "02", "03"] {
                        out.push(InstanceId {
                            tsp_base: base.to_string(),
                            items_per_city: ipc,
                            knapsack_type: kt,
                            knapsack_size: size.to_string(),
                            time_class: time.to_string(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The 36 orienteering-mode identifiers `XXX_01_ZZZ_inf_TT`.
pub fn op_grid() -> Vec<InstanceId> {
    let mut out = Vec::with_capacity(36);
    for base in TSP_BASES {
        for kt in KnapsackType::ALL {
            for time in ["01", "02", "03"] {
                out.push(InstanceId {
                    tsp_base: base.to_string(),
                    items_per_city: 1,
                    knapsack_type: kt,
                    knapsack_size: "inf".to_string(),
                    time_class: time.to_string(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "PROBLEM NAME:\ttoy\n\
KNAPSACK DATA TYPE:\tuncorrelated\n\
DIMENSION:\t4\n\
NUMBER OF ITEMS:\t2\n\
CAPACITY OF KNAPSACK:\t3\n\
MAX TIME:\t10\n\
MIN SPEED:\t0.1\n\
MAX SPEED:\t1\n\
EDGE_WEIGHT_TYPE:\tCEIL_2D\n\
RENTING RATIO:\t0.5\n\
NODE_COORD_SECTION\t(INDEX, X, Y):\n\
1\t0\t0\n\
2\t3\t4\n\
3\t1\t1\n\
4\t6\t0\n\
ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):\n\
1\t10\t2\t2\n\
2\t5\t1\t3\n";

    #[test]
    fn parses_small_instance() {
        let inst = Instance::parse(SMALL).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.capacity(), 3.0);
        assert_eq!(inst.max_time(), 10.0);
        assert_eq!(inst.items_at(1), &[0]);
        assert_eq!(inst.items_at(2), &[1]);
        assert_eq!(
            inst.extra_headers(),
            &[("RENTING RATIO".to_string(), "0.5".to_string())]
        );
        assert!((inst.nu() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn distances_are_ceil_euclidean() {
        let inst = Instance::parse(SMALL).unwrap();
        assert_eq!(inst.distance(0, 1).unwrap(), 5);
        assert_eq!(inst.distance(0, 2).unwrap(), 2);
        assert_eq!(inst.distance(2, 0).unwrap(), 2);
        assert!(inst.distance(0, 4).is_err());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(inst.d(i, j), inst.d(j, i));
            }
        }
    }

    #[test]
    fn rejects_item_at_depot() {
        let text = SMALL.replace("2\t5\t1\t3", "2\t5\t1\t1");
        let err = Instance::parse(&text).unwrap_err();
        assert!(matches!(err, ParseError::ItemAtDepot { line: 18, item: 2, city: 1 }));
        assert!(err.to_string().contains("item 2 at depot city 1"));
        let text = SMALL.replace("2\t5\t1\t3", "2\t5\t1\t4");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::ItemAtDepot { city: 4, .. }
        ));
    }

    #[test]
    fn rejects_negative_weight() {
        let text = SMALL.replace("1\t10\t2\t2", "1\t10\t-2\t2");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::NegativeWeight { line: 17, .. }
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let text = SMALL.replace("DIMENSION:\t4", "DIMENSION:\t5");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::DimensionMismatch { what: "cities", declared: 5, found: 4, .. }
        ));
        let text = SMALL.replace("NUMBER OF ITEMS:\t2", "NUMBER OF ITEMS:\t3");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::DimensionMismatch { what: "items", .. }
        ));
    }

    #[test]
    fn rejects_malformed_header() {
        let text = SMALL.replace("MAX TIME:\t10", "MAX TIME 10");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::MalformedHeader { line: 6, .. }
        ));
        let text = SMALL.replace("MAX TIME:\t10", "MAX TIME:\tsoon");
        assert!(matches!(
            Instance::parse(&text).unwrap_err(),
            ParseError::InvalidValue { line: 6, .. }
        ));
    }

    #[test]
    fn canonical_writer_round_trips() {
        let inst = Instance::parse(SMALL).unwrap();
        let again = Instance::parse(&inst.to_text()).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn op_transform() {
        let inst = Instance::parse(SMALL).unwrap();
        let op = inst.to_op_instance();
        assert_eq!(op.max_speed(), 1.0);
        assert_eq!(op.min_speed(), 1.0);
        assert!(op.capacity() > inst.total_weight());
        assert_eq!(op.nu(), 0.0);
        assert_eq!(op.items(), inst.items());
        assert_eq!(op.coords(), inst.coords());
        assert_eq!(op.to_op_instance(), op);
    }

    #[test]
    fn detects_triangle_violation() {
        // CEIL_2D always satisfies it, so build a matrix by hand.
        let mut inst = Instance::parse(SMALL).unwrap();
        assert!(inst.triangle_ok());
        inst.dist[1] = 100;
        inst.dist[4] = 100;
        assert!(!inst.check_triangle_inequality());
    }

    #[test]
    fn instance_ids() {
        let id: InstanceId = "pr107_05_bsc_01_01".parse().unwrap();
        assert_eq!(id.tsp_base, "pr107");
        assert_eq!(id.items_per_city, 5);
        assert_eq!(id.knapsack_type, KnapsackType::Bsc);
        assert_eq!(id.group(), "pr107_05_bsc");
        assert_eq!(id.to_string(), "pr107_05_bsc_01_01");
        let op: InstanceId = "eil51_01_unc_inf_03.thop".parse().unwrap();
        assert!(op.is_op());
        assert!("eil51_1_unc_01_03".parse::<InstanceId>().is_err());
        assert!("eil51_01_xyz_01_03".parse::<InstanceId>().is_err());
        assert_eq!(benchmark_grid().len(), 432);
        assert_eq!(op_grid().len(), 36);
        for id in benchmark_grid().into_iter().chain(op_grid()) {
            assert_eq!(id.to_string().parse::<InstanceId>().unwrap(), id);
        }
    }
}

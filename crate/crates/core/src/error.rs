use thiserror::Error;

/// Errors raised while reading an instance file.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: malformed header entry `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: missing or invalid value for `{key}`")]
    InvalidValue { line: usize, key: String },
    #[error("missing required header `{0}`")]
    MissingHeader(&'static str),
    #[error("line {line}: malformed {section} entry `{text}`")]
    MalformedEntry {
        line: usize,
        section: &'static str,
        text: String,
    },
    #[error("line {line}: item {item} at depot city {city}")]
    ItemAtDepot { line: usize, item: usize, city: usize },
    #[error("line {line}: item {item} references unknown city {city}")]
    UnknownCity { line: usize, item: usize, city: usize },
    #[error("line {line}: item {item} has non-positive weight {weight}")]
    NegativeWeight { line: usize, item: usize, weight: f64 },
    #[error("line {line}: item {item} has negative profit {profit}")]
    NegativeProfit { line: usize, item: usize, profit: f64 },
    #[error("line {line}: {what} index {found} out of sequence (expected {expected})")]
    BadIndex {
        line: usize,
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: dimension mismatch for {what}: declared {declared}, found {found}")]
    DimensionMismatch {
        line: usize,
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("invalid instance parameters: {0}")]
    InvalidParameters(String),
}

/// Errors raised by solution evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("invalid route: {0}")]
    InvalidRoute(String),
    #[error("item {item} picked at city {city}, which is not on the route")]
    PickOffRoute { item: usize, city: usize },
    #[error("plan has {found} entries, instance has {expected} items")]
    PlanSize { expected: usize, found: usize },
    #[error("knapsack weight {weight} exceeds capacity {capacity}")]
    OverCapacity { weight: f64, capacity: f64 },
    #[error("travel time {time} exceeds limit {limit}")]
    OverTime { time: f64, limit: f64 },
    #[error("weight {0} outside [0, W]")]
    WeightOutOfRange(f64),
    #[error("city index {0} out of range")]
    CityOutOfRange(usize),
}

/// Errors from reading the two-line solution format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionFormatError {
    #[error("line {line}: expected a bracketed list, got `{text}`")]
    NotAList { line: usize, text: String },
    #[error("line {line}: bad integer `{text}`")]
    BadInteger { line: usize, text: String },
    #[error("solution must have exactly two lines")]
    LineCount,
    #[error("index {0} out of range")]
    OutOfRange(usize),
}

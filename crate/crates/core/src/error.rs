use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} has size {got}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("measures live on different ambient spaces")]
    DifferentAmbient,

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a submeasure: mu({point}) = {mass} < t * mu1({point}) = {required}")]
    NotSubmeasure {
        point: usize,
        mass: f64,
        required: f64,
    },

    #[error("map is not {kappa}-Lipschitz at ({a}, {b})")]
    LipschitzViolated { kappa: f64, a: usize, b: usize },

    #[error("distance {distance} exceeds {limit}")]
    DistanceTooLarge { distance: f64, limit: f64 },

    #[error("depth {requested} unavailable, only {available} scales resolve the support")]
    DepthExhausted { requested: usize, available: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("target {target} unreachable, found {found} words")]
    TargetUnreachable { target: usize, found: usize },

    #[error("base measures {0} and {1} are not apart")]
    NotApart(usize, usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("height {0} lies outside every U-row")]
    RhoOutsideRows(String),

    #[error("geometry infeasible: {0}")]
    GeometryInfeasible(String),

    #[error("code has {got} words, need {need}")]
    CodeTooSmall { got: usize, need: usize },

    #[error("claim {claim} violated for rows ({i}, {j}): {detail}")]
    ClaimViolated {
        claim: &'static str,
        i: usize,
        j: usize,
        detail: String,
    },

    #[error("not certified: {0}")]
    NotCertified(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

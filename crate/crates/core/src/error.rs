use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus root not found: {0}")]
    CorpusRootNotFound(PathBuf),

    #[error("duplicate document for entity {entity} year {year}: {first} and {second}")]
    DuplicateDocument {
        entity: String,
        year: i32,
        first: PathBuf,
        second: PathBuf,
    },

    #[error("file name is not an integer year: {0}")]
    BadYearFileName(PathBuf),

    #[error("nonpositive price {price} for entity {entity} year {year}")]
    NonPositivePrice {
        entity: String,
        year: i32,
        price: f64,
    },

    #[error("price years not strictly increasing for entity {entity} at year {year}")]
    UnorderedPrices { entity: String, year: i32 },

    #[error("duplicate risk-free rate for year {0}")]
    DuplicateRate(i32),

    #[error("duplicate panel row for entity {entity} year {year}")]
    DuplicatePanelRow { entity: String, year: i32 },

    #[error("omitted category absent: base year {0} has no panel rows")]
    OmittedCategoryAbsent(i32),

    #[error("empty panel")]
    EmptyPanel,

    #[error("need more observations than regressors: N = {n}, K = {k}")]
    TooFewObservations { n: usize, k: usize },

    #[error("rank-deficient design: dependent columns {0:?}")]
    RankDeficient(Vec<String>),

    #[error("need >=2 clusters, got {0}")]
    TooFewClusters(usize),

    #[error("need >=2 groups, got {0}")]
    TooFewGroups(usize),

    #[error("within regression infeasible: every group is a singleton")]
    AllSingletonGroups,

    #[error("between regression infeasible: {groups} groups for {regressors} between regressors")]
    BetweenInfeasible { groups: usize, regressors: usize },

    #[error("unknown column label {0}")]
    UnknownColumn(String),

    #[error("singular covariance block for {0:?}")]
    SingularCovariance(Vec<String>),

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("need at least {need} observations, got {got}")]
    TooShort { need: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("candidate {candidate} not found in any {year} transcript")]
    CandidateAbsent { candidate: String, year: i32 },

    #[error("election {year}: expected exactly 2 candidates, got {got}")]
    CandidateCount { year: i32, got: usize },

    #[error("election {year}: tie at {total} between {a} and {b}")]
    Tie {
        year: i32,
        a: String,
        b: String,
        total: u64,
    },

    #[error("election {year}: actual winner {winner} is not one of the candidates")]
    UnknownWinner { year: i32, winner: String },

    #[error("election {0}: no actual winner recorded")]
    MissingWinner(i32),

    #[error("need >=2 elections with known winners, got {0}")]
    TooFewElections(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

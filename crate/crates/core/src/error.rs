use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("malformed coefficient expression `{0}`")]
    BadExpression(String),
    #[error("planes {0} and {1} are proportional")]
    DuplicatePlane(usize, usize),
    #[error("total degree is {0}, expected 8")]
    WrongTotalDegree(usize),
    #[error("scale must be squarefree and nonzero, got {0}")]
    BadScale(i64),
    #[error("linear form has all coefficients zero")]
    ZeroForm,
    #[error("cannot intersect proportional planes")]
    ProportionalForms,
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("series precisions differ: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("stratum multiplicity {0} exceeds degree 8")]
    MultiplicityTooLarge(usize),
    #[error("arrangement is not admissible: {0}")]
    Inadmissible(String),
    #[error("{0} is not a good prime for this arrangement")]
    BadPrime(u64),
    #[error("point is not an arrangement 4-fold point")]
    NotFourFold,
    #[error("negative skew rank: h11 = {h11} < rho(Y) = {rho}")]
    NegativeSkewRank { h11: i64, rho: i64 },
    #[error("unknown catalog key `{0}`")]
    UnknownCatalogKey(String),
    #[error("unknown newform label `{0}`")]
    UnknownLabel(String),
    #[error("prime {p} not tabulated for newform `{label}`")]
    UnknownTablePrime { label: String, p: u64 },
    #[error("eta quotient has weight {weight_times_2}/2 and q-shift {shift_num}/24; need weight 4 and shift 1")]
    BadEtaQuotient { weight_times_2: i64, shift_num: i64 },
    #[error("arrangement document: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

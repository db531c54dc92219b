use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range for text of length {n}")]
    IndexOutOfRange { pos: usize, n: usize },

    #[error("tau = {tau} out of range for text of length {n}")]
    InvalidTau { tau: usize, n: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fingerprint indices not ordered: {i} >= {j}")]
    UnorderedFingerprints { i: usize, j: usize },

    #[error("nearby query precondition violated: |{i} - {j}| > tau = {tau}")]
    NotNearby { i: usize, j: usize, tau: usize },

    #[error("Las Vegas trial budget exhausted after {trials} trials")]
    TrialBudgetExhausted { trials: usize },

    #[error(
        "no qualifying base found in round {round}; this contradicts the \
         averaging argument and indicates a bug"
    )]
    NoQualifyingBase { round: usize },

    #[error("prime modulus {p} does not exceed the alphabet size {sigma}")]
    ModulusTooSmall { p: u64, sigma: u64 },

    #[error("malformed dump: {0}")]
    MalformedDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("generalized binomial C({alpha}, {n}) has a negative factor")]
    Domain { alpha: f64, n: u64 },

    #[error("coherent state truncated at dim {dim} loses tail mass {tail:e}")]
    Truncation { dim: usize, tail: f64 },

    #[error("Fock index {n} out of range for dim {dim}")]
    Index { n: usize, dim: usize },

    #[error("index {n} outside [0, {m}]")]
    Range { n: i64, m: u32 },

    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("degenerate spectrum at diagonal entries {0} and {1}")]
    DegenerateSpectrum(usize, usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}

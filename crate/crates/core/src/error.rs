use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} did not converge (error estimate {estimate:.3e}, tolerance {tolerance:.3e})")]
    NonConvergence {
        what: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("no sign change of {what} in [{lo}, {hi}]")]
    NoRoot { what: String, lo: f64, hi: f64 },

    #[error("spectral grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("saturation parameter S = {0} is outside the weak-saturation regime")]
    Saturated(f64),

    #[error("sweep has {cells} cells, above the cap of {cap}")]
    CapExceeded { cells: usize, cap: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::NoRoot { .. })
    }
}

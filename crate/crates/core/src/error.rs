use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: wrong dimensions, empty clouds, malformed grids or configs.
    #[error("usage error: {0}")]
    Usage(String),

    /// A trial failed inside an experiment run.
    #[error("runtime failure in measure={measure} m={m} trial={trial} seed={seed}: {reason}")]
    Trial {
        measure: String,
        m: usize,
        trial: usize,
        seed: u64,
        reason: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// Process exit code: 1 for usage errors, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }
}

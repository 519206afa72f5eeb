use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the range where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("degenerate scaling: {0}")]
    DegenerateScaling(String),

    #[error("extrapolation: v = {v} for x = {x} lies outside the profile grid [{lo}, {hi}]")]
    Extrapolation { x: f64, v: f64, lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 1 for domain and
    /// tolerance failures, 2 for input and parse failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Singularity(_)
            | Error::DegenerateScaling(_)
            | Error::Extrapolation { .. }
            | Error::Precondition(_) => 1,
            Error::Input(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
        }
    }
}

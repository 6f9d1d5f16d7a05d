use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("archive error in {container}{}: {message}", member.as_deref().map(|m| format!(" member {m}")).unwrap_or_default())]
    Archive {
        container: PathBuf,
        member: Option<String>,
        message: String,
    },

    #[error("layout conflict for year {year}: {message}")]
    LayoutConflict { year: i32, message: String },

    #[error("no {format} archive for year {year} in layout")]
    NotFound { year: i32, format: String },

    #[error("input error: {0}")]
    Input(String),

    #[error("arithmetic domain error: {0}")]
    ArithmeticDomain(String),

    #[error("insufficient year coverage for calibration: {0}")]
    InsufficientCoverage(String),

    #[error("rule table line {line}: {message}")]
    Rules { line: usize, message: String },

    #[error("{what} line {line}: {message}")]
    Parse {
        what: &'static str,
        line: usize,
        message: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

use std::path::{Path, PathBuf};

/// Errors surfaced by the library. Per-file scanning problems and
/// extraction misses are warnings, not errors.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("lexicon {file}:{line}: {message}")]
    Lexicon { file: String, line: usize, message: String },

    #[error("corpus entry `{license}` field `{field}`: {message}")]
    Corpus {
        license: String,
        field: String,
        message: String,
    },

    #[error("scan failed: {0}")]
    Scan(String),

    #[error("no term matrix for license `{license}` at {path}")]
    Detection { license: String, path: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

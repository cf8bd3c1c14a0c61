use std::io;
use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    /// Malformed file contents. `offset` is the byte (or line, for text
    /// formats) where parsing stopped.
    #[error("{}: {message}{}", path.display(), offset.map(|o| format!(" at {o}")).unwrap_or_default())]
    Format {
        path: PathBuf,
        offset: Option<u64>,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] gyrofield_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("no usable source images in {}", .0.display())]
    NoSources(PathBuf),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn format(path: impl AsRef<Path>, offset: Option<u64>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.as_ref().to_path_buf(),
            offset,
            message: message.into(),
        }
    }

    /// Short machine-readable class name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } | Error::NoSources(_) => "io",
            Error::Format { .. } => "format",
            Error::Core(_) => "contract",
            Error::Usage(_) => "usage",
        }
    }

    /// Process exit status for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Io { .. } | Error::NoSources(_) => 3,
            Error::Format { .. } => 4,
            Error::Core(_) => 5,
        }
    }
}

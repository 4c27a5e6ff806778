use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::CoverageError;
use crate::categorize::AnnotationError;
use crate::corpus::CorpusError;
use crate::parsetree::ConlluError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error. Every variant maps onto one of the two failure exit
/// codes of the command-line tool (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Corpus(#[from] CorpusError),

    #[error(transparent)]
    Conllu(#[from] ConlluError),

    #[error(transparent)]
    Annotation(#[from] AnnotationError),

    #[error(transparent)]
    Coverage(#[from] CoverageError),

    #[error("{path}, line {line}: {message}")]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for I/O failures, 2 for everything that is a validation problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::Corpus(CorpusError::Io { .. }) => 1,
            Error::Annotation(AnnotationError::Io { .. }) => 1,
            _ => 2,
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

/// Exit codes: 0 success, 1 usage or input error, 2 failed hypothesis,
/// 3 exhausted budget.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: cext::Error },
    #[error(transparent)]
    Engine(#[from] cext::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) => match e {
                cext::Error::HypothesisFailed(_)
                | cext::Error::NoIdempotent
                | cext::Error::NotCentral
                | cext::Error::NotInVariety(_)
                | cext::Error::NotIdempotent(_) => 2,
                cext::Error::BudgetExceeded(_) | cext::Error::LimitExceeded(_) => 3,
                _ => 1,
            },
            _ => 1,
        }
    }
}

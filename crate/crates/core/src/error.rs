use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("capacity exceeded: {what} ({got} > {limit})")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn capacity(what: &'static str, got: usize, limit: usize) -> Self {
        Error::Capacity { what, got, limit }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        Err(Error::capacity(what, got, limit))
    } else {
        Ok(())
    }
}

use std::fmt;

use thiserror::Error;

/// Statistics reported when a computation hits its resource cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub what: &'static str,
    pub limit: u64,
    pub requested: u64,
    pub node_visits: u64,
    /// Best value found before giving up, for searches that have one.
    pub best_lower_bound: Option<u64>,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} budget exceeded: limit {}, requested {}",
            self.what, self.limit, self.requested
        )?;
        if self.node_visits > 0 {
            write!(f, ", {} nodes visited", self.node_visits)?;
        }
        if let Some(lb) = self.best_lower_bound {
            write!(f, ", best lower bound {lb}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("{0}")]
    Budget(BudgetExceeded),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn budget(what: &'static str, limit: u64, requested: u64) -> Self {
        Error::Budget(BudgetExceeded {
            what,
            limit,
            requested,
            node_visits: 0,
            best_lower_bound: None,
        })
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Precondition(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::Budget(_) => 2,
            Error::Verification(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

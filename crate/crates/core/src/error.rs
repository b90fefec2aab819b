use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would exceed a configured size limit.
    #[error("resource guard: {what} = {requested} exceeds limit {limit}")]
    ResourceGuard {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// A numerical routine failed to converge or produced an out-of-tolerance
    /// result.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("trial {index}: {source}")]
    Trial {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn guard(what: &'static str, requested: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::ResourceGuard {
            what,
            requested: requested.into(),
            limit: limit.into(),
        }
    }

    /// True if this error (or the one it wraps) is a resource-guard violation.
    pub fn is_resource_guard(&self) -> bool {
        match self {
            Error::ResourceGuard { .. } => true,
            Error::Trial { source, .. } => source.is_resource_guard(),
            _ => false,
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("insufficient data for pair {from} -> {to}: {reason}")]
    InsufficientData {
        from: String,
        to: String,
        reason: String,
    },

    #[error("incomplete matrix: no score for {from} -> {to}")]
    IncompleteMatrix { from: String, to: String },

    #[error("oracle transport failed for {from} -> {to} (verb {verb:?}): {message}")]
    Transport {
        from: String,
        to: String,
        verb: String,
        message: String,
    },

    #[error("replay cache has no response for {key}")]
    FixtureMiss { key: String },

    #[error(
        "strongly connected component of {} vertices exceeds the cap of {cap} \
         (raise --scc-cap or reduce the problem): {}",
        .vertices.len(),
        .vertices.join(", ")
    )]
    SccCapacity { vertices: Vec<String>, cap: usize },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("verification failed: {0}")]
    VerificationMismatch(String),

    #[error("solver contract violated: {0}")]
    Internal(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }
}

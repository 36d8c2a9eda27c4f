use docharvest_learn::LearnError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot take the union of an empty group of boxes")]
    EmptyGroup,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("no data for {0}")]
    NoData(&'static str),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("empty input")]
    EmptyInput,
    #[error("document has no author zones")]
    NoAuthors,
    #[error("documents are not comparable: {0}")]
    IncomparableDocuments(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("stage {stage} failed: {message}")]
    Stage { stage: &'static str, message: String },
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

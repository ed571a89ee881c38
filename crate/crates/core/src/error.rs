use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
  #[error("malformed input: {0}")]
  MalformedInput(String),

  #[error("parse error at line {line}: {msg}")]
  Parse { line: usize, msg: String },

  #[error("dimension {k} out of range 0..={max}")]
  Range { k: usize, max: usize },

  #[error("{0} is not a face of the complex")]
  NotAFace(String),

  #[error("operation requires a pure complex")]
  NotPure,

  #[error("capacity exceeded: {what} needs {needed} state visits, limit is {limit}")]
  Capacity { what: String, needed: String, limit: u64 },

  #[error("fixity is undefined for the trivial group")]
  UndefinedFixity,

  #[error("cochain is not total: {0}")]
  Totality(String),

  #[error("shape mismatch: {0}")]
  Shape(String),

  #[error("path step {0} is not an edge")]
  Path(String),

  #[error("degenerate instance: {0}")]
  Degenerate(String),

  #[error("construction failed: {0}")]
  Construction(String),

  #[error("internal consistency failure: {0}")]
  Consistency(String),
}

impl Error {
  pub fn is_capacity(&self) -> bool {
    matches!(self, Error::Capacity { .. })
  }

  pub(crate) fn capacity(what: impl Into<String>, needed: impl ToString, limit: u64) -> Self {
    Error::Capacity { what: what.into(), needed: needed.to_string(), limit }
  }
}

use thiserror::Error;

/// Errors produced by the bound evaluators, the region algebra and the
/// inequality engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown variable label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate variable label `{0}`")]
    DuplicateLabel(String),

    #[error("label sets are not disjoint (`{0}` appears twice)")]
    OverlappingLabels(String),

    #[error("rate region is empty")]
    EmptyRegion,

    #[error("rate region is unbounded: {0}")]
    UnboundedRegion(&'static str),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown built-in system {0}")]
    UnknownSystem(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

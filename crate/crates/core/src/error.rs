use thiserror::Error;

use crate::star::{Move, Vertex};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("vertex {vertex} is not on a star with {k} branches")]
    InvalidVertex { vertex: Vertex, k: u32 },

    #[error("illegal move at {vertex}: chips {chips:?} ({reason})")]
    IllegalMove {
        vertex: Vertex,
        chips: Vec<u32>,
        reason: String,
    },

    #[error("replay failed at step {step} ({mv}): {source}\nconfiguration: {config}")]
    Replay {
        step: usize,
        mv: Move,
        config: String,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration is not a stable {k}x{m} outcome: {detail}")]
    Shape { k: u32, m: u32, detail: String },

    #[error("tableau is not standard: {0}")]
    NonStandard(String),

    #[error("precondition violated: {0}")]
    Domain(String),

    #[error("{what} budget exceeded: {detail}")]
    Budget { what: &'static str, detail: String },

    #[error("log inconsistent with closed-form fire counts: {0}")]
    Inconsistent(String),

    #[error("no termination after {moves} moves (ceiling {ceiling})")]
    NoTermination { moves: usize, ceiling: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal construction error: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

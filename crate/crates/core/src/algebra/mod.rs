//! Symbolic non-CCR algebra: generators `a_λ`, `a†_λ`, `𝟙_λ`, operator words,
//! and a confluent normal-ordering engine.
//!
//! The only relations used are `[a_λ, a†_μ] = δ_λμ 𝟙_λ`, commuting
//! annihilators, commuting creators, and centrality of every `𝟙_λ`.

mod coeff;
mod mode;
mod normal;
mod word;

use thiserror::Error;

pub use coeff::Coeff;
pub use mode::{ModeId, ModeLabel, ModeTable};
pub use normal::{multiply, normal_order, NormalForm, NormalOrderer, TermKey, DEFAULT_TERM_CAP};
pub use word::{
    parse_word, parse_word_untyped, referenced_modes, Generator, GeneratorKind, OperatorWord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("UnknownMode: `{id}` at byte {offset}")]
    UnknownMode { id: String, offset: usize },
    #[error("ParseError at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("TermExplosion: more than {cap} terms")]
    TermExplosion { cap: usize },
    #[error("InvalidMode `{id}`: {reason}")]
    InvalidMode { id: String, reason: String },
    #[error("InvalidJson: {0}")]
    Json(String),
}

impl AlgebraError {
    pub fn name(&self) -> &'static str {
        match self {
            AlgebraError::UnknownMode { .. } => "UnknownMode",
            AlgebraError::Parse { .. } => "ParseError",
            AlgebraError::TermExplosion { .. } => "TermExplosion",
            AlgebraError::InvalidMode { .. } => "InvalidMode",
            AlgebraError::Json(_) => "InvalidJson",
        }
    }
}

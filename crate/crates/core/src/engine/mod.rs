//! Ore-tower presentations, PBW rewriting, and brackets at a root of unity.

mod element;
mod parse;
mod poisson;
mod presentation;
mod rewrite;
mod validate;

use thiserror::Error;

pub use element::{mono_string, qrat, Element, Mono, RootElement};
pub use parse::parse_element;
pub use poisson::{is_central_at_root, poisson_bracket};
pub use presentation::AlgebraPresentation;
pub use rewrite::{Letter, Rewriter};
pub use validate::{validate, Validation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("validation failed ({check}): {detail}")]
    ValidationFailed { check: &'static str, detail: String },
    #[error("not central at the root: {0}")]
    NotCentral(String),
    #[error("parse error: {0}")]
    Parse(String),
}

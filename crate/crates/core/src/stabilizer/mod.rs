//! Stabilizer Lie algebras of central characters, their rank, and the
//! comparison of predicted and counted irreducibles.

mod build;
mod lie;
mod verdict;

use thiserror::Error;

pub use build::{linearized_stabilizer, stabilizer_from_stratum, Level, PoissonTable, StratumLie};
pub use lie::{is_squarefree, minimal_polynomial, rank_and_checks, solve_in_span, Checks, FDLie, StabilizerResult};
pub use verdict::{check_against_census, main_theorem_check, PsiCheck, Report, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("toral/nilpotent split not verified: {0:?}")]
    DecompositionInvalid(Box<Checks>),
    #[error("bracket leaves the generated span: {0}")]
    NotClosed(String),
    #[error("dependent generator {0}")]
    Dependent(String),
    #[error("engine: {0}")]
    Engine(String),
    #[error("fiber: {0}")]
    Fiber(String),
    #[error("strata: {0}")]
    Strata(String),
}

//! Finite-dimensional fibers, their explicit irreducible representations and
//! a brute-force census of irreducibles.

mod algebra;
mod census;
mod cuts;
mod irreps;
pub mod linalg;

use thiserror::Error;

pub use algebra::{CentralValue, Degree, FDAlgebra, Grading, MAX_FIBER_DIM};
pub use census::{census, Census};
pub use cuts::{census_at, central_exponents, eps_census, eps_cuts, eps_fiber};
pub use irreps::{check_relations, clock_shift_irreps, distinct_count, Matrix, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("fiber dimension {dim} exceeds {bound}")]
    TooLarge { dim: usize, bound: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("lattice: {0}")]
    Lattice(String),
    #[error("semisimple quotient does not split: {0}")]
    NonSplit(String),
    #[error("missing witness: {0}")]
    MissingWitness(String),
    #[error("relation fails in representation: {0}")]
    RelationFailed(String),
}

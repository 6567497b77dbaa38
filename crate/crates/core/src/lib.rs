pub mod exactnum;
pub mod zlattice;
pub mod engine;
pub mod models;
pub mod torus;
pub mod strata;
pub mod fiber;
pub mod stabilizer;
pub mod sweep;
pub mod cli;

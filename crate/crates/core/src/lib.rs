//! Exact and Monte Carlo tools for random-flight moments and the lattice
//! walks that count them.

pub mod bijection;
pub mod cone_formulas;
pub mod exact_numbers;
pub mod exec;
pub mod lattice_graphs;
pub mod moment_matrix;
pub mod random_flights;
pub mod word_models;

pub use exact_numbers::Count;
pub use exec::Execution;
pub use lattice_graphs::{LatticeFamily, LatticeVertex};
pub use moment_matrix::Ratio;
pub use word_models::{Step, StepWord};

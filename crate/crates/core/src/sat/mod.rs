//! Incremental SAT solving with assumptions and failed-assumption cores.

pub mod dimacs;
mod heap;
mod solver;

pub use solver::{SatResult, Solver, SolverConfig, SolverStats, Status};

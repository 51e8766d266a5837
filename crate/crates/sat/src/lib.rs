//! Propositional satisfiability for grounded model-finding problems.
//!
//! A small, auditable solver: two-watched-literal unit propagation under
//! either plain chronological DPLL or conflict-driven clause learning,
//! incremental clause addition for model enumeration, cube splitting across
//! threads, and DIMACS import/export.

pub mod cnf;
pub mod dimacs;
pub mod enumerate;
pub mod lit;
pub mod parallel;
pub mod solver;

pub use cnf::Cnf;
pub use dimacs::{parse_dimacs, to_dimacs_string, write_dimacs, DimacsError};
pub use enumerate::{block_all, enumerate_models, Enumeration};
pub use lit::{Lit, Var};
pub use parallel::solve_split;
pub use solver::{solve, Outcome, Solver, SolverConfig, SolverResult, Stats};

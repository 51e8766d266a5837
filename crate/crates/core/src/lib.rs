pub mod corpus;
pub mod grounder;
pub mod scope;
pub mod semantics;
pub mod solver;
pub mod surface;

pub use scope::Scope;

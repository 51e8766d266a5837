//! Surface language: lexing, parsing, printing and sort checking of theory
//! files, plus the two-layer AST used by the later stages.

pub mod ast;
pub mod check;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod sort;
pub mod subst;

pub use ast::*;
pub use check::{annotate, sort_check, sort_of, substitute_checked, Annotated, SortedTheory};
pub use error::SurfaceError;
pub use parser::{parse_extending, parse_manifest, parse_meta, parse_term, parse_theory};
pub use printer::{print_meta, print_term, print_theory};
pub use sort::Sort;
pub use subst::{alpha_eq, expand_definitions, expand_meta, free_vars, substitute, substitute_many};

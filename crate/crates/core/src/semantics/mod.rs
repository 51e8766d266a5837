//! Finite interpretations of the embedded logic and the reference
//! evaluator for character- and meta-level formulas.

pub mod canonical;
pub mod conditions;
pub mod eval;
pub mod interp;
pub mod naive;
pub mod query;
pub mod report;
pub mod universe;

use thiserror::Error;

use crate::scope::Scope;
use crate::surface::Sort;

pub use canonical::{canonical_form, canonical_key};
pub use conditions::{frame_conditions_check, Condition, ConditionSet, Violation};
pub use eval::{eval_char, eval_meta, Program, Store, V};
pub use interp::{Frame, Interpretation, Table, Vocabulary};
pub use query::{Mode, Query};
pub use universe::{universe_size, value_universe};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("sort `{sort}` has no finite universe the evaluator can enumerate")]
    UnsupportedSort { sort: Sort },
    #[error("scope {scope} is outside the supported range (at most 6 worlds and 62 points)")]
    ScopeUnsupported { scope: Scope },
    #[error("unknown frame condition `{name}`")]
    UnknownCondition { name: String },
    #[error("frame condition `{name}` cannot be disabled here")]
    MandatoryCondition { name: String },
    #[error("interpretation has no table for `{name}`")]
    MissingTable { name: String },
    #[error("variable `{name}` is not bound")]
    Unbound { name: String },
    #[error("formula nests more than 64 binders")]
    TooDeep,
    #[error("unknown goal or axiom `{name}`")]
    UnknownItem { name: String },
}

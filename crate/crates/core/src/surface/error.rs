use thiserror::Error;

use crate::surface::ast::Span;
use crate::surface::sort::Sort;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        span: Span,
        expected: Vec<String>,
        found: String,
    },
    #[error("{span}: duplicate name `{name}`")]
    DuplicateName { name: String, span: Span },
    #[error("{span}: unknown sort `{name}`")]
    UnknownSort { name: String, span: Span },
    #[error("{span}: in `{item}`: sort mismatch, expected {expected}, found {found}")]
    SortMismatch {
        item: String,
        expected: Sort,
        found: Sort,
        span: Span,
    },
    #[error("{span}: in `{item}`: unbound variable `{name}`")]
    UnboundVariable {
        item: String,
        name: String,
        span: Span,
    },
    #[error("{span}: in `{item}`: `{name}` expects {expected} argument(s), found {found}")]
    ArityError {
        item: String,
        name: String,
        expected: usize,
        found: usize,
        span: Span,
    },
    #[error("{span}: in `{item}`: unknown {kind} `{name}`")]
    UnknownName {
        item: String,
        kind: &'static str,
        name: String,
        span: Span,
    },
}

impl SurfaceError {
    pub fn span(&self) -> Span {
        match self {
            SurfaceError::Parse { span, .. }
            | SurfaceError::DuplicateName { span, .. }
            | SurfaceError::UnknownSort { span, .. }
            | SurfaceError::SortMismatch { span, .. }
            | SurfaceError::UnboundVariable { span, .. }
            | SurfaceError::ArityError { span, .. }
            | SurfaceError::UnknownName { span, .. } => *span,
        }
    }
}

//! Expression trees for closed forms, integrands and summands.

mod ast;
mod eval;
mod format;
mod parser;

use thiserror::Error;

pub use ast::{BinaryOp, Constant, Expression, Function, SourceSpan};
pub use eval::{apply, apply_binary, bind_univariate, eval_closed, Bindings, Univariate};
pub use format::format;
pub use parser::parse;

use crate::specfun::DomainError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("unknown function `{name}` at {span}")]
    UnknownFunction { span: SourceSpan, name: String },
    #[error("`{name}` takes {expected} argument(s), found {found} at {span}")]
    Arity {
        span: SourceSpan,
        name: String,
        expected: usize,
        found: usize,
    },
}

impl ExprError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ExprError::Syntax { span, .. }
            | ExprError::UnknownFunction { span, .. }
            | ExprError::Arity { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`inf` is only allowed as an integral bound")]
    InfInArithmetic,
    #[error("integral or sum where a closed form is required")]
    NotClosedForm,
    #[error("non-finite intermediate value in `{0}`")]
    NonFinite(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BindError {
    #[error("free variable `{found}` does not match bound variable `{expected}`")]
    FreeVariable { expected: String, found: String },
    #[error(transparent)]
    NotClosedForm(#[from] EvalError),
}

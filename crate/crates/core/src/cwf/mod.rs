//! Contexts, generated substitutions, the comparison functors and all type and term formers.

use thiserror::Error;

use crate::presentation::TermError;

pub mod compare;
pub mod context;
pub mod formers;
pub mod models;

pub use compare::{a_compare, Compare};
pub use context::{compose, empty_context, extend, mk_subst, projection, weaken, weaken_into, Context, Subst};
pub use formers::{Eq, Pi, Prod, Sigma};
pub use models::{bar_term, bar_term_inv, context_as_model, core_cwf, coslice_cwf, ContextModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CwfError {
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("refl needs `{0}` to be provably equal")]
    ReflRequiresEqual(String),
    #[error("equality engine gave up: {0}")]
    Unknown(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

pub type CwfResult<T> = Result<T, CwfError>;

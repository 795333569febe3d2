//! Strict locally cartesian closed categories as a model of extensional
//! dependent type theory: terms, an equality engine, finite models, slices,
//! strictification and the category-with-families structure.

pub mod closure;
pub mod cwf;
pub mod fin;
pub mod functor;
pub mod presentation;
pub mod rewrite;
pub mod strict;
pub mod surface;
pub mod term;

pub use presentation::{infer_boundary, Arrow, Marking, Origin, Presentation, TermError, TermResult, Typer};
pub use term::{name, LiftMark, MarkRef, Mor, MorKind, Name, Obj, ObjKind};

//! The surface language: sketches, contexts given as telescopes, and judgments.
//!
//! ```text
//! file      = { item } ;
//! item      = sketch | context | judgment | "use-model" IDENT [";"] ;
//! sketch    = "sketch" [IDENT] "{" { sdecl [";"] } "}" ;
//! sdecl     = "obj" IDENT
//!           | "arrow" IDENT ":" obj "->" obj
//!           | "eq" mor "=" mor
//!           | "mark" mark ;
//! mark      = "tm" "(" obj ")"
//!           | "pb" "(" mor "," mor "|" mor "," mor ")"
//!           | "pi" "(" mor "," mor "," mor "|" mor ")" ;
//! obj       = IDENT | "1" | "pb" "(" mor "," mor ")" | "pi" "(" mor "," mor ")" | "(" obj ")" ;
//! mor       = matom { "." matom } ;
//! matom     = IDENT | "id" "(" obj ")" | "!" obj
//!           | ("p1" | "p2" | "pimap" | "ev") "(" mor "," mor ")"
//!           | "<" mor "," mor "|" mor "," mor ">"
//!           | "cur" "(" mor "," mor "|" mor "," mor ")"
//!           | "(" mor ")" ;
//! context   = "context" IDENT ["over" IDENT] "{" { IDENT ":" ty [";"] } "}" ;
//! judgment  = "judgment" ["in" IDENT] "{" { jdecl [";"] } "}" ;
//! jdecl     = "check" tm ":" ty | "eq" atom atom [":" ty] | "norm" tm ;
//! ty        = tatom { ("*" | "×") tatom } ;
//! tatom     = "Unit" | IDENT | "Eq" "(" tm "," tm ")"
//!           | ("Sigma" | "Pi") "(" IDENT ":" ty ")" ty | "(" ty ")" ;
//! tm        = "\" IDENT "." tm | atom { atom } ;
//! atom      = IDENT | "tt" | "refl" | "fst" | "snd" | "pair" | "app"
//!           | "(" tm [":" ty] ")" ;
//! ```
//!
//! Comments run from `--` to the end of the line. `.` composes right to left.

mod driver;
mod elab;
mod lexer;
mod parser;
mod printer;

#[cfg(test)]
mod tests;

pub use driver::{elaborate, elaborate_source, ElabOptions, Elaborated, NamedContext, Outcome, Status};
pub use lexer::{lex, Tok, Token};
pub use parser::parse;
pub use printer::{print, print_term, print_ty};

use serde::Serialize;

use crate::fin::Countermodel;
use crate::rewrite::TraceStep;
use crate::term::{Mor, Obj};

/// Byte range plus the 1-based line and column of its start.
///
/// Spans never take part in equality, so parsed and reprinted trees compare equal.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}
impl std::cmp::Eq for Span {}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, std::cmp::Eq, Serialize)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceFile {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Sketch(SketchDecl),
    Context(ContextDecl),
    Judgment(JudgmentBlock),
    UseModel(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SketchDecl {
    pub name: Option<Ident>,
    pub entries: Vec<SketchEntry>,
    pub span: Span,
}

/// Sketch bodies are written directly in the categorical term language.
#[derive(Debug, Clone, PartialEq)]
pub enum SketchEntry {
    Obj(Ident),
    Arrow { name: Ident, dom: Obj, cod: Obj },
    Eq { lhs: Mor, rhs: Mor, span: Span },
    Mark { mark: crate::presentation::Marking, span: Span },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextDecl {
    pub name: Ident,
    pub over: Option<Ident>,
    pub telescope: Vec<(Ident, Ty)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentBlock {
    pub context: Option<Ident>,
    pub judgments: Vec<Judgment>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Judgment {
    Check { term: Term, ty: Ty, span: Span },
    Eq { lhs: Term, rhs: Term, ty: Option<Ty>, span: Span },
    Norm { term: Term, span: Span },
}

impl Judgment {
    pub fn span(&self) -> Span {
        match self {
            Judgment::Check { span, .. } | Judgment::Eq { span, .. } | Judgment::Norm { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ty {
    Unit(Span),
    Named(Ident),
    Prod(Box<Ty>, Box<Ty>),
    Eq(Box<Term>, Box<Term>),
    Sigma(Ident, Box<Ty>, Box<Ty>),
    Pi(Ident, Box<Ty>, Box<Ty>),
}

#[derive(Debug, Clone, Copy, PartialEq, std::cmp::Eq)]
pub enum Builtin {
    Tt,
    Refl,
    Fst,
    Snd,
    Pair,
    App,
}

impl Builtin {
    pub fn keyword(self) -> &'static str {
        match self {
            Builtin::Tt => "tt",
            Builtin::Refl => "refl",
            Builtin::Fst => "fst",
            Builtin::Snd => "snd",
            Builtin::Pair => "pair",
            Builtin::App => "app",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Builtin> {
        [Builtin::Tt, Builtin::Refl, Builtin::Fst, Builtin::Snd, Builtin::Pair, Builtin::App]
            .into_iter()
            .find(|b| b.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var(Ident),
    Builtin(Builtin, Span),
    Apply(Box<Term>, Box<Term>),
    Lam(Ident, Box<Term>),
    Ann(Box<Term>, Box<Ty>),
}

impl Term {
    pub fn span(&self) -> Span {
        match self {
            Term::Var(i) => i.span,
            Term::Builtin(_, s) => *s,
            Term::Apply(f, a) => join(f.span(), a.span()),
            Term::Lam(x, b) => join(x.span, b.span()),
            Term::Ann(t, _) => t.span(),
        }
    }
}

pub(crate) fn join(a: Span, b: Span) -> Span {
    Span { start: a.start, end: b.end.max(a.end), line: a.line, col: a.col }
}

#[derive(Debug, Clone, Copy, PartialEq, std::cmp::Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, span, message: message.into(), trace: None, countermodel: None }
    }

    pub fn note(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Note, span, message: message.into(), trace: None, countermodel: None }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        };
        write!(f, "{}: {sev}: {}", self.span, self.message)?;
        if let Some(cm) = &self.countermodel {
            write!(f, "\n  countermodel {cm}")?;
        }
        if let Some(tr) = &self.trace {
            for s in tr {
                write!(f, "\n  {s}")?;
            }
        }
        Ok(())
    }
}

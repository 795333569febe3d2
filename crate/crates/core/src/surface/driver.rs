//! File-level elaboration: sketches, telescopes and judgment blocks.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::elab::{ElabError, Scope};
use super::{parse, printer, ContextDecl, Diagnostic, Item, Judgment, SketchDecl, SketchEntry, Span, SurfaceFile};
use crate::closure::{decide_equal, Verdict};
use crate::cwf::{extend, Context};
use crate::fin::{builtin_model, Countermodel, FinStrictLcc};
use crate::presentation::{Arrow, Presentation};
use crate::rewrite::{Engine, TraceStep, DEFAULT_BUDGET};
use crate::term::{name, Mor};

#[derive(Debug, Clone)]
pub struct ElabOptions {
    pub budget: usize,
    pub trace: bool,
    /// Models searched for countermodels besides those named by `use-model`.
    pub models: Vec<FinStrictLcc>,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions { budget: DEFAULT_BUDGET, trace: false, models: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Unknown,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub judgment: &'static str,
    pub context: String,
    pub span: Span,
    pub status: Status,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
    /// Elaborated terms: the term checked or normalized, or both sides of an equation.
    #[serde(skip)]
    pub terms: Vec<Mor>,
    #[serde(skip)]
    pub scope: Option<Context>,
}

/// A named context together with its telescope variables.
#[derive(Debug, Clone)]
pub struct NamedContext {
    pub name: String,
    pub context: Context,
    pub variables: Vec<(String, Mor)>,
}

#[derive(Debug, Clone, Default)]
pub struct Elaborated {
    pub sketches: Vec<(String, Arc<Presentation>)>,
    pub contexts: Vec<NamedContext>,
    pub models: Vec<String>,
    pub outcomes: Vec<Outcome>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Elaborated {
    /// Worst status over all outcomes; any error diagnostic fails.
    pub fn status(&self) -> Status {
        let errs = self.diagnostics.iter().any(|d| d.severity == super::Severity::Error);
        let worst = self.outcomes.iter().map(|o| o.status).max().unwrap_or(Status::Pass);
        if errs {
            Status::Fail
        } else {
            worst
        }
    }

    pub fn context(&self, name: &str) -> Option<&NamedContext> {
        self.contexts.iter().rev().find(|c| c.name == name)
    }
}

pub fn elaborate_source(src: &str, opts: &ElabOptions) -> Elaborated {
    match parse(src) {
        Ok(f) => elaborate(&f, opts),
        Err(d) => Elaborated { diagnostics: vec![d], ..Default::default() },
    }
}

struct Driver<'o> {
    opts: &'o ElabOptions,
    out: Elaborated,
    scopes: HashMap<String, Scope>,
    last_scope: Option<(String, Scope)>,
    models: Vec<FinStrictLcc>,
}

pub fn elaborate(f: &SurfaceFile, opts: &ElabOptions) -> Elaborated {
    let mut d = Driver { opts, out: Elaborated::default(), scopes: HashMap::new(), last_scope: None, models: opts.models.clone() };
    for it in &f.items {
        match it {
            Item::UseModel(m) => match builtin_model(&m.name) {
                Some(model) => {
                    d.out.models.push(m.name.clone());
                    d.models.push(model);
                }
                None => d.out.diagnostics.push(Diagnostic::error(m.span, format!("unknown model `{}`", m.name))),
            },
            Item::Sketch(s) => d.sketch(s),
            Item::Context(c) => d.context(c),
            Item::Judgment(b) => {
                let scope = match &b.context {
                    Some(n) => match d.scopes.get(&n.name) {
                        Some(s) => Some((n.name.clone(), s.clone())),
                        None => {
                            d.out.diagnostics.push(Diagnostic::error(n.span, format!("unknown context `{}`", n.name)));
                            None
                        }
                    },
                    None => Some(d.last_scope.clone().unwrap_or_else(|| d.default_scope())),
                };
                if let Some((cname, scope)) = scope {
                    for j in &b.judgments {
                        d.judgment(&cname, &scope, j);
                    }
                }
            }
        }
    }
    d.out
}

impl Driver<'_> {
    fn default_scope(&self) -> (String, Scope) {
        let sk = self.out.sketches.last().map(|s| s.1.clone()).unwrap_or_else(|| Arc::new(Presentation::empty()));
        let ctx = Context::free((*sk).clone());
        ("".into(), Scope::new(ctx, sk, self.opts.budget))
    }

    fn sketch(&mut self, s: &SketchDecl) {
        let (mut objects, mut arrows, mut eqs, mut marks) = (vec![], vec![], vec![], vec![]);
        for e in &s.entries {
            match e {
                SketchEntry::Obj(n) => objects.push(name(&n.name)),
                SketchEntry::Arrow { name: n, dom, cod } => {
                    arrows.push(Arrow { name: name(&n.name), dom: dom.clone(), cod: cod.clone() })
                }
                SketchEntry::Eq { lhs, rhs, .. } => eqs.push((lhs.clone(), rhs.clone())),
                SketchEntry::Mark { mark, .. } => marks.push(mark.clone()),
            }
        }
        let nm = s.name.as_ref().map_or(String::new(), |n| n.name.clone());
        match Presentation::new(objects, arrows, eqs, marks) {
            Ok(p) => self.out.sketches.push((nm, Arc::new(p))),
            Err(e) => self.out.diagnostics.push(Diagnostic::error(s.span, format!("ill-formed sketch: {e}"))),
        }
    }

    fn context(&mut self, c: &ContextDecl) {
        let sk = match &c.over {
            Some(n) => match self.out.sketches.iter().rev().find(|s| s.0 == n.name) {
                Some(s) => s.1.clone(),
                None => {
                    self.out.diagnostics.push(Diagnostic::error(n.span, format!("unknown sketch `{}`", n.name)));
                    return;
                }
            },
            None => self.out.sketches.last().map(|s| s.1.clone()).unwrap_or_else(|| Arc::new(Presentation::empty())),
        };
        let mut scope = Scope::new(Context::free((*sk).clone()), sk, self.opts.budget);
        for (x, t) in &c.telescope {
            let step = scope.ty(t).and_then(|ty| {
                let (ext, _, v) = extend(&scope.ctx, &ty.obj).map_err(|e| ElabError { span: x.span, message: e.to_string() })?;
                scope.under(ext, &x.name, v, ty).map_err(|e| ElabError { span: x.span, message: e.to_string() })
            });
            match step {
                Ok(s) => scope = s,
                Err(e) => {
                    self.out.diagnostics.push(Diagnostic::error(e.span, e.message));
                    return;
                }
            }
        }
        let variables = scope.vars.iter().map(|v| (v.0.clone(), v.1.clone())).collect();
        self.out.contexts.push(NamedContext { name: c.name.name.clone(), context: scope.ctx.clone(), variables });
        self.scopes.insert(c.name.name.clone(), scope.clone());
        self.last_scope = Some((c.name.name.clone(), scope));
    }

    fn judgment(&mut self, cname: &str, scope: &Scope, j: &Judgment) {
        let mut o = Outcome {
            judgment: "",
            context: cname.to_string(),
            span: j.span(),
            status: Status::Pass,
            message: String::new(),
            normal_form: None,
            trace: vec![],
            countermodel: None,
            terms: vec![],
            scope: Some(scope.ctx.clone()),
        };
        let r = match j {
            Judgment::Check { term, ty, .. } => {
                o.judgment = "check";
                scope.ty(ty).and_then(|t| scope.check(term, &t)).map(|m| {
                    o.message = format!("{} : {}", printer::term(term), printer::ty(ty));
                    o.terms.push(m);
                })
            }
            Judgment::Eq { lhs, rhs, ty, .. } => {
                o.judgment = "eq";
                let sides = match ty {
                    Some(t) => scope.ty(t).and_then(|t| Ok((scope.check(lhs, &t)?, scope.check(rhs, &t)?))),
                    None => scope.infer(lhs).and_then(|(l, t)| Ok((l, scope.check(rhs, &t)?))),
                };
                sides.map(|(l, r)| self.decide(scope, &mut o, l, r, lhs, rhs))
            }
            Judgment::Norm { term, .. } => {
                o.judgment = "norm";
                scope.infer(term).map(|(m, _)| {
                    let ctx = &scope.ctx;
                    let mut e = Engine::new(ctx.presentation(), &ctx.facts.facts, self.opts.budget);
                    e.set_tracing(self.opts.trace);
                    let nf = e.normalize(&m);
                    o.trace = e.take_trace();
                    if e.exhausted() {
                        o.status = Status::Unknown;
                        o.message = format!("budget exhausted after {} steps", e.steps());
                    } else {
                        o.message = format!("{} normalizes", printer::term(term));
                    }
                    o.normal_form = Some(nf.to_string());
                    o.terms.push(m);
                })
            }
        };
        if let Err(e) = r {
            o.status = Status::Fail;
            o.message = e.message.clone();
            o.span = e.span;
        }
        match o.status {
            Status::Pass => {}
            Status::Fail | Status::Unknown => {
                let mut d = Diagnostic::error(o.span, o.message.clone());
                if o.status == Status::Unknown {
                    d.severity = super::Severity::Warning;
                }
                d.countermodel = o.countermodel.clone();
                self.out.diagnostics.push(d);
            }
        }
        self.out.outcomes.push(o);
    }

    fn decide(&self, scope: &Scope, o: &mut Outcome, l: Mor, r: Mor, lt: &super::Term, rt: &super::Term) {
        let ctx = &scope.ctx;
        let shown = format!("{} = {}", printer::atom(lt), printer::atom(rt));
        let v = decide_equal(&l, &r, ctx.presentation(), &ctx.facts.facts, self.opts.budget, &self.models, self.opts.trace);
        o.terms = vec![l, r];
        match v {
            Ok(Verdict::Equal { trace }) => {
                o.message = format!("{shown} holds");
                o.trace = trace;
            }
            Ok(Verdict::Distinct { countermodel }) => {
                o.status = Status::Fail;
                o.message = format!("{shown} fails");
                o.countermodel = Some(countermodel);
            }
            Ok(Verdict::Unknown { report }) => {
                o.status = Status::Unknown;
                o.message = format!("{shown} undecided: {report}");
            }
            Err(e) => {
                o.status = Status::Fail;
                o.message = e.to_string();
            }
        }
    }
}

//! Bidirectional elaboration of surface types and terms into a context.

use std::sync::Arc;

use super::printer;
use super::{Builtin, Span, Term, Ty};
use crate::closure::{decide_equal_obj, Verdict};
use crate::cwf::{a_compare, extend, mk_subst, weaken, Context, CwfError, Eq, Pi, Prod, Sigma, Subst};
use crate::presentation::Presentation;
use crate::term::{Mor, Obj};

pub(crate) struct ElabError {
    pub span: Span,
    pub message: String,
}

pub(crate) type EResult<T> = Result<T, ElabError>;

fn at(span: Span) -> impl Fn(CwfError) -> ElabError {
    move |e| ElabError { span, message: e.to_string() }
}

fn fail<T>(span: Span, message: impl Into<String>) -> EResult<T> {
    Err(ElabError { span, message: message.into() })
}

/// How a type was built, kept so eliminators can find their structure.
#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Plain,
    Prod(Prod),
    Eq(Eq),
    Sigma { ext: Context, tau: Obj, dom: Box<ETy>, cod: Box<ETy> },
    Pi { ext: Context, tau: Obj, dom: Box<ETy>, cod: Box<ETy> },
}

/// A type over `home`.
#[derive(Debug, Clone)]
pub(crate) struct ETy {
    pub obj: Obj,
    pub shape: Shape,
    pub home: Context,
}

impl ETy {
    /// Reads back whatever structure the object itself shows.
    pub fn plain(home: &Context, obj: Obj) -> ETy {
        let shape = if let Some(p) = Prod::from_ty(&obj) {
            Shape::Prod(p)
        } else if let Some(e) = Eq::from_ty(&obj).filter(|e| home.type_of(&e.lhs).is_ok()) {
            Shape::Eq(e)
        } else {
            Shape::Plain
        };
        ETy { obj, shape, home: home.clone() }
    }

    /// Transport along a substitution out of `home`.
    pub fn transport(&self, f: &Subst) -> Result<ETy, CwfError> {
        let shape = match &self.shape {
            Shape::Plain => Shape::Plain,
            Shape::Prod(p) => Shape::Prod(Prod { left: f.ty(&p.left)?, right: f.ty(&p.right)? }),
            Shape::Eq(e) => Shape::Eq(Eq { lhs: f.tm(&e.lhs)?, rhs: f.tm(&e.rhs)? }),
            Shape::Sigma { ext, tau, dom, cod } | Shape::Pi { ext, tau, dom, cod } => {
                let (ext2, w) = weaken(f, ext)?;
                let tau2 = w.ty(tau)?;
                let (dom, cod) = (Box::new(dom.transport(f)?), Box::new(cod.transport(&w)?));
                let cmp = a_compare(&ext2)?;
                let sigma = matches!(self.shape, Shape::Sigma { .. });
                let obj = if sigma { Sigma::new(&cmp, &tau2)?.ty()? } else { Pi::new(&cmp, &tau2)?.ty()? };
                let shape = if sigma {
                    Shape::Sigma { ext: ext2, tau: tau2, dom, cod }
                } else {
                    Shape::Pi { ext: ext2, tau: tau2, dom, cod }
                };
                return Ok(ETy { obj, shape, home: f.target.clone() });
            }
        };
        Ok(ETy { obj: f.ty(&self.obj)?, shape, home: f.target.clone() })
    }

    /// The same type seen from a descendant context of `home`.
    pub fn at(&self, ctx: &Context) -> Result<ETy, CwfError> {
        if self.home.same(ctx) {
            return Ok(self.clone());
        }
        let inc = Subst { source: self.home.clone(), target: ctx.clone(), table: Subst::identity(&self.home).table };
        self.transport(&inc)
    }
}

#[derive(Clone)]
pub(crate) struct Scope {
    pub ctx: Context,
    pub vars: Vec<(String, Mor, ETy)>,
    pub sketch: Arc<Presentation>,
    pub budget: usize,
}

impl Scope {
    pub fn new(ctx: Context, sketch: Arc<Presentation>, budget: usize) -> Scope {
        Scope { ctx, vars: Vec::new(), sketch, budget }
    }

    /// Binds `x` to the variable of `ext`; an equality type becomes a fact.
    pub fn under(&self, mut ext: Context, x: &str, v: Mor, ty: ETy) -> Result<Scope, CwfError> {
        if let Shape::Eq(e) = &ty.at(&ext)?.shape {
            ext.register_fact(&e.lhs, &e.rhs)?;
        }
        let mut vars = self.vars.clone();
        vars.push((x.to_string(), v, ty));
        Ok(Scope { ctx: ext, vars, sketch: self.sketch.clone(), budget: self.budget })
    }

    fn bind(&self, x: &str, dom: &ETy, span: Span) -> EResult<(Scope, Context, Mor)> {
        let (ext, _, v) = extend(&self.ctx, &dom.obj).map_err(at(span))?;
        let s = self.under(ext.clone(), x, v.clone(), dom.clone()).map_err(at(span))?;
        Ok((s, ext, v))
    }

    pub fn ty(&self, t: &Ty) -> EResult<ETy> {
        let plain = |o: Obj| ETy::plain(&self.ctx, o);
        match t {
            Ty::Unit(_) => Ok(plain(Obj::one())),
            Ty::Named(n) => {
                if self.sketch.obj_gen(&n.name) {
                    Ok(plain(Obj::gen(&n.name)))
                } else {
                    fail(n.span, format!("unknown type `{}`", n.name))
                }
            }
            Ty::Prod(a, b) => {
                let (a, b) = (self.ty(a)?, self.ty(b)?);
                let p = Prod::new(&self.ctx, &a.obj, &b.obj).map_err(at(span_of(t)))?;
                Ok(ETy { obj: p.ty(), shape: Shape::Prod(p), home: self.ctx.clone() })
            }
            Ty::Eq(l, r) => {
                let (ml, lt) = self.infer(l)?;
                let mr = self.check(r, &lt)?;
                let e = Eq::new(&self.ctx, &ml, &mr).map_err(at(r.span()))?;
                Ok(ETy { obj: e.ty(), shape: Shape::Eq(e), home: self.ctx.clone() })
            }
            Ty::Sigma(x, a, b) | Ty::Pi(x, a, b) => {
                let dom = self.ty(a)?;
                let (inner, ext, _) = self.bind(&x.name, &dom, x.span)?;
                let cod = inner.ty(b)?;
                let sp = span_of(t);
                let cmp = a_compare(&ext).map_err(at(sp))?;
                let (dom, cod, tau) = (Box::new(dom), Box::new(cod.clone()), cod.obj);
                let (obj, shape) = if matches!(t, Ty::Sigma(..)) {
                    let obj = Sigma::new(&cmp, &tau).and_then(|s| s.ty()).map_err(at(sp))?;
                    (obj, Shape::Sigma { ext, tau, dom, cod })
                } else {
                    let obj = Pi::new(&cmp, &tau).and_then(|s| s.ty()).map_err(at(sp))?;
                    (obj, Shape::Pi { ext, tau, dom, cod })
                };
                Ok(ETy { obj, shape, home: self.ctx.clone() })
            }
        }
    }

    fn here(&self, t: &ETy, span: Span) -> EResult<ETy> {
        t.at(&self.ctx).map_err(at(span))
    }

    /// `<id, s> : G.sigma -> G`.
    fn inst(&self, ext: &Context, s: &Mor, span: Span) -> EResult<Subst> {
        mk_subst(&Subst::identity(&self.ctx), ext, s).map_err(at(span))
    }

    pub fn check(&self, t: &Term, want: &ETy) -> EResult<Mor> {
        let want = self.here(want, t.span())?;
        let sp = t.span();
        let (head, args) = spine(t);
        match (head, args.as_slice(), &want.shape) {
            (Term::Lam(x, body), [], Shape::Pi { ext, tau, dom, cod }) => {
                let v = ext.variable().expect("extension").0;
                let inner = self.under(ext.clone(), &x.name, v, (**dom).clone()).map_err(at(x.span))?;
                let b = inner.check(body, cod)?;
                let cmp = a_compare(ext).map_err(at(sp))?;
                Pi::new(&cmp, tau).and_then(|p| p.lam(&b)).map_err(at(sp))
            }
            (Term::Lam(..), [], _) => fail(sp, format!("a function is not a term of type {}", want.obj)),
            (Term::Builtin(Builtin::Pair, _), [s, u], Shape::Prod(p)) => {
                let ms = self.check(s, &ETy::plain(&self.ctx, p.left.clone()))?;
                let mu = self.check(u, &ETy::plain(&self.ctx, p.right.clone()))?;
                p.pair(&self.ctx, &ms, &mu).map_err(at(sp))
            }
            (Term::Builtin(Builtin::Pair, _), [s, u], Shape::Sigma { ext, tau, dom, cod }) => {
                let ms = self.check(s, dom)?;
                let at_s = self.inst(ext, &ms, s.span())?;
                let mu = self.check(u, &cod.transport(&at_s).map_err(at(u.span()))?)?;
                let cmp = a_compare(ext).map_err(at(sp))?;
                Sigma::new(&cmp, tau).and_then(|g| g.pair(&ms, &mu)).map_err(at(sp))
            }
            (Term::Builtin(Builtin::Refl, _), [], Shape::Eq(e)) => e.refl(&self.ctx, self.budget).map_err(at(sp)),
            _ => {
                let (m, got) = self.infer(t)?;
                self.coerce(m, &got.obj, &want.obj, sp)
            }
        }
    }

    fn coerce(&self, m: Mor, got: &Obj, want: &Obj, span: Span) -> EResult<Mor> {
        if got == want {
            return Ok(m);
        }
        let p = self.ctx.presentation();
        match decide_equal_obj(got, want, p, &self.ctx.facts.facts, self.budget, &[]) {
            Ok(Verdict::Equal { .. }) => Ok(m),
            Ok(_) => fail(span, format!("type mismatch: expected {want}, found {got}")),
            Err(e) => fail(span, e.to_string()),
        }
    }

    pub fn infer(&self, t: &Term) -> EResult<(Mor, ETy)> {
        let sp = t.span();
        let plain = |o: Obj| ETy::plain(&self.ctx, o);
        let (head, args) = spine(t);
        match (head, args.as_slice()) {
            (Term::Builtin(Builtin::Tt, _), []) => Ok((crate::cwf::formers::tt(), plain(Obj::one()))),
            (Term::Ann(e, ty), []) => {
                let want = self.ty(ty)?;
                Ok((self.check(e, &want)?, want))
            }
            (Term::Var(x), _) if self.var(&x.name).is_some() => {
                let (m, ty) = self.var(&x.name).expect("bound");
                self.apply_all(m, ty, &args, sp)
            }
            (Term::Var(x), _) => {
                let Some((d, c)) = self.sketch.mor_gen(&x.name) else {
                    return fail(x.span, format!("unknown name `{}`", x.name));
                };
                let (d, c) = (d.clone(), c.clone());
                if d.is_one() {
                    return self.apply_all(Mor::gen(&x.name), plain(c), &args, sp);
                }
                let Some((a, rest)) = args.split_first() else {
                    return fail(x.span, format!("arrow `{}` : {d} -> {c} needs an argument", x.name));
                };
                let ma = self.check(a, &plain(d))?;
                self.apply_all(Mor::comp(Mor::gen(&x.name), ma), plain(c), rest, sp)
            }
            (Term::Builtin(b @ (Builtin::Fst | Builtin::Snd), _), [u, rest @ ..]) => {
                let (mu, ut) = self.infer(u)?;
                let ut = self.here(&ut, u.span())?;
                let (m, ty) = match (&ut.shape, b) {
                    (Shape::Prod(p), Builtin::Fst) => (p.fst(&mu), plain(p.left.clone())),
                    (Shape::Prod(p), _) => (p.snd(&mu), plain(p.right.clone())),
                    (Shape::Sigma { ext, tau, dom, cod }, _) => {
                        let cmp = a_compare(ext).map_err(at(sp))?;
                        let g = Sigma::new(&cmp, tau).map_err(at(sp))?;
                        let p1 = g.pr1(&mu).map_err(at(sp))?;
                        if *b == Builtin::Fst {
                            (p1, (**dom).clone())
                        } else {
                            let s = self.inst(ext, &p1, sp)?;
                            (g.pr2(&mu).map_err(at(sp))?, cod.transport(&s).map_err(at(sp))?)
                        }
                    }
                    _ => return fail(u.span(), format!("expected a pair, found a term of type {}", ut.obj)),
                };
                self.apply_all(m, ty, rest, sp)
            }
            (Term::Builtin(Builtin::App, _), [f, rest @ ..]) => {
                let (mf, ft) = self.infer(f)?;
                self.apply_all(mf, ft, rest, sp)
            }
            (Term::Builtin(Builtin::Pair, _), [s, u]) => {
                let ((ms, st), (mu, ut)) = (self.infer(s)?, self.infer(u)?);
                let p = Prod::new(&self.ctx, &st.obj, &ut.obj).map_err(at(sp))?;
                let m = p.pair(&self.ctx, &ms, &mu).map_err(at(sp))?;
                Ok((m, ETy { obj: p.ty(), shape: Shape::Prod(p), home: self.ctx.clone() }))
            }
            (Term::Lam(..), _) => fail(sp, "cannot infer the type of a function; annotate it"),
            (Term::Builtin(Builtin::Refl, _), _) => fail(sp, "cannot infer the type of `refl`; annotate it"),
            _ => fail(sp, format!("cannot elaborate `{}`", printer::term(t))),
        }
    }

    fn var(&self, x: &str) -> Option<(Mor, ETy)> {
        self.vars.iter().rev().find(|v| v.0 == x).map(|v| (v.1.clone(), v.2.clone()))
    }

    /// Applies a term of dependent function type to arguments in turn.
    fn apply_all(&self, mut m: Mor, mut ty: ETy, args: &[&Term], span: Span) -> EResult<(Mor, ETy)> {
        for a in args {
            let ft = self.here(&ty, span)?;
            let Shape::Pi { ext, tau, dom, cod } = &ft.shape else {
                return fail(a.span(), format!("not a function: a term of type {}", ft.obj));
            };
            let ma = self.check(a, dom)?;
            let cmp = a_compare(ext).map_err(at(span))?;
            let body = Pi::new(&cmp, tau).and_then(|p| p.app(&m)).map_err(at(span))?;
            let s = self.inst(ext, &ma, a.span())?;
            m = s.tm(&body).map_err(at(span))?;
            ty = cod.transport(&s).map_err(at(span))?;
        }
        Ok((m, ty))
    }
}

fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut h = t;
    while let Term::Apply(f, a) = h {
        args.push(&**a);
        h = f;
    }
    args.reverse();
    (h, args)
}

fn span_of(t: &Ty) -> Span {
    match t {
        Ty::Unit(s) => *s,
        Ty::Named(n) | Ty::Sigma(n, ..) | Ty::Pi(n, ..) => n.span,
        Ty::Prod(a, _) => span_of(a),
        Ty::Eq(l, _) => l.span(),
    }
}

//! Random sketches, telescopes, types, terms and substitutions built from the
//! cwf operations, plus evaluation in the finite models.
#![allow(dead_code)]

use std::ops::ControlFlow;

use lcc_core::closure::{decide_equal, Verdict};
use lcc_core::cwf::formers::tt;
use lcc_core::cwf::{a_compare, compose, extend, mk_subst, weaken, Context, CwfResult, Eq, Pi, Prod, Sigma, Subst};
use lcc_core::fin::{builtin_models, eval_mor, for_each_assignment, MAX_ASSIGNMENTS};
use lcc_core::rewrite::DEFAULT_BUDGET;
use lcc_core::{name, Arrow, Mor, Obj, ObjKind, Presentation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type R = ChaCha8Rng;

pub fn rng(seed: u64) -> R {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One to three objects, a global point of each, and a few arrows between them.
pub fn sketch(r: &mut R) -> Presentation {
    let n = r.gen_range(1..=3);
    let objs: Vec<&str> = ["A", "B", "C"][..n].to_vec();
    let mut arrows: Vec<Arrow> = objs
        .iter()
        .map(|o| Arrow { name: name(&format!("{}0", o.to_lowercase())), dom: Obj::one(), cod: Obj::gen(o) })
        .collect();
    for i in 0..r.gen_range(1..=3) {
        let (d, c) = (objs.choose(r).unwrap(), objs.choose(r).unwrap());
        arrows.push(Arrow { name: name(&format!("f{i}")), dom: Obj::gen(d), cod: Obj::gen(c) });
    }
    Presentation::new(objs.iter().map(|o| name(o)).collect(), arrows, vec![], vec![]).unwrap()
}

/// A type together with the data its formers were built from.
#[derive(Debug, Clone)]
pub enum Shape {
    Plain,
    Prod(Box<GTy>, Box<GTy>),
    Eq(Mor, Mor),
    Sigma { ext: Context, dom: Box<GTy>, tau: Box<GTy> },
    Pi { ext: Context, dom: Box<GTy>, tau: Box<GTy> },
}

#[derive(Debug, Clone)]
pub struct GTy {
    pub obj: Obj,
    pub shape: Shape,
}

pub fn plain(o: Obj) -> GTy {
    GTy { obj: o, shape: Shape::Plain }
}

pub fn sigma_obj(ext: &Context, tau: &Obj) -> CwfResult<Obj> {
    Sigma::new(&a_compare(ext)?, tau)?.ty()
}

pub fn pi_obj(ext: &Context, tau: &Obj) -> CwfResult<Obj> {
    Pi::new(&a_compare(ext)?, tau)?.ty()
}

impl GTy {
    /// Along `f`, re-forming dependent types over the weakened extension.
    pub fn transport(&self, f: &Subst) -> CwfResult<GTy> {
        Ok(match &self.shape {
            Shape::Plain => plain(f.ty(&self.obj)?),
            Shape::Prod(a, b) => {
                let (a, b) = (a.transport(f)?, b.transport(f)?);
                GTy { obj: Prod { left: a.obj.clone(), right: b.obj.clone() }.ty(), shape: Shape::Prod(Box::new(a), Box::new(b)) }
            }
            Shape::Eq(s, t) => {
                let (s, t) = (f.tm(s)?, f.tm(t)?);
                GTy { obj: Obj::pb(s.clone(), t.clone()), shape: Shape::Eq(s, t) }
            }
            Shape::Sigma { ext, dom, tau } | Shape::Pi { ext, dom, tau } => {
                let (ext2, w) = weaken(f, ext)?;
                let (dom, tau) = (Box::new(dom.transport(f)?), Box::new(tau.transport(&w)?));
                if matches!(self.shape, Shape::Sigma { .. }) {
                    GTy { obj: sigma_obj(&ext2, &tau.obj)?, shape: Shape::Sigma { ext: ext2, dom, tau } }
                } else {
                    GTy { obj: pi_obj(&ext2, &tau.obj)?, shape: Shape::Pi { ext: ext2, dom, tau } }
                }
            }
        })
    }
}

/// The inclusion of a context into one of its extensions.
pub fn include(from: &Context, to: &Context) -> Subst {
    Subst { source: from.clone(), target: to.clone(), table: Subst::identity(from).table }
}

/// `<id, s> : G.sigma -> G`.
pub fn inst(parent: &Context, ext: &Context, s: &Mor) -> CwfResult<Subst> {
    mk_subst(&Subst::identity(parent), ext, s)
}

/// A context as the chain of its prefixes, with the type of each variable.
#[derive(Debug, Clone)]
pub struct Tele {
    pub ctxs: Vec<Context>,
    /// Variable `i` has a type living in `ctxs[i]`.
    pub vars: Vec<(Mor, GTy)>,
}

impl Tele {
    pub fn root(p: Presentation) -> Tele {
        Tele { ctxs: vec![Context::free(p)], vars: vec![] }
    }

    pub fn ctx(&self) -> &Context {
        self.ctxs.last().unwrap()
    }

    pub fn push(&self, ty: &GTy) -> CwfResult<Tele> {
        let (mut ext, _, v) = extend(self.ctx(), &ty.obj)?;
        if let Shape::Eq(s, t) = &ty.shape {
            ext.register_fact(s, t)?;
        }
        Ok(self.with(ext, v, ty))
    }

    /// Binds an extension built elsewhere (the binder of a dependent type).
    pub fn with(&self, ext: Context, v: Mor, ty: &GTy) -> Tele {
        let mut t = self.clone();
        t.ctxs.push(ext);
        t.vars.push((v, ty.clone()));
        t
    }

    pub fn pop(&self) -> Option<(Tele, GTy)> {
        let mut t = self.clone();
        t.ctxs.pop();
        let (_, ty) = t.vars.pop()?;
        Some((t, ty))
    }

    pub fn var_ty(&self, i: usize) -> CwfResult<GTy> {
        self.vars[i].1.transport(&include(&self.ctxs[i], self.ctx()))
    }

    /// Sketch arrows (not variables) as `(arrow, dom, cod)`.
    pub fn arrows(&self) -> Vec<Arrow> {
        self.ctxs[0].presentation().all_mor_gens()
    }

    pub fn objects(&self) -> Vec<Obj> {
        self.ctxs[0].presentation().all_obj_gens().iter().map(|n| Obj::gen(n)).collect()
    }
}

pub fn equal(ctx: &Context, l: &Mor, r: &Mor) -> Verdict {
    match decide_equal(l, r, ctx.presentation(), &ctx.facts.facts, DEFAULT_BUDGET, &[], false) {
        Ok(v) => v,
        Err(e) => Verdict::Unknown { report: format!("ill-typed query: {e}") },
    }
}

/// A random inhabitant of `ty` (which lives in the last context of `t`).
pub fn inhabit(r: &mut R, t: &Tele, ty: &GTy, fuel: usize) -> Option<Mor> {
    let ctx = t.ctx();
    let mut cands: Vec<Mor> = (0..t.vars.len())
        .filter(|&i| t.var_ty(i).is_ok_and(|v| v.obj == ty.obj))
        .map(|i| t.vars[i].0.clone())
        .collect();
    let built = match &ty.shape {
        Shape::Plain if ty.obj.is_one() => Some(tt()),
        Shape::Plain => match ty.obj.kind() {
            ObjKind::Gen(_) => {
                let into: Vec<Arrow> = t.arrows().into_iter().filter(|a| a.cod == ty.obj).collect();
                let a = into.choose(r)?.clone();
                if a.dom.is_one() {
                    Some(Mor::gen(&a.name))
                } else if fuel > 0 {
                    inhabit(r, t, &plain(a.dom.clone()), fuel - 1).map(|x| Mor::comp(Mor::gen(&a.name), x))
                } else {
                    None
                }
            }
            _ => None,
        },
        Shape::Prod(a, b) => {
            let (x, y) = (inhabit(r, t, a, fuel)?, inhabit(r, t, b, fuel)?);
            Prod { left: a.obj.clone(), right: b.obj.clone() }.pair(ctx, &x, &y).ok()
        }
        Shape::Eq(s, u) => Eq { lhs: s.clone(), rhs: u.clone() }.refl(ctx, DEFAULT_BUDGET).ok(),
        Shape::Sigma { ext, dom, tau } => {
            let s = inhabit(r, t, dom, fuel)?;
            let at = inst(ctx, ext, &s).ok()?;
            let u = inhabit(r, t, &tau.transport(&at).ok()?, fuel)?;
            Sigma::new(&a_compare(ext).ok()?, &tau.obj).ok()?.pair(&s, &u).ok()
        }
        Shape::Pi { ext, dom, tau } => {
            let v = ext.variable()?.0;
            let inner = t.with(ext.clone(), v, dom);
            let body = inhabit(r, &inner, tau, fuel)?;
            Pi::new(&a_compare(ext).ok()?, &tau.obj).ok()?.lam(&body).ok()
        }
    };
    cands.extend(built);
    cands.choose(r).cloned()
}

/// A random type over the last context of `t`, of size at most `max_size`.
pub fn gen_ty(r: &mut R, t: &Tele, depth: usize, max_size: usize) -> GTy {
    for _ in 0..64 {
        if let Some(ty) = try_ty(r, t, depth) {
            if ty.obj.size() <= max_size {
                return ty;
            }
        }
    }
    plain(t.objects()[0].clone())
}

fn try_ty(r: &mut R, t: &Tele, depth: usize) -> Option<GTy> {
    let ctx = t.ctx();
    let k = if depth == 0 { r.gen_range(0..3) } else { r.gen_range(0..7) };
    match k {
        0 | 1 => Some(plain(t.objects().choose(r)?.clone())),
        2 => {
            let base = plain(t.objects().choose(r)?.clone());
            let (s, u) = (inhabit(r, t, &base, 2)?, inhabit(r, t, &base, 2)?);
            let e = Eq::new(ctx, &s, &u).ok()?;
            Some(GTy { obj: e.ty(), shape: Shape::Eq(s, u) })
        }
        3 => Some(plain(Obj::one())),
        4 => {
            let (a, b) = (try_ty(r, t, depth - 1)?, try_ty(r, t, depth - 1)?);
            Some(GTy { obj: Prod { left: a.obj.clone(), right: b.obj.clone() }.ty(), shape: Shape::Prod(Box::new(a), Box::new(b)) })
        }
        _ => {
            let dom = try_ty(r, t, depth - 1)?;
            let (ext, _, v) = extend(ctx, &dom.obj).ok()?;
            let inner = t.with(ext.clone(), v, &dom);
            let tau = try_ty(r, &inner, depth - 1)?;
            let (dom, tau2) = (Box::new(dom), Box::new(tau.clone()));
            if k == 5 {
                Some(GTy { obj: sigma_obj(&ext, &tau.obj).ok()?, shape: Shape::Sigma { ext, dom, tau: tau2 } })
            } else {
                Some(GTy { obj: pi_obj(&ext, &tau.obj).ok()?, shape: Shape::Pi { ext, dom, tau: tau2 } })
            }
        }
    }
}

pub fn gen_tele(r: &mut R, p: Presentation, depth: usize) -> Tele {
    let mut t = Tele::root(p);
    for _ in 0..depth {
        let ty = gen_ty(r, &t, 1, 25);
        t = t.push(&ty).unwrap();
    }
    t
}

/// A substitution out of `t` built from identities, projections, extensions and
/// composites, nested at most `depth` deep, with the telescope of its target.
pub fn gen_subst(r: &mut R, t: &Tele, depth: usize) -> (Subst, Tele) {
    loop {
        if let Some(x) = try_subst(r, t, depth) {
            return x;
        }
    }
}

fn try_subst(r: &mut R, t: &Tele, depth: usize) -> Option<(Subst, Tele)> {
    let k = if depth == 0 { r.gen_range(0..2) } else { [0, 1, 2, 2, 3][r.gen_range(0..5)] };
    match k {
        0 => Some((Subst::identity(t.ctx()), t.clone())),
        1 => {
            let ty = gen_ty(r, t, 1, 25);
            let t2 = t.push(&ty).ok()?;
            Some((include(t.ctx(), t2.ctx()), t2))
        }
        2 => {
            let (parent, sigma) = t.pop()?;
            let (f, target) = try_subst(r, &parent, depth - 1)?;
            let s = inhabit(r, &target, &sigma.transport(&f).ok()?, 2)?;
            Some((mk_subst(&f, t.ctx(), &s).ok()?, target))
        }
        _ => {
            let (f, t1) = try_subst(r, t, depth - 1)?;
            let (g, t2) = try_subst(r, &t1, depth - 1)?;
            Some((compose(&g, &f).ok()?, t2))
        }
    }
}

/// Evaluates both sides under every admissible assignment into the soundness
/// models. Returns the number of assignments checked.
pub fn holds_in_models(ctx: &Context, l: &Mor, r: &Mor) -> Result<usize, String> {
    let p = ctx.presentation();
    let mut total = 0;
    for m in builtin_models() {
        let mut bad = None;
        for_each_assignment(p, &m, &ctx.facts.facts, MAX_ASSIGNMENTS, &mut |a| {
            total += 1;
            match (eval_mor(p, &m, a, l), eval_mor(p, &m, a, r)) {
                (Ok(x), Ok(y)) if x == y => ControlFlow::Continue(()),
                (x, y) => {
                    bad = Some(format!("in {}: {x:?} vs {y:?} for {l} = {r}", m.name));
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(b) = bad {
            return Err(b);
        }
    }
    Ok(total)
}

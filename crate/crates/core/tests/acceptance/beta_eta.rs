use lcc_core::closure::{decide_with, Verdict};
use lcc_core::cwf::formers::tt;
use lcc_core::cwf::{a_compare, Context, Pi, Prod, Sigma};
use lcc_core::rewrite::{Engine, DEFAULT_BUDGET};
use lcc_core::{Mor, Obj};
use rand::Rng;

use crate::common::*;
use crate::{Outcome, Pool};

const PER: usize = 200;
const MAX_SIZE: usize = 30;

#[derive(Default)]
struct Tally {
    n: usize,
    unknown: usize,
    distinct: Vec<String>,
    largest: usize,
}

/// Decides `l = r` at the default budget, recording every rule instance fired.
fn decide(pool: &mut Pool, tally: &mut Tally, ctx: &Context, l: Mor, r: Mor) {
    if let Err(e) = ctx.boundary(&l).and_then(|b| ctx.boundary(&r).map(|c| (b, c))).map(|(b, c)| (b == c, b, c)) {
        tally.distinct.push(format!("ill-typed: {e}"));
        return;
    }
    let mut e = Engine::new(ctx.presentation(), &ctx.facts.facts, DEFAULT_BUDGET);
    e.set_recording(true);
    let v = decide_with(&mut e, &l, &r, &[]);
    tally.n += 1;
    tally.largest = tally.largest.max(l.size()).max(r.size());
    for (a, b) in e.take_instances() {
        pool.rules.push((ctx.clone(), a, b));
    }
    match v {
        Verdict::Equal { .. } => pool.pairs.push((ctx.clone(), l, r)),
        Verdict::Unknown { report } => {
            tally.unknown += 1;
            if tally.distinct.len() < 3 {
                tally.distinct.push(format!("unknown {l} = {r}: {report}"));
            }
        }
        Verdict::Distinct { .. } => tally.distinct.push(format!("distinct {l} = {r}")),
    }
}

fn small(ms: &[&Mor]) -> bool {
    ms.iter().all(|m| m.size() <= MAX_SIZE)
}

fn tele(r: &mut R) -> Tele {
    let d = r.gen_range(0..=2);
    let sk = sketch(r);
    gen_tele(r, sk, d)
}

/// A dependent type `(ext, dom, tau)` over the end of `t`.
fn dependent(r: &mut R, t: &Tele) -> (Tele, GTy, GTy) {
    let dom = gen_ty(r, t, 1, 12);
    let inner = t.push(&dom).unwrap();
    let tau = gen_ty(r, &inner, 1, 12);
    (inner, dom, tau)
}

/// `app (lam t) = t`.
fn app_lam(r: &mut R, pool: &mut Pool, tally: &mut Tally) {
    let t = tele(r);
    let (inner, _, tau) = dependent(r, &t);
    let Some(body) = inhabit(r, &inner, &tau, 2) else { return };
    let cmp = a_compare(inner.ctx()).unwrap();
    let pi = Pi::new(&cmp, &tau.obj).unwrap();
    let lam = pi.lam(&body).unwrap();
    let redex = pi.app(&lam).unwrap();
    if small(&[&lam, &body]) {
        decide(pool, tally, inner.ctx(), redex, body);
    }
}

/// `lam (app u) = u` for a variable `u` of a `Pi` type.
fn lam_app(r: &mut R, pool: &mut Pool, tally: &mut Tally) {
    let t = tele(r);
    let (inner, dom, tau) = dependent(r, &t);
    let Ok(pty) = pi_obj(inner.ctx(), &tau.obj) else { return };
    let gty = GTy { obj: pty, shape: Shape::Pi { ext: inner.ctx().clone(), dom: Box::new(dom), tau: Box::new(tau) } };
    let with_u = t.push(&gty).unwrap();
    let u = with_u.vars.last().unwrap().0.clone();
    let Shape::Pi { ext, tau, .. } = with_u.var_ty(with_u.vars.len() - 1).unwrap().shape else { unreachable!() };
    let cmp = a_compare(&ext).unwrap();
    let pi = Pi::new(&cmp, &tau.obj).unwrap();
    let eta = pi.lam(&pi.app(&u).unwrap()).unwrap();
    decide(pool, tally, with_u.ctx(), eta, u);
}

/// Projections of pairs, and pairing of projections, for `Sigma` and `x`.
fn pr_pair(r: &mut R, pool: &mut Pool, tally: &mut Tally) {
    let t = tele(r);
    let (inner, dom, tau) = dependent(r, &t);
    let ctx = t.ctx();
    if r.gen_bool(0.5) {
        let cmp = a_compare(inner.ctx()).unwrap();
        let sg = Sigma::new(&cmp, &tau.obj).unwrap();
        let Some(s) = inhabit(r, &t, &dom, 2) else { return };
        let Ok(at) = inst(ctx, inner.ctx(), &s) else { return };
        let Some(u) = inhabit(r, &t, &tau.transport(&at).unwrap(), 2) else { return };
        let p = sg.pair(&s, &u).unwrap();
        if !small(&[&s, &u]) {
            return;
        }
        match r.gen_range(0..3) {
            0 => decide(pool, tally, ctx, sg.pr1(&p).unwrap(), s),
            1 => decide(pool, tally, ctx, sg.pr2(&p).unwrap(), u),
            _ => {
                // A variable of the Sigma type, split and re-paired.
                let gty = GTy { obj: sg.ty().unwrap(), shape: Shape::Sigma { ext: inner.ctx().clone(), dom: Box::new(dom), tau: Box::new(tau) } };
                let with_w = t.push(&gty).unwrap();
                let w = with_w.vars.last().unwrap().0.clone();
                let Shape::Sigma { ext, tau, .. } = with_w.var_ty(with_w.vars.len() - 1).unwrap().shape else { unreachable!() };
                let cmp = a_compare(&ext).unwrap();
                let sg = Sigma::new(&cmp, &tau.obj).unwrap();
                let back = sg.pair(&sg.pr1(&w).unwrap(), &sg.pr2(&w).unwrap()).unwrap();
                decide(pool, tally, with_w.ctx(), back, w);
            }
        }
    } else {
        let (a, b) = (gen_ty(r, &t, 1, 12), gen_ty(r, &t, 1, 12));
        let (Some(x), Some(y)) = (inhabit(r, &t, &a, 2), inhabit(r, &t, &b, 2)) else { return };
        if !small(&[&x, &y]) {
            return;
        }
        let pr = Prod { left: a.obj.clone(), right: b.obj.clone() };
        let p = pr.pair(ctx, &x, &y).unwrap();
        match r.gen_range(0..3) {
            0 => decide(pool, tally, ctx, pr.fst(&p), x),
            1 => decide(pool, tally, ctx, pr.snd(&p), y),
            _ => {
                let gty = GTy { obj: pr.ty(), shape: Shape::Prod(Box::new(a), Box::new(b)) };
                let with_w = t.push(&gty).unwrap();
                let w = with_w.vars.last().unwrap().0.clone();
                let pr = Prod { left: with_w.ctx().type_of(&pr.fst(&w)).unwrap(), right: with_w.ctx().type_of(&pr.snd(&w)).unwrap() };
                let back = pr.pair(with_w.ctx(), &pr.fst(&w), &pr.snd(&w)).unwrap();
                decide(pool, tally, with_w.ctx(), back, w);
            }
        }
    }
}

/// Every term of the unit type is `tt`; every map into `1` is the bang.
fn terminal(r: &mut R, pool: &mut Pool, tally: &mut Tally) {
    let t = tele(r);
    let ctx = t.ctx();
    let ty = gen_ty(r, &t, 2, 25);
    let Some(s) = inhabit(r, &t, &ty, 2) else { return };
    if !small(&[&s]) {
        return;
    }
    match r.gen_range(0..3) {
        0 => decide(pool, tally, ctx, Mor::comp(Mor::bang(ty.obj.clone()), s), tt()),
        1 => {
            let with_x = t.push(&plain(Obj::one())).unwrap();
            let x = with_x.vars.last().unwrap().0.clone();
            decide(pool, tally, with_x.ctx(), x, tt());
        }
        _ => {
            // As homs: `!B . h = !A` for `h : A -> B` in the sketch.
            let arrows = t.arrows();
            let a = &arrows[r.gen_range(0..arrows.len())];
            let h = Mor::comp(Mor::gen(&a.name), Mor::id(a.dom.clone()));
            decide(pool, tally, ctx, Mor::comp(Mor::bang(a.cod.clone()), h), Mor::bang(a.dom.clone()));
        }
    }
}

/// With `p : Eq(s, u)` in context: `s = u`, `p = refl`, and congruence.
fn reflection(r: &mut R, pool: &mut Pool, tally: &mut Tally) {
    let t = tele(r);
    let objs = t.objects();
    let base = plain(objs[r.gen_range(0..objs.len())].clone());
    let (Some(s), Some(u)) = (inhabit(r, &t, &base, 2), inhabit(r, &t, &base, 2)) else { return };
    if !small(&[&s, &u]) {
        return;
    }
    let eq = GTy { obj: Obj::pb(s.clone(), u.clone()), shape: Shape::Eq(s.clone(), u.clone()) };
    let with_p = t.push(&eq).unwrap();
    let ctx = with_p.ctx();
    match r.gen_range(0..3) {
        0 => decide(pool, tally, ctx, s, u),
        1 => {
            let p = with_p.vars.last().unwrap().0.clone();
            decide(pool, tally, ctx, p, Mor::pb_pair(s, u, tt(), tt()));
        }
        _ => {
            let out: Vec<_> = t.arrows().into_iter().filter(|a| a.dom == base.obj).collect();
            if out.is_empty() {
                return;
            }
            let f = Mor::gen(&out[r.gen_range(0..out.len())].name);
            decide(pool, tally, ctx, Mor::comp(f.clone(), s), Mor::comp(f, u));
        }
    }
}

pub fn all(pool: &mut Pool) -> Outcome {
    let mut r = rng(0x5eed_0004);
    type Suite = fn(&mut R, &mut Pool, &mut Tally);
    let suites: [(&str, Suite); 5] = [
        ("app.lam", app_lam),
        ("lam.app", lam_app),
        ("pr-pair", pr_pair),
        ("terminal", terminal),
        ("Eq-reflection", reflection),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, f) in suites {
        let mut tally = Tally::default();
        let mut tries = 0;
        while tally.n < PER && tries < 50 * PER {
            tries += 1;
            f(&mut r, pool, &mut tally);
        }
        let ok = tally.n >= PER && tally.unknown == 0 && tally.distinct.is_empty();
        pass &= ok;
        parts.push(format!("{name}:{} (unknown {}, max encoded size {})", tally.n, tally.unknown, tally.largest));
        if !ok {
            parts.push(format!("{:?}", tally.distinct.first()));
        }
    }
    Outcome { pass, detail: parts.join(", ") }
}

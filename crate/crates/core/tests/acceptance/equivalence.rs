use lcc_core::closure::Verdict;
use lcc_core::cwf::{a_compare, Compare, Context};
use lcc_core::functor::StrictLcc;
use lcc_core::strict::{pullback_functor, slice_view, SliceObj};
use lcc_core::{Mor, Obj};
use rand::Rng;

use crate::common::*;
use crate::Outcome;

#[derive(Default)]
struct Tally {
    engine: usize,
    models: usize,
    assignments: usize,
    fails: Vec<String>,
}

impl Tally {
    /// Engine-Equal, and equal under every admissible assignment.
    fn both(&mut self, what: &str, ctx: &Context, l: &Mor, r: &Mor) {
        match equal(ctx, l, r) {
            Verdict::Equal { .. } => self.engine += 1,
            v => self.fails.push(format!("{what}: engine {v:?}")),
        }
        match holds_in_models(ctx, l, r) {
            Ok(n) => {
                self.models += 1;
                self.assignments += n;
            }
            Err(e) => self.fails.push(format!("{what}: {e}")),
        }
    }
}

/// Maps into `sigma` in the parent: the identity, display maps of types over
/// `G.sigma`, and points.
fn over_sigma(r: &mut R, t: &Tele, inner: &Tele, cmp: &Compare) -> Mor {
    match r.gen_range(0..3) {
        0 => Mor::id(cmp.sigma.clone()),
        1 => {
            let tau = gen_ty(r, inner, 1, 12);
            cmp.a_map(&tau.obj).unwrap()
        }
        _ => inhabit(r, t, &plain(cmp.sigma.clone()), 2)
            .filter(|_| !matches!(cmp.sigma.kind(), lcc_core::ObjKind::Pi(..)))
            .unwrap_or_else(|| Mor::id(cmp.sigma.clone())),
    }
}

fn triangles(tally: &mut Tally, ctx: &Context, s: &Mor, x_map: &Mor, y_map: &Mor) {
    let p = ctx.presentation();
    let (ds, cs) = ctx.boundary(s).unwrap();
    let f = pullback_functor(p, s).unwrap();
    let (sv, cv) = (slice_view(p, &ds).unwrap(), slice_view(p, &cs).unwrap());
    let (x, y): (SliceObj, SliceObj) = (sv.object(x_map).unwrap(), cv.object(y_map).unwrap());

    let eta = f.sigma_unit(&x).unwrap();
    let eps = f.sigma_counit(&f.sigma_obj(&x).unwrap()).unwrap();
    let left = cv.comp(&eps, &f.sigma_hom(&eta).unwrap()).unwrap();
    tally.both("Sigma triangle", ctx, &left.under, &Mor::id(f.sigma_obj(&x).unwrap().vertex));
    let eta = f.sigma_unit(&f.obj(&y).unwrap()).unwrap();
    let eps = f.sigma_counit(&y).unwrap();
    let right = sv.comp(&f.hom(&eps).unwrap(), &eta).unwrap();
    tally.both("s* triangle (Sigma)", ctx, &right.under, &Mor::id(f.obj(&y).unwrap().vertex));

    let eta = f.pi_unit(&y).unwrap();
    let eps = f.pi_counit(&f.obj(&y).unwrap()).unwrap();
    let left = sv.comp(&eps, &f.hom(&eta).unwrap()).unwrap();
    tally.both("s* triangle (Pi)", ctx, &left.under, &Mor::id(f.obj(&y).unwrap().vertex));
    let eta = f.pi_unit(&f.pi_obj(&x).unwrap()).unwrap();
    let eps = f.pi_counit(&x).unwrap();
    let right = cv.comp(&f.pi_hom(&eps).unwrap(), &eta).unwrap();
    tally.both("Pi triangle", ctx, &right.under, &Mor::id(f.pi_obj(&x).unwrap().vertex));
}

pub fn check() -> Outcome {
    let mut r = rng(0x5eed_0007);
    let mut tally = Tally::default();
    let mut n = 0;
    while n < 100 {
        let t = {
            let d = r.gen_range(0..=2);
            let sk = sketch(&mut r);
            gen_tele(&mut r, sk, d)
        };
        let sigma = gen_ty(&mut r, &t, 1, 12);
        let inner = t.push(&sigma).unwrap();
        let tau = gen_ty(&mut r, &inner, 2, 25);
        let cmp = a_compare(inner.ctx()).unwrap();
        n += 1;

        // b(a(tau)) ~ tau over G.sigma.
        let i = cmp.ba_iso(&tau.obj).unwrap();
        let back = Obj::pb(cmp.v.clone(), cmp.a_map(&tau.obj).unwrap());
        tally.both("b.a inv.fwd", inner.ctx(), &Mor::comp(i.inv.clone(), i.fwd.clone()), &Mor::id(tau.obj.clone()));
        tally.both("b.a fwd.inv", inner.ctx(), &Mor::comp(i.fwd, i.inv), &Mor::id(back));

        // a(b(x)) ~ x over sigma.
        let x = cmp.view().object(&over_sigma(&mut r, &t, &inner, &cmp)).unwrap();
        let i = cmp.ab_iso(&x).unwrap();
        let top = cmp.a_vertex(&cmp.b_obj(&x)).unwrap();
        tally.both("a.b fwd.inv", t.ctx(), &Mor::comp(i.fwd.clone(), i.inv.clone()), &Mor::id(x.vertex.clone()));
        tally.both("a.b inv.fwd", t.ctx(), &Mor::comp(i.inv, i.fwd), &Mor::id(top));

        // Sigma -| s* -| Pi along a display map or a point of sigma.
        let s = match r.gen_range(0..2) {
            0 => cmp.a_map(&tau.obj).unwrap(),
            _ => over_sigma(&mut r, &t, &inner, &cmp),
        };
        let ds = t.ctx().boundary(&s).unwrap().0;
        let x_map = if r.gen_bool(0.5) {
            Mor::id(ds)
        } else {
            let objs = t.objects();
            let b = objs[r.gen_range(0..objs.len())].clone();
            Mor::p1(Mor::bang(ds), Mor::bang(b))
        };
        let y_map = over_sigma(&mut r, &t, &inner, &cmp);
        triangles(&mut tally, t.ctx(), &s, &x_map, &y_map);
    }
    Outcome {
        pass: tally.fails.is_empty(),
        detail: format!(
            "{n} samples, {} composites engine-Equal to identities, {} checked in models ({} assignments), {} failures {:?}",
            tally.engine,
            tally.models,
            tally.assignments,
            tally.fails.len(),
            tally.fails.first()
        ),
    }
}

use std::collections::HashMap;

use lcc_core::closure::Verdict;
use lcc_core::cwf::{bar_term, bar_term_inv, extend, Context};
use lcc_core::presentation::Presentation;
use lcc_core::term::{mor_mentions, obj_mentions};
use lcc_core::{name, Mor, Obj};

use crate::common::equal;
use crate::Outcome;

const MAX: usize = 10;

/// Every well-typed object and morphism term of size at most `MAX`, by size.
/// Pairs and curries must satisfy their side conditions up to the engine.
struct Terms {
    objs: Vec<Vec<Obj>>,
    mors: Vec<Vec<(Mor, Obj, Obj)>>,
    side_unknown: usize,
}

impl Terms {
    fn enumerate(ctx: &Context, gens: &[Mor]) -> Terms {
        let mut t = Terms { objs: vec![vec![]; MAX + 1], mors: vec![vec![]; MAX + 1], side_unknown: 0 };
        t.objs[1] = vec![Obj::gen("A"), Obj::one()];
        for g in gens {
            let (d, c) = ctx.boundary(g).unwrap();
            t.mors[1].push((g.clone(), d, c));
        }
        for s in 2..=MAX {
            t.objects_of(ctx, s);
            t.morphisms_of(ctx, s);
        }
        t
    }

    fn splits(&self, total: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 1 {
            return if total >= 1 { vec![vec![total]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 1..total {
            for mut rest in self.splits(total - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    fn objects_of(&mut self, ctx: &Context, s: usize) {
        let mut out = Vec::new();
        for sz in self.splits(s - 1, 2) {
            for (f1, d1, c1) in &self.mors[sz[0]] {
                for (f2, _, c2) in &self.mors[sz[1]] {
                    if c1 == c2 {
                        out.push(Obj::pb(f1.clone(), f2.clone()));
                    }
                    // Pi(f1, g) with g = f2 over dom f1.
                    if d1 == c2 {
                        out.push(Obj::pi(f1.clone(), f2.clone()));
                    }
                }
            }
        }
        out.retain(|o| ctx.check_ty(o).is_ok());
        self.objs[s] = out;
    }

    fn push(&mut self, ctx: &Context, s: usize, m: Mor) {
        if let Ok((d, c)) = ctx.boundary(&m) {
            self.mors[s].push((m, d, c));
        }
    }

    /// Whether the engine proves `l = r`; counts the undecided.
    fn holds(&mut self, ctx: &Context, l: Mor, r: Mor) -> bool {
        match equal(ctx, &l, &r) {
            Verdict::Equal { .. } => true,
            Verdict::Distinct { .. } => false,
            Verdict::Unknown { .. } => {
                self.side_unknown += 1;
                false
            }
        }
    }

    fn morphisms_of(&mut self, ctx: &Context, s: usize) {
        for o in self.objs[s - 1].clone() {
            self.push(ctx, s, Mor::id(o.clone()));
            self.push(ctx, s, Mor::bang(o));
        }
        for sz in self.splits(s - 1, 2) {
            let (a, b) = (self.mors[sz[0]].clone(), self.mors[sz[1]].clone());
            for (x, dx, cx) in &a {
                for (y, _, cy) in &b {
                    if dx == cy {
                        self.push(ctx, s, Mor::comp(x.clone(), y.clone()));
                    }
                    if cx == cy {
                        self.push(ctx, s, Mor::p1(x.clone(), y.clone()));
                        self.push(ctx, s, Mor::p2(x.clone(), y.clone()));
                    }
                    if dx == cy {
                        self.push(ctx, s, Mor::pi_map(x.clone(), y.clone()));
                        self.push(ctx, s, Mor::eval(x.clone(), y.clone()));
                    }
                }
            }
        }
        for sz in self.splits(s - 1, 4) {
            let pick = |k: usize| self.mors[sz[k]].clone();
            let (m0, m1, m2, m3) = (pick(0), pick(1), pick(2), pick(3));
            for (f1, d1, c1) in &m0 {
                for (f2, d2, c2) in &m1 {
                    // A pair into Pb(f1, f2).
                    if c1 == c2 {
                        for (q1, e1, k1) in &m2 {
                            if k1 != d1 {
                                continue;
                            }
                            for (q2, e2, k2) in &m3 {
                                if k2 == d2 && e1 == e2 {
                                    let (l, r) = (Mor::comp(f1.clone(), q1.clone()), Mor::comp(f2.clone(), q2.clone()));
                                    if self.holds(ctx, l, r) {
                                        self.push(ctx, s, Mor::pb_pair(f1.clone(), f2.clone(), q1.clone(), q2.clone()));
                                    }
                                }
                            }
                        }
                    }
                    // A curry: f2 plays `g`, the third component plays `f2`.
                    if c2 == d1 {
                        for (k, _, kc) in &m2 {
                            if kc != c1 {
                                continue;
                            }
                            for (e, _, ec) in &m3 {
                                let pb = Obj::pb(f1.clone(), k.clone());
                                if ctx.boundary(e).map(|b| b.0) != Ok(pb) || ec != d2 {
                                    continue;
                                }
                                let (l, r) = (Mor::comp(f2.clone(), e.clone()), Mor::p1(f1.clone(), k.clone()));
                                if self.holds(ctx, l, r) {
                                    self.push(ctx, s, Mor::curry(f1.clone(), f2.clone(), k.clone(), e.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn all(&self) -> impl Iterator<Item = &(Mor, Obj, Obj)> {
        self.mors.iter().flatten()
    }
}

pub fn check() -> Outcome {
    let base = Context::free(Presentation::new(vec![name("A")], vec![], vec![], vec![]).unwrap());
    let (ext, _, v) = extend(&base, &Obj::gen("A")).unwrap();
    let vname = ext.variable_name().unwrap();
    let mut fails = Vec::new();
    let mut unknown = 0;
    let mut verdict = |what: &str, ctx: &Context, l: &Mor, r: &Mor| match equal(ctx, l, r) {
        Verdict::Equal { .. } => None,
        Verdict::Unknown { .. } => {
            unknown += 1;
            Some(format!("{what}: unknown {l} = {r}"))
        }
        Verdict::Distinct { .. } => Some(format!("{what}: distinct {l} = {r}")),
    };

    // h : tau -> sigma over the free context, through G.tau and back.
    let terms = Terms::enumerate(&base, &[]);
    let mut exts: HashMap<Obj, Context> = HashMap::new();
    let mut maps = 0;
    for (h, tau, _) in terms.all() {
        let e = exts.entry(tau.clone()).or_insert_with(|| extend(&base, tau).unwrap().0);
        let back = bar_term_inv(e, h).and_then(|t| bar_term(e, &t));
        match back {
            Ok(b) => fails.extend(verdict("map", &base, &b, h)),
            Err(err) => fails.push(format!("map {h}: {err}")),
        }
        maps += 1;
    }

    // t : 1 -> sigma over G.A with sigma free of v, through A -> sigma and back.
    let over = Terms::enumerate(&ext, &[v]);
    let mut tms = 0;
    for (t, d, c) in over.all() {
        if !d.is_one() || obj_mentions(c, &mut |n| *n == vname) {
            continue;
        }
        let back = bar_term(&ext, t).and_then(|h| {
            debug_assert!(!mor_mentions(&h, &mut |n| *n == vname));
            bar_term_inv(&ext, &h)
        });
        match back {
            Ok(b) => fails.extend(verdict("term", &ext, &b, t)),
            Err(err) => fails.push(format!("term {t}: {err}")),
        }
        tms += 1;
    }

    Outcome {
        pass: fails.is_empty() && maps > 0 && tms > 0,
        detail: format!(
            "{maps} maps over the free context, {tms} terms over its extension by A (sizes <= {MAX}, {} + {} side conditions undecided), {unknown} unknown, {} failures {:?}",
            terms.side_unknown,
            over.side_unknown,
            fails.len(),
            fails.first()
        ),
    }
}

//! Oriented lcc rules, normalization of morphism terms and the equality oracle.
//!
//! A normal form is a chain of atoms `a1 . a2 . ... . an` (right-nested
//! composition, `an` applied first) in which every atom has normalized
//! arguments. Rules are tried at every chain position, rightmost first.

use std::collections::HashMap;

use serde::Serialize;

use crate::presentation::{MarkDiagram, Presentation, TermResult, Typer};
use crate::term::{LiftMark, MarkRef, Mor, MorKind, Obj, ObjKind};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: &'static str,
    pub position: usize,
    pub before: u64,
    pub after: u64,
}

impl std::fmt::Display for TraceStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} @{} {:016x} -> {:016x}", self.rule, self.position, self.before, self.after)
    }
}

/// Normalized data of a Pb or Pi marking, as chains.
#[derive(Debug, Clone)]
enum NormMark {
    Tm,
    Pb { p1: Vec<Mor>, p2: Vec<Mor>, f1: Mor, f2: Mor },
    Pi { f1: Mor, g: Mor, f2: Mor, f2c: Vec<Mor>, eps: Vec<Mor>, canonical: bool },
}

/// Flattens a composite into its non-identity atoms, outermost first.
pub fn chain_of(m: &Mor) -> Vec<Mor> {
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(t) = stack.pop() {
        match t.kind() {
            MorKind::Comp(g, f) => {
                stack.push(f.clone());
                stack.push(g.clone());
            }
            MorKind::Id(_) => {}
            _ => out.push(t),
        }
    }
    out
}

fn build(chain: &[Mor], dom: &Obj) -> Mor {
    Mor::comp_all(chain.iter().cloned()).unwrap_or_else(|| Mor::id(dom.clone()))
}

fn strip_prefix<'c>(c: &'c [Mor], prefix: &[Mor]) -> Option<&'c [Mor]> {
    (c.len() >= prefix.len() && c[..prefix.len()] == *prefix).then(|| &c[prefix.len()..])
}

pub struct Engine<'a> {
    pres: &'a Presentation,
    base: Option<Box<Engine<'a>>>,
    typer: Typer<'a>,
    budget: usize,
    steps: usize,
    exhausted: bool,
    tracing: bool,
    trace: Vec<TraceStep>,
    recording: bool,
    instances: Vec<(Mor, Mor)>,
    nf_depth: usize,
    rules: Vec<(Vec<Mor>, Vec<Mor>)>,
    facts: Vec<(Mor, Mor)>,
    tm_marks: Option<HashMap<Obj, MarkRef>>,
    marks: HashMap<MarkRef, NormMark>,
    memo: HashMap<Mor, Mor>,
    obj_memo: HashMap<Obj, Obj>,
}

impl<'a> Engine<'a> {
    /// An engine for `pres`, with extra facts assumed (they are normalized and
    /// oriented larger to smaller). For a lift, facts belong to its base.
    pub fn new(pres: &'a Presentation, facts: &[(Mor, Mor)], budget: usize) -> Self {
        let base = pres.lift_base().map(|b| Box::new(Engine::new(b, facts, budget)));
        let mut e = Engine {
            pres,
            base,
            typer: Typer::lenient(pres),
            budget,
            steps: 0,
            exhausted: false,
            tracing: false,
            trace: Vec::new(),
            recording: false,
            instances: Vec::new(),
            nf_depth: 0,
            rules: Vec::new(),
            facts: Vec::new(),
            tm_marks: None,
            marks: HashMap::new(),
            memo: HashMap::new(),
            obj_memo: HashMap::new(),
        };
        if !pres.is_lift() {
            for (l, r) in pres.all_equations().iter().chain(facts) {
                e.add_rule(l, r);
            }
        }
        e
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.pres
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<TraceStep> {
        std::mem::take(&mut self.trace)
    }

    /// Keep every fired rule instance as a pair of parallel terms.
    pub fn set_recording(&mut self, on: bool) {
        self.recording = on;
    }

    pub fn instances(&self) -> &[(Mor, Mor)] {
        &self.instances
    }

    pub fn take_instances(&mut self) -> Vec<(Mor, Mor)> {
        std::mem::take(&mut self.instances)
    }

    pub fn steps(&self) -> usize {
        self.steps + self.base.as_ref().map_or(0, |b| b.steps())
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted || self.base.as_ref().is_some_and(|b| b.exhausted())
    }

    /// Resets the step counter and the exhaustion flag, keeping caches.
    pub fn reset_budget(&mut self, budget: usize) {
        self.budget = budget;
        self.steps = 0;
        self.exhausted = false;
        if let Some(b) = &mut self.base {
            b.reset_budget(budget);
        }
    }

    pub fn facts(&self) -> &[(Mor, Mor)] {
        &self.facts
    }

    /// Adds `l = r` as a rewrite rule between normal forms. Returns false for a no-op.
    pub fn add_rule(&mut self, l: &Mor, r: &Mor) -> bool {
        self.facts.push((l.clone(), r.clone()));
        let (nl, nr) = (self.normalize(l), self.normalize(r));
        if nl == nr {
            return false;
        }
        let (big, small) = if nl > nr { (nl, nr) } else { (nr, nl) };
        let lc = chain_of(&big);
        if lc.is_empty() {
            return false;
        }
        self.rules.push((lc, chain_of(&small)));
        self.memo.clear();
        self.obj_memo.clear();
        true
    }

    fn fire(&mut self, rule: &'static str, position: usize, before: &[Mor], after: &[Mor]) -> bool {
        if self.steps >= self.budget {
            self.exhausted = true;
            return false;
        }
        self.steps += 1;
        if self.tracing {
            let h = |c: &[Mor]| Mor::comp_all(c.iter().cloned()).map_or(0, |m| m.hash_id());
            self.trace.push(TraceStep { rule, position, before: h(before), after: h(after) });
        }
        if self.recording {
            if let Some(last) = before.last() {
                let dom = self.dom_of(last);
                self.instances.push((build(before, &dom), build(after, &dom)));
            }
        }
        true
    }

    fn boundary(&mut self, m: &Mor) -> (Obj, Obj) {
        self.typer.boundary(m).unwrap_or_else(|e| panic!("engine met an ill-typed term {m}: {e}"))
    }

    pub fn normalize_obj(&mut self, o: &Obj) -> Obj {
        if let Some(r) = self.obj_memo.get(o) {
            return r.clone();
        }
        let r = match o.kind() {
            ObjKind::Gen(_) | ObjKind::One => o.clone(),
            ObjKind::Pb(f1, f2) => Obj::pb(self.normalize(f1), self.normalize(f2)),
            ObjKind::Pi(f1, g) => Obj::pi(self.normalize(f1), self.normalize(g)),
            ObjKind::Lifted(x) => match &mut self.base {
                Some(b) => Obj::lifted(b.normalize_obj(x)),
                None => o.clone(),
            },
        };
        self.obj_memo.insert(o.clone(), r.clone());
        r
    }

    /// Normal form of `m`. Its boundary is the normalized boundary of `m`.
    pub fn normalize(&mut self, m: &Mor) -> Mor {
        if let Some(r) = self.memo.get(m) {
            return r.clone();
        }
        let dom = self.boundary(m).0;
        let dom = self.normalize_obj(&dom);
        let mut chain = Vec::new();
        for a in chain_of(m) {
            chain.extend(self.norm_atom(&a));
        }
        if chain_of(m).is_empty() {
            if let MorKind::Id(_) = m.kind() {
                let r = Mor::id(dom);
                self.memo.insert(m.clone(), r.clone());
                return r;
            }
        }
        let chain = self.reduce(chain, &dom);
        let r = build(&chain, &dom);
        if !self.exhausted() {
            self.memo.insert(m.clone(), r.clone());
        }
        r
    }

    /// Equality of two normal forms up to extensionality: maps into a pullback
    /// are compared through both projections, maps into a dependent product
    /// through their transposes.
    pub fn equal_nf(&mut self, x: &Mor, y: &Mor) -> bool {
        if x == y {
            return true;
        }
        if self.nf_depth >= 6 || self.exhausted() {
            return false;
        }
        self.nf_depth += 1;
        let r = self.equal_nf_inner(x, y);
        self.nf_depth -= 1;
        r
    }

    fn equal_nf_inner(&mut self, x: &Mor, y: &Mor) -> bool {
        let cod = self.cod_of(x);
        match cod.kind() {
            ObjKind::One => true,
            ObjKind::Pb(f1, f2) => [Mor::p1(f1.clone(), f2.clone()), Mor::p2(f1.clone(), f2.clone())].iter().all(|p| {
                let a = self.normalize(&Mor::comp(p.clone(), x.clone()));
                let b = self.normalize(&Mor::comp(p.clone(), y.clone()));
                self.equal_nf(&a, &b)
            }),
            ObjKind::Pi(f1, g) => {
                let pm = Mor::pi_map(f1.clone(), g.clone());
                let kx = self.normalize(&Mor::comp(pm.clone(), x.clone()));
                let ky = self.normalize(&Mor::comp(pm.clone(), y.clone()));
                if !self.equal_nf(&kx, &ky) {
                    return false;
                }
                let ev = |m: &Mor| {
                    Mor::comp(
                        Mor::eval(f1.clone(), g.clone()),
                        Mor::pb_pair(
                            f1.clone(),
                            pm.clone(),
                            Mor::p1(f1.clone(), kx.clone()),
                            Mor::comp(m.clone(), Mor::p2(f1.clone(), kx.clone())),
                        ),
                    )
                };
                let (a, b) = (self.normalize(&ev(x)), self.normalize(&ev(y)));
                self.equal_nf(&a, &b)
            }
            _ => self.congruent(x, y),
        }
    }

    /// Chains that agree atom by atom, up to `equal_nf` inside pairs and curries.
    fn congruent(&mut self, x: &Mor, y: &Mor) -> bool {
        let (xc, yc) = (chain_of(x), chain_of(y));
        xc.len() == yc.len()
            && xc.iter().zip(&yc).all(|(a, b)| {
                a == b
                    || match (a.kind(), b.kind()) {
                        (MorKind::PbPair { f1, f2, q1, q2 }, MorKind::PbPair { f1: g1, f2: g2, q1: r1, q2: r2 }) => {
                            f1 == g1 && f2 == g2 && self.equal_nf(q1, r1) && self.equal_nf(q2, r2)
                        }
                        (MorKind::Curry { f1, g, f2, e }, MorKind::Curry { f1: h1, g: h, f2: h2, e: e2 }) => {
                            f1 == h1 && g == h && f2 == h2 && self.equal_nf(e, e2)
                        }
                        _ => false,
                    }
            })
    }

    fn nchain(&mut self, m: &Mor) -> Vec<Mor> {
        chain_of(&self.normalize(m))
    }

    fn tm_mark(&mut self, o: &Obj) -> Option<MarkRef> {
        if self.tm_marks.is_none() {
            let mut map = HashMap::new();
            let decl: Vec<(usize, Obj)> = self
                .pres
                .declared_markings()
                .iter()
                .enumerate()
                .filter_map(|(i, m)| match m {
                    crate::presentation::Marking::Tm { obj } => Some((i, obj.clone())),
                    _ => None,
                })
                .collect();
            if self.pres.is_lift() {
                map.insert(Obj::lifted(Obj::one()), MarkRef::Lift(LiftMark::Tm));
                for (i, t) in decl {
                    let t = self.normalize_obj(&Obj::lifted(t));
                    map.entry(t).or_insert(MarkRef::Lift(LiftMark::Declared(i)));
                }
            } else {
                for (i, t) in decl {
                    let t = self.normalize_obj(&t);
                    map.entry(t).or_insert(MarkRef::Declared(i));
                }
            }
            self.tm_marks = Some(map);
        }
        self.tm_marks.as_ref().and_then(|m| m.get(o).cloned())
    }

    fn mark(&mut self, m: &MarkRef) -> NormMark {
        if let Some(n) = self.marks.get(m) {
            return n.clone();
        }
        let d = self.pres.mark_diagram(m).unwrap_or_else(|e| panic!("engine met a bad marking {m}: {e}"));
        let n = match d {
            MarkDiagram::Tm { .. } => NormMark::Tm,
            MarkDiagram::Pb { p1, p2, f1, f2, .. } => NormMark::Pb {
                p1: self.nchain(&p1),
                p2: self.nchain(&p2),
                f1: self.normalize(&f1),
                f2: self.normalize(&f2),
            },
            MarkDiagram::Pi { f1, g, f2, eps, .. } => {
                let (f1, g, f2) = (self.normalize(&f1), self.normalize(&g), self.normalize(&f2));
                let eps = self.nchain(&eps);
                let canonical = f2 == Mor::pi_map(f1.clone(), g.clone()) && eps == vec![Mor::eval(f1.clone(), g.clone())];
                NormMark::Pi { f2c: chain_of(&f2), f1, g, f2, eps, canonical }
            }
        };
        self.marks.insert(m.clone(), n.clone());
        n
    }

    fn norm_markref(&mut self, m: &MarkRef) -> MarkRef {
        match (m, &mut self.base) {
            (MarkRef::Lift(LiftMark::Pb(a, b)), Some(base)) => {
                MarkRef::Lift(LiftMark::Pb(base.normalize(a), base.normalize(b)))
            }
            (MarkRef::Lift(LiftMark::Pi(a, b)), Some(base)) => {
                MarkRef::Lift(LiftMark::Pi(base.normalize(a), base.normalize(b)))
            }
            _ => m.clone(),
        }
    }

    fn dom_of(&mut self, m: &Mor) -> Obj {
        let d = self.boundary(m).0;
        self.normalize_obj(&d)
    }

    fn cod_of(&mut self, m: &Mor) -> Obj {
        let c = self.boundary(m).1;
        self.normalize_obj(&c)
    }

    fn reduced(&mut self, rule: &'static str, atom: &Mor, to: Vec<Mor>) -> Vec<Mor> {
        if self.fire(rule, 0, std::slice::from_ref(atom), &to) {
            to
        } else {
            vec![atom.clone()]
        }
    }

    /// Normalizes the arguments of one atom and applies the atom-local rules.
    fn norm_atom(&mut self, a: &Mor) -> Vec<Mor> {
        match a.kind() {
            MorKind::Gen(_) => vec![a.clone()],
            MorKind::Id(_) => vec![],
            MorKind::Comp(..) => self.nchain(a),
            MorKind::Bang(x) => {
                let x = self.normalize_obj(x);
                if x.is_one() {
                    vec![]
                } else {
                    vec![Mor::bang(x)]
                }
            }
            MorKind::P1(f1, f2) => vec![Mor::p1(self.normalize(f1), self.normalize(f2))],
            MorKind::P2(f1, f2) => {
                let (f1, f2) = (self.normalize(f1), self.normalize(f2));
                let atom = Mor::p2(f1.clone(), f2.clone());
                if matches!(f2.kind(), MorKind::Id(_)) {
                    let mut to = chain_of(&f1);
                    to.push(Mor::p1(f1, f2));
                    self.reduced("pb0", &atom, to)
                } else {
                    vec![atom]
                }
            }
            MorKind::PbPair { f1, f2, q1, q2 } => {
                let (f1, f2) = (self.normalize(f1), self.normalize(f2));
                let (q1, q2) = (self.normalize(q1), self.normalize(q2));
                self.pair_atom(f1, f2, q1, q2)
            }
            MorKind::PiMap(f1, g) => vec![Mor::pi_map(self.normalize(f1), self.normalize(g))],
            MorKind::Eval(f1, g) => {
                let (f1, g) = (self.normalize(f1), self.normalize(g));
                let atom = Mor::eval(f1.clone(), g.clone());
                if matches!(g.kind(), MorKind::Id(_)) {
                    let pm = self.normalize(&Mor::pi_map(f1.clone(), g));
                    let to = vec![Mor::p1(f1, pm)];
                    self.reduced("pi0", &atom, to)
                } else {
                    vec![atom]
                }
            }
            MorKind::Curry { f1, g, f2, e } => {
                let (f1, g) = (self.normalize(f1), self.normalize(g));
                let (f2, e) = (self.normalize(f2), self.normalize(e));
                self.curry_atom(f1, g, f2, e)
            }
            MorKind::MarkInv(m) => {
                let m = self.norm_markref(m);
                let atom = Mor::mark_inv(m.clone());
                match self.mark(&m) {
                    NormMark::Pb { p1, p2, f1, f2 } => {
                        if p1 == vec![Mor::p1(f1.clone(), f2.clone())] && p2 == vec![Mor::p2(f1.clone(), f2.clone())] {
                            self.reduced("mark-canonical", &atom, vec![])
                        } else if p1.is_empty() {
                            self.reduced("pb-mark-leg", &atom, vec![Mor::p1(f1, f2)])
                        } else if p2.is_empty() {
                            self.reduced("pb-mark-leg", &atom, vec![Mor::p2(f1, f2)])
                        } else {
                            vec![atom]
                        }
                    }
                    NormMark::Pi { f1, g, f2c, canonical, .. } => {
                        if canonical {
                            self.reduced("mark-canonical", &atom, vec![])
                        } else if f2c.is_empty() {
                            self.reduced("pi-mark-leg", &atom, vec![Mor::pi_map(f1, g)])
                        } else {
                            vec![atom]
                        }
                    }
                    NormMark::Tm => vec![atom],
                }
            }
            MorKind::LiftedGen(f) => match &mut self.base {
                Some(b) => b.nchain(f).into_iter().map(Mor::lifted_gen).collect(),
                None => vec![a.clone()],
            },
        }
    }

    fn pair_atom(&mut self, f1: Mor, f2: Mor, q1: Mor, q2: Mor) -> Vec<Mor> {
        let atom = Mor::pb_pair(f1.clone(), f2.clone(), q1.clone(), q2.clone());
        let (f1c, f2c) = (f1.clone(), f2.clone());
        let (p1, p2) = (Mor::p1(f1.clone(), f2.clone()), Mor::p2(f1, f2));
        let (q1c, q2c) = (chain_of(&q1), chain_of(&q2));
        let mut guesses = Vec::new();
        if q1c.first() == Some(&p1) {
            guesses.push(q1c[1..].to_vec());
        }
        if q2c.first() == Some(&p2) && guesses.first().map(|g| g[..] != q2c[1..]).unwrap_or(true) {
            guesses.push(q2c[1..].to_vec());
        }
        let dom = self.dom_of(&q1);
        if dom == Obj::pb(f1c.clone(), f2c.clone()) {
            guesses.push(vec![]);
        }
        if guesses.is_empty() {
            return vec![atom];
        }
        for w in guesses {
            let wm = build(&w, &dom);
            let (a, b) = (self.normalize(&Mor::comp(p1.clone(), wm.clone())), self.normalize(&Mor::comp(p2.clone(), wm)));
            if self.equal_nf(&a, &q1) && self.equal_nf(&b, &q2) {
                return self.reduced("pb2eta", &atom, w);
            }
        }
        vec![atom]
    }

    fn curry_atom(&mut self, f1: Mor, g: Mor, f2: Mor, e: Mor) -> Vec<Mor> {
        let atom = Mor::curry(f1.clone(), g.clone(), f2.clone(), e.clone());
        let pm = Mor::pi_map(f1.clone(), g.clone());
        let (f2c, ec) = (chain_of(&f2), chain_of(&e));
        let p2 = Mor::p2(f1.clone(), f2.clone());
        let mut guesses = Vec::new();
        if f2c.first() == Some(&pm) {
            guesses.push(f2c[1..].to_vec());
        }
        let dom = self.dom_of(&f2);
        let p2_is_bang = self.dom_of(&f2).is_one().then(|| Mor::bang(Obj::pb(f1.clone(), f2.clone())));
        let mut found = Vec::new();
        Self::eval_sites(&ec, &f1, &g, &mut found);
        for q2 in found {
            // Sites under a nested curry see `p2(f1, f2)` followed by more projections.
            let q2c = chain_of(&q2);
            for (j, a) in q2c.iter().enumerate() {
                let w = &q2c[..j];
                if (*a == p2 || Some(a) == p2_is_bang.as_ref()) && !guesses.iter().any(|g| g[..] == *w) {
                    guesses.push(w.to_vec());
                }
            }
            if guesses.len() > 4 {
                break;
            }
        }
        for w in guesses {
            let wm = build(&w, &dom);
            let k = self.normalize(&Mor::comp(pm.clone(), wm.clone()));
            if !self.equal_nf(&k, &f2) {
                continue;
            }
            let expected = Mor::comp(
                Mor::eval(f1.clone(), g.clone()),
                Mor::pb_pair(f1.clone(), pm.clone(), Mor::p1(f1.clone(), f2.clone()), Mor::comp(wm, p2.clone())),
            );
            let n = self.normalize(&expected);
            if self.equal_nf(&n, &e) {
                return self.reduced("pi2eta", &atom, w);
            }
        }
        vec![atom]
    }

    /// Second components fed to `ev(f1, g)` anywhere inside `chain`.
    fn eval_sites(chain: &[Mor], f1: &Mor, g: &Mor, out: &mut Vec<Mor>) {
        for (i, a) in chain.iter().enumerate() {
            if let (MorKind::Eval(a1, b1), Some(MorKind::PbPair { q2, .. })) = (a.kind(), chain.get(i + 1).map(|m| m.kind())) {
                if a1 == f1 && b1 == g {
                    out.push(q2.clone());
                }
            }
            match a.kind() {
                MorKind::PbPair { q1, q2, .. } => {
                    Self::eval_sites(&chain_of(q1), f1, g, out);
                    Self::eval_sites(&chain_of(q2), f1, g, out);
                }
                MorKind::Curry { e, .. } => Self::eval_sites(&chain_of(e), f1, g, out),
                _ => {}
            }
        }
    }

    fn reduce(&mut self, mut chain: Vec<Mor>, dom: &Obj) -> Vec<Mor> {
        'outer: loop {
            if self.exhausted() {
                return chain;
            }
            for i in (0..chain.len()).rev() {
                if let Some((start, end, repl, rule)) = self.redex_at(&chain, i, dom) {
                    if !self.fire(rule, i, &chain[start..end], &repl) {
                        return chain;
                    }
                    chain.splice(start..end, repl);
                    continue 'outer;
                }
            }
            return chain;
        }
    }

    /// `f1 = <q1, q2>` and `f2 = <r1, r2>` over one cospan force `rj . P2 = qj . P1`.
    /// A leg `rj = r . !` is matched against the collapsed `r . !Pb(f1, f2)`.
    #[allow(clippy::type_complexity)]
    fn pair_legs(
        chain: &[Mor],
        i: usize,
        c: &Mor,
        f1: &Mor,
        f2: &Mor,
    ) -> Option<(usize, usize, Vec<Mor>, &'static str)> {
        let (MorKind::PbPair { f1: g1, f2: g2, q1, q2 }, MorKind::PbPair { f1: h1, f2: h2, q1: r1, q2: r2 }) =
            (f1.kind(), f2.kind())
        else {
            return None;
        };
        if g1 != h1 || g2 != h2 {
            return None;
        }
        let p1 = Mor::p1(f1.clone(), f2.clone());
        let mut legs = Vec::new();
        Self::leg_pairs(q1, r1, &mut legs);
        Self::leg_pairs(q2, r2, &mut legs);
        match c.kind() {
            MorKind::P2(..) => legs.iter().find_map(|(q, r)| {
                let s = if r.is_empty() { i } else { Self::suffix_before(chain, i, r)? };
                let mut repl = q.clone();
                repl.push(p1.clone());
                Some((s, i + 1, repl, "pb-pair-legs"))
            }),
            MorKind::Bang(_) => legs.iter().find_map(|(q, r)| {
                let (last, r) = r.split_last()?;
                if !matches!(last.kind(), MorKind::Bang(_)) {
                    return None;
                }
                let s = Self::suffix_before(chain, i, r)?;
                let mut repl = q.clone();
                repl.push(p1.clone());
                Some((s, i + 1, repl, "pb-pair-legs"))
            }),
            _ => None,
        }
    }

    /// `(q, r)` and, when both are pairs over one cospan, their legs too.
    fn leg_pairs(q: &Mor, r: &Mor, out: &mut Vec<(Vec<Mor>, Vec<Mor>)>) {
        out.push((chain_of(q), chain_of(r)));
        if let (MorKind::PbPair { f1: g1, f2: g2, q1, q2 }, MorKind::PbPair { f1: h1, f2: h2, q1: r1, q2: r2 }) =
            (q.kind(), r.kind())
        {
            if g1 == h1 && g2 == h2 {
                Self::leg_pairs(q1, r1, out);
                Self::leg_pairs(q2, r2, out);
            }
        }
    }

    fn suffix_before(chain: &[Mor], i: usize, pat: &[Mor]) -> Option<usize> {
        let k = pat.len();
        (k > 0 && i >= k && chain[i - k..i] == *pat).then(|| i - k)
    }

    #[allow(clippy::type_complexity)]
    fn redex_at(&mut self, chain: &[Mor], i: usize, dom: &Obj) -> Option<(usize, usize, Vec<Mor>, &'static str)> {
        let n = chain.len();
        let c = chain[i].clone();
        let next = chain.get(i + 1).cloned();

        let cod = self.cod_of(&c);
        if cod.is_one() {
            let repl = if dom.is_one() { vec![] } else { vec![Mor::bang(dom.clone())] };
            if chain[i..] != repl[..] {
                return Some((i, n, repl, "tm2"));
            }
        } else if let Some(m) = self.tm_mark(&cod) {
            let repl = if *dom == cod {
                vec![]
            } else if dom.is_one() {
                vec![Mor::mark_inv(m)]
            } else {
                vec![Mor::mark_inv(m), Mor::bang(dom.clone())]
            };
            if chain[i..] != repl[..] {
                return Some((i, n, repl, "tm-mark"));
            }
        }

        match c.kind() {
            MorKind::Bang(x) => {
                if let ObjKind::Pb(f1, f2) = x.kind() {
                    if let Some(r) = Self::pair_legs(chain, i, &c, f1, f2) {
                        return Some(r);
                    }
                }
            }
            MorKind::P1(f1, f2) | MorKind::P2(f1, f2) => {
                if let Some(MorKind::PbPair { f1: g1, f2: g2, q1, q2 }) = next.as_ref().map(|m| m.kind()) {
                    if f1 == g1 && f2 == g2 {
                        let q = if matches!(c.kind(), MorKind::P1(..)) { q1 } else { q2 };
                        return Some((i, i + 2, chain_of(q), "pb2beta"));
                    }
                }
                if let MorKind::P1(..) = c.kind() {
                    // `f1 . P1 = r . !` when `f2 = r . !` is constant, or `f2 = r` leaves 1.
                    let mut f2c = chain_of(f2);
                    if self.dom_of(f2).is_one() {
                        f2c.push(Mor::bang(Obj::one()));
                    }
                    if let Some((last, r)) = f2c.split_last() {
                        if matches!(last.kind(), MorKind::Bang(_)) && !r.is_empty() {
                            let f1c = chain_of(f1);
                            let start = if f1c.is_empty() { Some(i) } else { Self::suffix_before(chain, i, &f1c) };
                            if let Some(s) = start {
                                let mut repl = r.to_vec();
                                repl.push(Mor::bang(Obj::pb(f1.clone(), f2.clone())));
                                return Some((s, i + 1, repl, "pb-const"));
                            }
                        }
                    }
                }
                if let MorKind::P2(..) = c.kind() {
                    if let Some(s) = Self::suffix_before(chain, i, &chain_of(f2)) {
                        let mut repl = chain_of(f1);
                        repl.push(Mor::p1(f1.clone(), f2.clone()));
                        return Some((s, i + 1, repl, "pb0"));
                    }
                }
                if let Some(r) = Self::pair_legs(chain, i, &c, f1, f2) {
                    return Some(r);
                }
            }
            MorKind::PbPair { f1, f2, q1, q2 } => {
                if i + 1 < n {
                    let w = build(&chain[i + 1..], dom);
                    let nq1 = self.normalize(&Mor::comp(q1.clone(), w.clone()));
                    let nq2 = self.normalize(&Mor::comp(q2.clone(), w));
                    let repl = self.pair_atom(f1.clone(), f2.clone(), nq1, nq2);
                    return Some((i, n, repl, "pb-nat"));
                }
            }
            MorKind::Curry { f1, g, f2, e } => {
                if i + 1 < n {
                    let w = build(&chain[i + 1..], dom);
                    let nf2 = self.normalize(&Mor::comp(f2.clone(), w.clone()));
                    let reidx = Mor::pb_pair(
                        f1.clone(),
                        f2.clone(),
                        Mor::p1(f1.clone(), nf2.clone()),
                        Mor::comp(w, Mor::p2(f1.clone(), nf2.clone())),
                    );
                    let ne = self.normalize(&Mor::comp(e.clone(), reidx));
                    let repl = self.curry_atom(f1.clone(), g.clone(), nf2, ne);
                    return Some((i, n, repl, "pi-nat"));
                }
            }
            MorKind::PiMap(f1, g) => {
                if let Some(MorKind::Curry { f1: h1, g: h2, f2, .. }) = next.as_ref().map(|m| m.kind()) {
                    if f1 == h1 && g == h2 {
                        return Some((i, i + 2, chain_of(f2), "pi-map-beta"));
                    }
                }
            }
            MorKind::Eval(f1, g) => {
                if let Some(MorKind::PbPair { f1: a, f2: b, q1, q2 }) = next.as_ref().map(|m| m.kind()) {
                    let q2c = chain_of(q2);
                    if let [cur] = &q2c[..] {
                        if let MorKind::Curry { f1: c1, g: c2, f2: f2p, e } = cur.kind() {
                            if a == f1 && c1 == f1 && c2 == g && *b == self.normalize(&Mor::pi_map(f1.clone(), g.clone())) {
                                let d = self.dom_of(f2p);
                                let mut repl = chain_of(e);
                                repl.extend(self.pair_atom(f1.clone(), f2p.clone(), q1.clone(), Mor::id(d)));
                                return Some((i, i + 2, repl, "pi2beta"));
                            }
                        }
                    }
                }
                if let Some(s) = Self::suffix_before(chain, i, &chain_of(g)) {
                    let pm = self.normalize(&Mor::pi_map(f1.clone(), g.clone()));
                    return Some((s, i + 1, vec![Mor::p1(f1.clone(), pm)], "pi0"));
                }
            }
            MorKind::MarkInv(m) => match self.mark(m) {
                NormMark::Pb { p1, p2, f1, f2 } => {
                    if let Some(s) = Self::suffix_before(chain, i, &p1) {
                        return Some((s, i + 1, vec![Mor::p1(f1, f2)], "pb-mark-leg"));
                    }
                    if let Some(s) = Self::suffix_before(chain, i, &p2) {
                        return Some((s, i + 1, vec![Mor::p2(f1, f2)], "pb-mark-leg"));
                    }
                    if let Some(MorKind::PbPair { f1: a, f2: b, q1, q2 }) = next.as_ref().map(|m| m.kind()) {
                        if *a == f1 && *b == f2 {
                            let (q1c, q2c) = (chain_of(q1), chain_of(q2));
                            if let (Some(w1), Some(w2)) = (strip_prefix(&q1c, &p1), strip_prefix(&q2c, &p2)) {
                                if w1 == w2 {
                                    return Some((i, i + 2, w1.to_vec(), "pb-mark-inv"));
                                }
                            }
                        }
                    }
                }
                NormMark::Pi { f1, g, f2, f2c, eps, .. } => {
                    if let Some(s) = Self::suffix_before(chain, i, &f2c) {
                        return Some((s, i + 1, vec![Mor::pi_map(f1, g)], "pi-mark-leg"));
                    }
                    if let Some(MorKind::Curry { f1: a, g: b, f2: f2p, e }) = next.as_ref().map(|m| m.kind()) {
                        if *a == f1 && *b == g {
                            let f2pc = chain_of(f2p);
                            if let Some(w) = strip_prefix(&f2pc, &f2c) {
                                let w = w.to_vec();
                                let d = self.dom_of(f2p);
                                let epsm = build(&eps, &Obj::pb(f1.clone(), f2.clone()));
                                let expected = Mor::comp(
                                    epsm,
                                    Mor::pb_pair(
                                        f1.clone(),
                                        f2.clone(),
                                        Mor::p1(f1.clone(), f2p.clone()),
                                        Mor::comp(build(&w, &d), Mor::p2(f1.clone(), f2p.clone())),
                                    ),
                                );
                                if self.normalize(&expected) == *e {
                                    return Some((i, i + 2, w, "pi-mark-inv"));
                                }
                            }
                        }
                    }
                }
                NormMark::Tm => {}
            },
            _ => {}
        }

        if let MorKind::PbPair { f1, f2, q1, q2 } = c.kind() {
            let q2c = chain_of(q2);
            if let Some(MorKind::MarkInv(m)) = q2c.first().map(|m| m.kind()) {
                if let NormMark::Pi { f1: mf1, g, f2: mf2, eps, .. } = self.mark(m) {
                    if mf1 == *f1 && mf2 == *f2 {
                        if let Some(s) = Self::suffix_before(chain, i, &eps) {
                            let pm = Mor::pi_map(f1.clone(), g.clone());
                            let d = self.dom_of(q2);
                            let r = build(&q2c[1..], &d);
                            let mut repl = vec![Mor::eval(f1.clone(), g.clone())];
                            repl.extend(self.pair_atom(f1.clone(), pm, q1.clone(), r));
                            return Some((s, i + 1, repl, "pi-mark-eps"));
                        }
                    }
                }
            }
        }

        for (l, r) in &self.rules {
            let k = l.len();
            if i + k <= n && chain[i..i + k] == l[..] {
                return Some((i, i + k, r.clone(), "eq"));
            }
        }
        None
    }
}

/// Normal form of `t` over `p` with the presentation equations only.
pub fn normalize(t: &Mor, p: &Presentation, budget: usize) -> TermResult<(Mor, bool)> {
    Typer::new(p).boundary(t)?;
    let mut e = Engine::new(p, &[], budget);
    let r = e.normalize(t);
    Ok((r, e.exhausted()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Arrow;
    use crate::term::name;

    fn arrow(n: &str, d: Obj, c: Obj) -> Arrow {
        Arrow { name: name(n), dom: d, cod: c }
    }

    fn g(n: &str) -> Mor {
        Mor::gen(n)
    }

    fn o(n: &str) -> Obj {
        Obj::gen(n)
    }

    /// g : A -> B, f : B -> C, u : D -> Pi(f, g), x y : A -> B.
    fn sample() -> Presentation {
        Presentation::new(
            ["A", "B", "C", "D"].into_iter().map(name).collect(),
            vec![
                arrow("g", o("A"), o("B")),
                arrow("f", o("B"), o("C")),
                arrow("u", o("D"), Obj::pi(g("f"), g("g"))),
                arrow("x", o("A"), o("B")),
                arrow("y", o("A"), o("B")),
            ],
            vec![],
            vec![],
        )
        .unwrap()
    }

    fn nf(p: &Presentation, t: &Mor) -> Mor {
        let (r, ex) = normalize(t, p, DEFAULT_BUDGET).unwrap();
        assert!(!ex);
        r
    }

    fn h() -> Mor {
        Mor::comp(Mor::pi_map(g("f"), g("g")), g("u"))
    }

    #[test]
    fn identities_vanish() {
        let p = sample();
        assert_eq!(nf(&p, &Mor::comp(Mor::id(o("B")), g("g"))), g("g"));
        assert_eq!(nf(&p, &Mor::comp(g("g"), Mor::id(o("A")))), g("g"));
        assert_eq!(nf(&p, &Mor::id(o("A"))), Mor::id(o("A")));
    }

    #[test]
    fn projections_of_pairs() {
        let p = sample();
        let (f1, f2) = (g("f"), h());
        let e = Obj::pb(f1.clone(), f2.clone());
        let (q1, q2) = (Mor::p1(f1.clone(), f2.clone()), Mor::p2(f1.clone(), f2.clone()));
        let pair = Mor::pb_pair(f1.clone(), f2.clone(), q1.clone(), q2.clone());
        assert_eq!(nf(&p, &pair), Mor::id(e));
        assert_eq!(nf(&p, &Mor::comp(q1.clone(), pair.clone())), q1);
    }

    #[test]
    fn terminal_collapse() {
        let p = sample();
        let lhs = Mor::comp(Mor::bang(o("B")), g("g"));
        assert_eq!(nf(&p, &lhs), Mor::bang(o("A")));
        assert_eq!(nf(&p, &Mor::bang(Obj::one())), Mor::id(Obj::one()));
    }

    #[test]
    fn leg_after_eval() {
        let p = sample();
        let lhs = Mor::comp(g("g"), Mor::eval(g("f"), g("g")));
        assert_eq!(nf(&p, &lhs), Mor::p1(g("f"), Mor::pi_map(g("f"), g("g"))));
    }

    #[test]
    fn curry_eta_and_beta() {
        let p = sample();
        let (f, gg, hh) = (g("f"), g("g"), h());
        let pm = Mor::pi_map(f.clone(), gg.clone());
        let e = Mor::comp(
            Mor::eval(f.clone(), gg.clone()),
            Mor::pb_pair(f.clone(), pm.clone(), Mor::p1(f.clone(), hh.clone()), Mor::comp(g("u"), Mor::p2(f.clone(), hh.clone()))),
        );
        let cu = Mor::curry(f.clone(), gg.clone(), hh.clone(), e.clone());
        assert_eq!(nf(&p, &cu), g("u"));
        let beta = Mor::comp(
            Mor::eval(f.clone(), gg.clone()),
            Mor::pb_pair(f.clone(), pm.clone(), Mor::p1(f.clone(), hh.clone()), Mor::comp(cu, Mor::p2(f.clone(), hh.clone()))),
        );
        assert_eq!(nf(&p, &beta), nf(&p, &e));
        let id = Mor::curry(f.clone(), gg.clone(), pm.clone(), Mor::eval(f.clone(), gg.clone()));
        assert_eq!(nf(&p, &id), Mor::id(Obj::pi(f, gg)));
    }

    #[test]
    fn equations_orient_and_apply_under_context() {
        let p = Presentation::new(
            vec![name("A"), name("B"), name("C")],
            vec![arrow("x", o("A"), o("B")), arrow("y", o("A"), o("B")), arrow("k", o("B"), o("C"))],
            vec![(g("x"), g("y"))],
            vec![],
        )
        .unwrap();
        let l = nf(&p, &Mor::comp(g("k"), g("x")));
        let r = nf(&p, &Mor::comp(g("k"), g("y")));
        assert_eq!(l, r);
    }

    #[test]
    fn facts_become_rules() {
        let p = sample();
        let mut e = Engine::new(&p, &[(g("x"), g("y"))], DEFAULT_BUDGET);
        let l = e.normalize(&Mor::comp(g("f"), g("x")));
        let r = e.normalize(&Mor::comp(g("f"), g("y")));
        assert_eq!(l, r);
        let mut plain = Engine::new(&p, &[], DEFAULT_BUDGET);
        assert_ne!(plain.normalize(&g("x")), plain.normalize(&g("y")));
    }

    #[test]
    fn tracing_records_steps_and_budget_exhausts() {
        let p = sample();
        let mut e = Engine::new(&p, &[], DEFAULT_BUDGET);
        e.set_tracing(true);
        e.normalize(&Mor::comp(Mor::bang(o("B")), g("g")));
        assert!(e.trace().iter().any(|s| s.rule == "tm2"));
        let mut tiny = Engine::new(&p, &[], 0);
        tiny.normalize(&Mor::comp(Mor::bang(o("B")), g("g")));
        assert!(tiny.exhausted());
    }

    /// A : point a0, a second object E, `t : E -> A`.
    fn pointed() -> Presentation {
        Presentation::new(
            vec![name("A"), name("E")],
            vec![arrow("a0", Obj::one(), o("A")), arrow("t", o("E"), o("A"))],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn constant_leg_wins() {
        let p = pointed();
        let c = Mor::comp(g("a0"), Mor::bang(o("E")));
        let pb = Obj::pb(g("t"), c.clone());
        let lhs = Mor::comp(g("t"), Mor::p1(g("t"), c.clone()));
        assert_eq!(nf(&p, &lhs), Mor::comp(g("a0"), Mor::bang(pb)));
        // The leg itself leaves 1.
        let id = Mor::id(o("A"));
        let pb = Obj::pb(id.clone(), g("a0"));
        assert_eq!(nf(&p, &Mor::p1(id.clone(), g("a0"))), Mor::comp(g("a0"), Mor::bang(pb)));
    }

    #[test]
    fn nested_pair_legs() {
        // Over A x A: the equalizer-like pullback of <p2, p1> and <p2, p2>.
        let p = pointed();
        let a = o("A");
        let (ba, aa) = (Mor::bang(a.clone()), Obj::pb(Mor::bang(a.clone()), Mor::bang(a.clone())));
        let (x1, x2) = (Mor::p1(ba.clone(), ba.clone()), Mor::p2(ba.clone(), ba.clone()));
        let pair = |l: &Mor, r: &Mor| Mor::pb_pair(ba.clone(), ba.clone(), l.clone(), r.clone());
        let l = Mor::pb_pair(ba.clone(), Mor::bang(aa.clone()), x1.clone(), pair(&x2, &x1));
        let r = Mor::pb_pair(ba.clone(), Mor::bang(aa.clone()), x1.clone(), pair(&x2, &x2));
        let mut e = Engine::new(&p, &[], DEFAULT_BUDGET);
        let lhs = e.normalize(&Mor::comp(x2.clone(), Mor::p2(l.clone(), r.clone())));
        let rhs = e.normalize(&Mor::comp(x2, Mor::p1(l, r)));
        assert!(e.equal_nf(&lhs, &rhs));
    }

    #[test]
    fn congruence_inside_pairs() {
        // w : E -> Pb(id, a0) and its expansion differ as normal forms; an opaque
        // m : Pb(id, a0) x E -> A sees them through a pair.
        let id = Mor::id(o("A"));
        let pt = Obj::pb(id.clone(), g("a0"));
        let (bp, be) = (Mor::bang(pt.clone()), Mor::bang(o("E")));
        let prod = Obj::pb(bp.clone(), be.clone());
        let p = Presentation::new(
            vec![name("A"), name("E")],
            vec![arrow("a0", Obj::one(), o("A")), arrow("w", o("E"), pt.clone()), arrow("m", prod, o("A"))],
            vec![],
            vec![],
        )
        .unwrap();
        let expanded = Mor::pb_pair(id.clone(), g("a0"), Mor::comp(g("a0"), be.clone()), be.clone());
        let wrap = |x: Mor| Mor::comp(g("m"), Mor::pb_pair(bp.clone(), be.clone(), x, Mor::id(o("E"))));
        let mut e = Engine::new(&p, &[], DEFAULT_BUDGET);
        let (l, r) = (e.normalize(&wrap(g("w"))), e.normalize(&wrap(expanded)));
        assert_ne!(l, r);
        assert!(e.equal_nf(&l, &r));
    }
}

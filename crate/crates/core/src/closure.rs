//! Congruence closure over normal forms and the three-valued equality oracle.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::fin::{countermodel_search, Countermodel, FinStrictLcc, Query};
use crate::presentation::{Presentation, TermError, TermResult, Typer};
use crate::rewrite::{Engine, TraceStep};
use crate::term::{LiftMark, MarkRef, Mor, MorKind, Obj, ObjKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Equal { trace: Vec<TraceStep> },
    Distinct { countermodel: Countermodel },
    Unknown { report: String },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    O(Obj),
    M(Mor),
}

fn label_and_children(n: &Node) -> (u64, Vec<Node>) {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    let mut ch = Vec::new();
    match n {
        Node::O(o) => {
            std::mem::discriminant(o.kind()).hash(&mut h);
            match o.kind() {
                ObjKind::Gen(x) => x.hash(&mut h),
                ObjKind::One => {}
                ObjKind::Pb(a, b) | ObjKind::Pi(a, b) => ch.extend([Node::M(a.clone()), Node::M(b.clone())]),
                ObjKind::Lifted(x) => x.hash(&mut h),
            }
        }
        Node::M(m) => {
            std::mem::discriminant(m.kind()).hash(&mut h);
            match m.kind() {
                MorKind::Gen(x) => x.hash(&mut h),
                MorKind::Id(a) | MorKind::Bang(a) => ch.push(Node::O(a.clone())),
                MorKind::Comp(a, b) | MorKind::P1(a, b) | MorKind::P2(a, b) | MorKind::PiMap(a, b) | MorKind::Eval(a, b) => {
                    ch.extend([Node::M(a.clone()), Node::M(b.clone())])
                }
                MorKind::PbPair { f1, f2, q1, q2 } => {
                    ch.extend([f1, f2, q1, q2].into_iter().map(|x| Node::M(x.clone())))
                }
                MorKind::Curry { f1, g, f2, e } => ch.extend([f1, g, f2, e].into_iter().map(|x| Node::M(x.clone()))),
                MorKind::MarkInv(r) => match r {
                    MarkRef::Lift(LiftMark::Pb(a, b)) | MarkRef::Lift(LiftMark::Pi(a, b)) => {
                        std::mem::discriminant(r).hash(&mut h);
                        matches!(r, MarkRef::Lift(LiftMark::Pb(..))).hash(&mut h);
                        ch.extend([Node::M(a.clone()), Node::M(b.clone())]);
                    }
                    _ => r.hash(&mut h),
                },
                MorKind::LiftedGen(x) => x.hash(&mut h),
            }
        }
    }
    (h.finish(), ch)
}

/// Union-find congruence closure over a finite set of terms.
#[derive(Default)]
pub struct CongruenceClosure {
    ids: HashMap<Node, usize>,
    nodes: Vec<(u64, Vec<usize>)>,
    parent: Vec<usize>,
}

impl CongruenceClosure {
    fn add(&mut self, n: Node) -> usize {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        let (label, ch) = label_and_children(&n);
        let ch: Vec<usize> = ch.into_iter().map(|c| self.add(c)).collect();
        let i = self.nodes.len();
        self.nodes.push((label, ch));
        self.parent.push(i);
        self.ids.insert(n, i);
        i
    }

    pub fn add_mor(&mut self, m: &Mor) -> usize {
        self.add(Node::M(m.clone()))
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }

    /// Propagates congruence to a fixpoint.
    pub fn close(&mut self) {
        loop {
            let mut sigs: HashMap<(u64, Vec<usize>), usize> = HashMap::new();
            let mut merged = false;
            for i in 0..self.nodes.len() {
                let (label, ch) = self.nodes[i].clone();
                let key = (label, ch.into_iter().map(|c| self.find(c)).collect::<Vec<_>>());
                match sigs.get(&key) {
                    Some(&j) if self.find(j) != self.find(i) => {
                        self.union(i, j);
                        merged = true;
                    }
                    Some(_) => {}
                    None => {
                        sigs.insert(key, i);
                    }
                }
            }
            if !merged {
                return;
            }
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Decides `t = u` over `p` with extra facts.
pub fn decide_equal(
    t: &Mor,
    u: &Mor,
    p: &Presentation,
    facts: &[(Mor, Mor)],
    budget: usize,
    models: &[FinStrictLcc],
    trace: bool,
) -> TermResult<Verdict> {
    let mut e = Engine::new(p, facts, budget);
    e.set_tracing(trace);
    check_parallel(&mut e, t, u)?;
    Ok(decide_with(&mut e, t, u, models))
}

fn check_parallel(e: &mut Engine, t: &Mor, u: &Mor) -> TermResult<()> {
    let mut ty = Typer::new(e.presentation());
    let (bt, bu) = (ty.boundary(t)?, ty.boundary(u)?);
    if bt == bu {
        return Ok(());
    }
    let n = |e: &mut Engine, x: &Obj| e.normalize_obj(x);
    let (d1, c1, d2, c2) = (n(e, &bt.0), n(e, &bt.1), n(e, &bu.0), n(e, &bu.1));
    if d1 != d2 {
        return Err(TermError::BoundaryMismatch { context: "equality query (domains)".into(), left: d1, right: d2 });
    }
    if c1 != c2 {
        return Err(TermError::BoundaryMismatch { context: "equality query (codomains)".into(), left: c1, right: c2 });
    }
    Ok(())
}

/// Equality with a prepared engine; boundaries are assumed parallel.
pub fn decide_with(e: &mut Engine, t: &Mor, u: &Mor, models: &[FinStrictLcc]) -> Verdict {
    let (nt, nu) = (e.normalize(t), e.normalize(u));
    if e.exhausted() {
        return Verdict::Unknown { report: format!("budget exhausted after {} steps", e.steps()) };
    }
    if nt == nu || e.equal_nf(&nt, &nu) {
        return Verdict::Equal { trace: e.take_trace() };
    }
    let mut cc = CongruenceClosure::default();
    let (a, b) = (cc.add_mor(&nt), cc.add_mor(&nu));
    let eqs: Vec<(Mor, Mor)> = e.presentation().all_equations().iter().chain(e.facts()).cloned().collect();
    if !e.presentation().is_lift() {
        for (l, r) in eqs {
            let (l, r) = (e.normalize(&l), e.normalize(&r));
            let (i, j) = (cc.add_mor(&l), cc.add_mor(&r));
            cc.union(i, j);
        }
    }
    cc.close();
    if cc.same(a, b) {
        return Verdict::Equal { trace: e.take_trace() };
    }
    if !models.is_empty() {
        let facts: Vec<(Mor, Mor)> = e.facts().to_vec();
        if let Some(cm) = countermodel_search(e.presentation(), &facts, models, &Query::Mors(t.clone(), u.clone())) {
            return Verdict::Distinct { countermodel: cm };
        }
    }
    Verdict::Unknown { report: format!("normal forms differ: {nt} vs {nu} ({} steps)", e.steps()) }
}

/// Type equality: syntactic equality of normal forms, else a separating model.
pub fn decide_equal_obj(
    x: &Obj,
    y: &Obj,
    p: &Presentation,
    facts: &[(Mor, Mor)],
    budget: usize,
    models: &[FinStrictLcc],
) -> TermResult<Verdict> {
    let mut ty = Typer::new(p);
    ty.check_obj(x)?;
    ty.check_obj(y)?;
    let mut e = Engine::new(p, facts, budget);
    let (nx, ny) = (e.normalize_obj(x), e.normalize_obj(y));
    if e.exhausted() {
        return Ok(Verdict::Unknown { report: format!("budget exhausted after {} steps", e.steps()) });
    }
    if nx == ny {
        return Ok(Verdict::Equal { trace: e.take_trace() });
    }
    if let Some(cm) = countermodel_search(p, facts, models, &Query::Objs(x.clone(), y.clone())) {
        return Ok(Verdict::Distinct { countermodel: cm });
    }
    Ok(Verdict::Unknown { report: format!("types differ syntactically: {nx} vs {ny}") })
}

/// Context-local store of assumed equalities (from inhabited equality types).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Facts {
    pub facts: Vec<(Mor, Mor)>,
}

impl Facts {
    /// Records `t = u`; identical sides are a no-op.
    pub fn register_fact(&mut self, p: &Presentation, t: &Mor, u: &Mor) -> TermResult<bool> {
        let mut e = Engine::new(p, &self.facts, crate::rewrite::DEFAULT_BUDGET);
        check_parallel(&mut e, t, u)?;
        if t == u || self.facts.iter().any(|(a, b)| (a == t && b == u) || (a == u && b == t)) {
            return Ok(false);
        }
        self.facts.push((t.clone(), u.clone()));
        Ok(true)
    }
}

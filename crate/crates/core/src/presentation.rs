//! Finite presentations of strict lcc categories and boundary inference.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{name, LiftMark, MarkRef, Mor, MorKind, Name, Obj, ObjKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(Name),
    #[error("boundary mismatch in {context}: `{left}` vs `{right}`")]
    BoundaryMismatch { context: String, left: Obj, right: Obj },
    #[error("malformed marking #{index}: {reason}")]
    MalformedMarking { index: usize, reason: String },
    #[error("ill-formed term `{subterm}`: {reason}")]
    IllFormed { subterm: String, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(Name),
    #[error("presentation is already a lift")]
    AlreadyLifted,
    #[error("target rejects: {0}")]
    TargetRejects(String),
}

pub type TermResult<T> = Result<T, TermError>;

fn ill(t: &dyn std::fmt::Display, reason: impl Into<String>) -> TermError {
    TermError::IllFormed { subterm: t.to_string(), reason: reason.into() }
}

/// A marked diagram declared in a sketch. Pullback legs of `Pi` markings are
/// the canonical ones, so `eps` has domain `pb(f1, f2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Marking {
    Tm { obj: Obj },
    Pb { p1: Mor, p2: Mor, f1: Mor, f2: Mor },
    Pi { f1: Mor, g: Mor, f2: Mor, eps: Mor },
}

/// Resolved data of a marking, in whatever presentation its `MarkInv` lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkDiagram {
    Tm { vertex: Obj },
    Pb { vertex: Obj, p1: Mor, p2: Mor, f1: Mor, f2: Mor },
    Pi { vertex: Obj, f1: Mor, g: Mor, f2: Mor, eps: Mor },
}

impl MarkDiagram {
    /// Comparison map from the marked vertex into the canonical universal object.
    pub fn comparison(&self) -> Mor {
        match self {
            MarkDiagram::Tm { vertex } => Mor::bang(vertex.clone()),
            MarkDiagram::Pb { p1, p2, f1, f2, .. } => {
                Mor::pb_pair(f1.clone(), f2.clone(), p1.clone(), p2.clone())
            }
            MarkDiagram::Pi { f1, g, f2, eps, .. } => {
                Mor::curry(f1.clone(), g.clone(), f2.clone(), eps.clone())
            }
        }
    }
    pub fn vertex(&self) -> &Obj {
        match self {
            MarkDiagram::Tm { vertex } | MarkDiagram::Pb { vertex, .. } | MarkDiagram::Pi { vertex, .. } => vertex,
        }
    }
    pub fn canonical(&self) -> Obj {
        match self {
            MarkDiagram::Tm { .. } => Obj::one(),
            MarkDiagram::Pb { f1, f2, .. } => Obj::pb(f1.clone(), f2.clone()),
            MarkDiagram::Pi { f1, g, .. } => Obj::pi(f1.clone(), g.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Free,
    Extension { parent: Arc<Presentation>, sigma: Obj },
    Lift { base: Arc<Presentation> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Arrow {
    pub name: Name,
    pub dom: Obj,
    pub cod: Obj,
}

/// A finitely presented strict lcc category. Extension and lift presentations
/// own only their new generators and delegate everything else to the parent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Presentation {
    pub objects: Vec<Name>,
    pub arrows: Vec<Arrow>,
    pub equations: Vec<(Mor, Mor)>,
    pub markings: Vec<Marking>,
    pub origin: Origin,
}

impl Presentation {
    pub fn empty() -> Self {
        Presentation { objects: vec![], arrows: vec![], equations: vec![], markings: vec![], origin: Origin::Free }
    }

    /// Builds and validates a free presentation on a marked sketch.
    pub fn new(
        objects: Vec<Name>,
        arrows: Vec<Arrow>,
        equations: Vec<(Mor, Mor)>,
        markings: Vec<Marking>,
    ) -> TermResult<Self> {
        let mut seen = BTreeSet::new();
        for n in objects.iter().chain(arrows.iter().map(|a| &a.name)) {
            if !seen.insert(n.clone()) {
                return Err(TermError::DuplicateName(n.clone()));
            }
        }
        let p = Presentation { objects, arrows, equations, markings, origin: Origin::Free };
        {
            let mut ty = Typer::new(&p);
            for a in &p.arrows {
                ty.check_obj(&a.dom)?;
                ty.check_obj(&a.cod)?;
            }
            for (l, r) in &p.equations {
                let bl = ty.boundary(l)?;
                let br = ty.boundary(r)?;
                if bl != br {
                    let (left, right) = if bl.0 != br.0 { (bl.0, br.0) } else { (bl.1, br.1) };
                    return Err(TermError::BoundaryMismatch { context: format!("equation {l} = {r}"), left, right });
                }
            }
            for (i, m) in p.markings.iter().enumerate() {
                ty.check_marking(i, m)?;
            }
        }
        Ok(p)
    }

    /// Extension by a fresh morphism generator `var : 1 -> sigma`.
    pub fn extend(parent: &Arc<Presentation>, var: &str, sigma: Obj) -> TermResult<Self> {
        if parent.is_lift() {
            return Err(TermError::AlreadyLifted);
        }
        if parent.has_generator(var) {
            return Err(TermError::DuplicateName(name(var)));
        }
        Typer::new(parent).check_obj(&sigma)?;
        Ok(Presentation {
            objects: vec![],
            arrows: vec![Arrow { name: name(var), dom: Obj::one(), cod: sigma.clone() }],
            equations: vec![],
            markings: vec![],
            origin: Origin::Extension { parent: parent.clone(), sigma },
        })
    }

    pub fn lift(base: &Arc<Presentation>) -> TermResult<Self> {
        if base.is_lift() {
            return Err(TermError::AlreadyLifted);
        }
        Ok(Presentation {
            objects: vec![],
            arrows: vec![],
            equations: vec![],
            markings: vec![],
            origin: Origin::Lift { base: base.clone() },
        })
    }

    pub fn is_lift(&self) -> bool {
        matches!(self.origin, Origin::Lift { .. })
    }

    pub fn lift_base(&self) -> Option<&Arc<Presentation>> {
        match &self.origin {
            Origin::Lift { base } => Some(base),
            _ => None,
        }
    }

    pub fn parent(&self) -> Option<&Arc<Presentation>> {
        match &self.origin {
            Origin::Extension { parent, .. } => Some(parent),
            _ => None,
        }
    }

    /// The free presentation at the bottom of the extension chain.
    pub fn root(&self) -> &Presentation {
        match &self.origin {
            Origin::Free => self,
            Origin::Extension { parent, .. } => parent.root(),
            Origin::Lift { base } => base.root(),
        }
    }

    /// Number of extension links above the root.
    pub fn depth(&self) -> usize {
        match &self.origin {
            Origin::Free => 0,
            Origin::Extension { parent, .. } => 1 + parent.depth(),
            Origin::Lift { base } => base.depth(),
        }
    }

    /// The extension variable, when this presentation is an extension.
    pub fn variable(&self) -> Option<(&Name, &Obj)> {
        match &self.origin {
            Origin::Extension { sigma, .. } => Some((&self.arrows[0].name, sigma)),
            _ => None,
        }
    }

    pub fn has_generator(&self, n: &str) -> bool {
        self.obj_gen(n) || self.mor_gen(n).is_some()
    }

    pub fn obj_gen(&self, n: &str) -> bool {
        match &self.origin {
            Origin::Lift { .. } => false,
            Origin::Free => self.objects.iter().any(|o| &**o == n),
            Origin::Extension { parent, .. } => parent.obj_gen(n),
        }
    }

    pub fn mor_gen(&self, n: &str) -> Option<(&Obj, &Obj)> {
        if self.is_lift() {
            return None;
        }
        if let Some(a) = self.arrows.iter().find(|a| &*a.name == n) {
            return Some((&a.dom, &a.cod));
        }
        self.parent().and_then(|p| p.mor_gen(n))
    }

    /// All morphism generators visible here, oldest first.
    pub fn all_mor_gens(&self) -> Vec<Arrow> {
        match &self.origin {
            Origin::Lift { .. } => vec![],
            Origin::Free => self.arrows.clone(),
            Origin::Extension { parent, .. } => {
                let mut v = parent.all_mor_gens();
                v.extend(self.arrows.iter().cloned());
                v
            }
        }
    }

    pub fn all_obj_gens(&self) -> Vec<Name> {
        self.root().objects.clone()
    }

    /// Presentation equations (the root sketch's).
    pub fn all_equations(&self) -> &[(Mor, Mor)] {
        &self.root().equations
    }

    pub fn declared_markings(&self) -> &[Marking] {
        &self.root().markings
    }

    /// Resolves a marking reference to its diagram in this presentation.
    pub fn mark_diagram(&self, m: &MarkRef) -> TermResult<MarkDiagram> {
        match m {
            MarkRef::Declared(i) => {
                if self.is_lift() {
                    return Err(ill(&Mor::mark_inv(m.clone()), "declared marking referenced in a lift"));
                }
                let mk = self
                    .declared_markings()
                    .get(*i)
                    .ok_or_else(|| ill(&Mor::mark_inv(m.clone()), "no such marking"))?;
                let mut ty = Typer::new(self);
                Ok(match mk {
                    Marking::Tm { obj } => MarkDiagram::Tm { vertex: obj.clone() },
                    Marking::Pb { p1, p2, f1, f2 } => MarkDiagram::Pb {
                        vertex: ty.boundary(p1)?.0,
                        p1: p1.clone(),
                        p2: p2.clone(),
                        f1: f1.clone(),
                        f2: f2.clone(),
                    },
                    Marking::Pi { f1, g, f2, eps } => MarkDiagram::Pi {
                        vertex: ty.boundary(f2)?.0,
                        f1: f1.clone(),
                        g: g.clone(),
                        f2: f2.clone(),
                        eps: eps.clone(),
                    },
                })
            }
            MarkRef::Lift(lm) => {
                let base = self
                    .lift_base()
                    .ok_or_else(|| ill(&Mor::mark_inv(m.clone()), "lift marking outside a lift"))?;
                let lg = |f: &Mor| Mor::lifted_gen(f.clone());
                Ok(match lm {
                    LiftMark::Tm => MarkDiagram::Tm { vertex: Obj::lifted(Obj::one()) },
                    LiftMark::Pb(f1, f2) => MarkDiagram::Pb {
                        vertex: Obj::lifted(Obj::pb(f1.clone(), f2.clone())),
                        p1: lg(&Mor::p1(f1.clone(), f2.clone())),
                        p2: lg(&Mor::p2(f1.clone(), f2.clone())),
                        f1: lg(f1),
                        f2: lg(f2),
                    },
                    LiftMark::Pi(f1, g) => {
                        let pm = Mor::pi_map(f1.clone(), g.clone());
                        MarkDiagram::Pi {
                            vertex: Obj::lifted(Obj::pi(f1.clone(), g.clone())),
                            f1: lg(f1),
                            g: lg(g),
                            f2: lg(&pm),
                            eps: Mor::comp(
                                lg(&Mor::eval(f1.clone(), g.clone())),
                                Mor::mark_inv(MarkRef::Lift(LiftMark::Pb(f1.clone(), pm))),
                            ),
                        }
                    }
                    LiftMark::Declared(i) => match base.mark_diagram(&MarkRef::Declared(*i))? {
                        MarkDiagram::Tm { vertex } => MarkDiagram::Tm { vertex: Obj::lifted(vertex) },
                        MarkDiagram::Pb { vertex, p1, p2, f1, f2 } => MarkDiagram::Pb {
                            vertex: Obj::lifted(vertex),
                            p1: lg(&p1),
                            p2: lg(&p2),
                            f1: lg(&f1),
                            f2: lg(&f2),
                        },
                        MarkDiagram::Pi { vertex, f1, g, f2, eps } => MarkDiagram::Pi {
                            vertex: Obj::lifted(vertex),
                            eps: Mor::comp(
                                lg(&eps),
                                Mor::mark_inv(MarkRef::Lift(LiftMark::Pb(f1.clone(), f2.clone()))),
                            ),
                            f1: lg(&f1),
                            g: lg(&g),
                            f2: lg(&f2),
                        },
                    },
                })
            }
        }
    }

    /// The two inverse laws of every declared marking.
    pub fn realized_equations(&self) -> TermResult<Vec<(Mor, Mor)>> {
        let mut out = Vec::new();
        for i in 0..self.declared_markings().len() {
            let m = MarkRef::Declared(i);
            let d = self.mark_diagram(&m)?;
            let inv = Mor::mark_inv(m);
            let c = d.comparison();
            out.push((Mor::comp(inv.clone(), c.clone()), Mor::id(d.vertex().clone())));
            out.push((Mor::comp(c, inv), Mor::id(d.canonical())));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let p: Presentation = serde_json::from_str(s).map_err(|e| e.to_string())?;
        p.revalidate().map_err(|e| e.to_string())?;
        Ok(p)
    }

    fn revalidate(&self) -> TermResult<()> {
        match &self.origin {
            Origin::Free => {
                Presentation::new(self.objects.clone(), self.arrows.clone(), self.equations.clone(), self.markings.clone())
                    .map(|_| ())
            }
            Origin::Extension { parent, sigma } => {
                parent.revalidate()?;
                if self.arrows.len() != 1 || !self.objects.is_empty() || !self.equations.is_empty() {
                    return Err(ill(&"extension", "an extension adds exactly one morphism generator"));
                }
                let a = &self.arrows[0];
                if !a.dom.is_one() || &a.cod != sigma {
                    return Err(ill(&a.name, "extension variable must have type 1 -> sigma"));
                }
                Presentation::extend(parent, &a.name, sigma.clone()).map(|_| ())
            }
            Origin::Lift { base } => base.revalidate(),
        }
    }
}

/// Boundary inference with a per-typer memo table.
pub struct Typer<'a> {
    pres: &'a Presentation,
    memo: HashMap<Mor, (Obj, Obj)>,
    objs: HashMap<Obj, ()>,
    obj_eq: Option<&'a dyn Fn(&Obj, &Obj) -> bool>,
    lenient: bool,
}

impl<'a> Typer<'a> {
    pub fn new(pres: &'a Presentation) -> Self {
        Typer { pres, memo: HashMap::new(), objs: HashMap::new(), obj_eq: None, lenient: false }
    }

    /// Accept boundary matches up to the given object equivalence.
    pub fn with_obj_eq(pres: &'a Presentation, eq: &'a dyn Fn(&Obj, &Obj) -> bool) -> Self {
        Typer { pres, memo: HashMap::new(), objs: HashMap::new(), obj_eq: Some(eq), lenient: false }
    }

    /// Infers boundaries without checking that junctions match.
    pub fn lenient(pres: &'a Presentation) -> Self {
        Typer { lenient: true, ..Typer::new(pres) }
    }

    fn sub<'b>(&self, base: &'b Presentation) -> Typer<'b> {
        if self.lenient { Typer::lenient(base) } else { Typer::new(base) }
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.pres
    }

    fn same(&self, a: &Obj, b: &Obj) -> bool {
        self.lenient || a == b || self.obj_eq.is_some_and(|eq| eq(a, b))
    }

    fn expect(&self, what: &dyn std::fmt::Display, a: &Obj, b: &Obj) -> TermResult<()> {
        if self.same(a, b) {
            Ok(())
        } else {
            Err(TermError::BoundaryMismatch { context: what.to_string(), left: a.clone(), right: b.clone() })
        }
    }

    pub fn check_obj(&mut self, o: &Obj) -> TermResult<()> {
        if self.objs.contains_key(o) {
            return Ok(());
        }
        match o.kind() {
            ObjKind::Gen(n) => {
                if !self.pres.obj_gen(n) {
                    return Err(TermError::UnknownGenerator(n.clone()));
                }
            }
            ObjKind::One => {}
            ObjKind::Pb(f1, f2) => {
                let (_, c1) = self.boundary(f1)?;
                let (_, c2) = self.boundary(f2)?;
                self.expect(o, &c1, &c2)?;
            }
            ObjKind::Pi(f1, g) => {
                let (a, _) = self.boundary(f1)?;
                let (_, c) = self.boundary(g)?;
                self.expect(o, &c, &a)?;
            }
            ObjKind::Lifted(x) => {
                let base = self.pres.lift_base().ok_or_else(|| ill(o, "lifted object outside a lift"))?;
                if matches!(x.kind(), ObjKind::Lifted(_)) {
                    return Err(ill(o, "nested lift"));
                }
                self.sub(base).check_obj(x)?;
            }
        }
        self.objs.insert(o.clone(), ());
        Ok(())
    }

    /// Infers `(dom, cod)` of a morphism term, validating every subterm.
    pub fn boundary(&mut self, t: &Mor) -> TermResult<(Obj, Obj)> {
        if let Some(b) = self.memo.get(t) {
            return Ok(b.clone());
        }
        let b = self.boundary_uncached(t)?;
        self.memo.insert(t.clone(), b.clone());
        Ok(b)
    }

    fn boundary_uncached(&mut self, t: &Mor) -> TermResult<(Obj, Obj)> {
        Ok(match t.kind() {
            MorKind::Gen(n) => {
                let (d, c) = self.pres.mor_gen(n).ok_or_else(|| TermError::UnknownGenerator(n.clone()))?;
                (d.clone(), c.clone())
            }
            MorKind::Id(a) => {
                self.check_obj(a)?;
                (a.clone(), a.clone())
            }
            MorKind::Comp(g, f) => {
                let (fd, fc) = self.boundary(f)?;
                let (gd, gc) = self.boundary(g)?;
                self.expect(t, &fc, &gd)?;
                (fd, gc)
            }
            MorKind::Bang(a) => {
                self.check_obj(a)?;
                (a.clone(), Obj::one())
            }
            MorKind::P1(f1, f2) | MorKind::P2(f1, f2) => {
                let pb = Obj::pb(f1.clone(), f2.clone());
                self.check_obj(&pb)?;
                let leg = if matches!(t.kind(), MorKind::P1(..)) { f1 } else { f2 };
                (pb, self.boundary(leg)?.0)
            }
            MorKind::PbPair { f1, f2, q1, q2 } => {
                let pb = Obj::pb(f1.clone(), f2.clone());
                self.check_obj(&pb)?;
                let (d1, c1) = self.boundary(q1)?;
                let (d2, c2) = self.boundary(q2)?;
                self.expect(t, &d1, &d2)?;
                let w = self.boundary(f1)?.0;
                self.expect(t, &c1, &w)?;
                let w = self.boundary(f2)?.0;
                self.expect(t, &c2, &w)?;
                (d1, pb)
            }
            MorKind::PiMap(f1, g) => {
                let pi = Obj::pi(f1.clone(), g.clone());
                self.check_obj(&pi)?;
                (pi, self.boundary(f1)?.1)
            }
            MorKind::Eval(f1, g) => {
                let pm = Mor::pi_map(f1.clone(), g.clone());
                self.boundary(&pm)?;
                (Obj::pb(f1.clone(), pm), self.boundary(g)?.0)
            }
            MorKind::Curry { f1, g, f2, e } => {
                let pi = Obj::pi(f1.clone(), g.clone());
                self.check_obj(&pi)?;
                let (x, c) = self.boundary(f2)?;
                let w = self.boundary(f1)?.1;
                self.expect(t, &c, &w)?;
                let (ed, ec) = self.boundary(e)?;
                self.expect(t, &ed, &Obj::pb(f1.clone(), f2.clone()))?;
                let w = self.boundary(g)?.0;
                self.expect(t, &ec, &w)?;
                (x, pi)
            }
            MorKind::MarkInv(m) => {
                let d = self.pres.mark_diagram(m)?;
                let canon = d.canonical();
                self.check_obj(&canon)?;
                (canon, d.vertex().clone())
            }
            MorKind::LiftedGen(f) => {
                let base = self.pres.lift_base().ok_or_else(|| ill(t, "lifted morphism outside a lift"))?;
                if crate::term::mor_is_lifted(f) {
                    return Err(ill(t, "nested lift"));
                }
                let (d, c) = self.sub(base).boundary(f)?;
                (Obj::lifted(d), Obj::lifted(c))
            }
        })
    }

    fn check_marking(&mut self, i: usize, m: &Marking) -> TermResult<()> {
        let bad = |reason: String| TermError::MalformedMarking { index: i, reason };
        match m {
            Marking::Tm { obj } => self.check_obj(obj).map_err(|e| bad(e.to_string())),
            Marking::Pb { p1, p2, f1, f2 } => {
                let (v1, a) = self.boundary(p1).map_err(|e| bad(e.to_string()))?;
                let (v2, b) = self.boundary(p2).map_err(|e| bad(e.to_string()))?;
                let (a1, c1) = self.boundary(f1).map_err(|e| bad(e.to_string()))?;
                let (b2, c2) = self.boundary(f2).map_err(|e| bad(e.to_string()))?;
                if v1 != v2 || a != a1 || b != b2 || c1 != c2 {
                    return Err(bad("pullback square does not have the pullback shape".into()));
                }
                Ok(())
            }
            Marking::Pi { f1, g, f2, eps } => {
                let (a, c) = self.boundary(f1).map_err(|e| bad(e.to_string()))?;
                let (b, a2) = self.boundary(g).map_err(|e| bad(e.to_string()))?;
                let (_, c2) = self.boundary(f2).map_err(|e| bad(e.to_string()))?;
                let (ed, ec) = self.boundary(eps).map_err(|e| bad(e.to_string()))?;
                if a != a2 || c != c2 || ed != Obj::pb(f1.clone(), f2.clone()) || ec != b {
                    return Err(bad("dependent-product diagram does not have the Pi shape".into()));
                }
                Ok(())
            }
        }
    }
}

/// Infers `(dom, cod)` of `t` over `p`.
pub fn infer_boundary(t: &Mor, p: &Presentation) -> TermResult<(Obj, Obj)> {
    Typer::new(p).boundary(t)
}

pub fn check_obj(o: &Obj, p: &Presentation) -> TermResult<()> {
    Typer::new(p).check_obj(o)
}

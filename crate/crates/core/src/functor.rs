//! Targets with canonical lcc structure and homomorphic application of
//! generator assignments.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::presentation::{MarkDiagram, Presentation, TermError, TermResult, Typer};
use crate::term::{LiftMark, MarkRef, Mor, MorKind, Name, Obj, ObjKind};

/// Image of a marked diagram in some target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkImage<O, H> {
    Tm { vertex: O },
    Pb { vertex: O, p1: H, p2: H, f1: H, f2: H },
    Pi { vertex: O, f1: H, g: H, f2: H, eps: H },
}

/// Anything exposing chosen terminal object, pullbacks and dependent products.
pub trait StrictLcc {
    type Ob: Clone + Eq + Hash + Debug;
    type Hom: Clone + Eq + Hash + Debug;

    fn dom(&self, h: &Self::Hom) -> TermResult<Self::Ob>;
    fn cod(&self, h: &Self::Hom) -> TermResult<Self::Ob>;
    fn one(&self) -> Self::Ob;
    fn pb(&self, f1: &Self::Hom, f2: &Self::Hom) -> TermResult<Self::Ob>;
    fn pi(&self, f1: &Self::Hom, g: &Self::Hom) -> TermResult<Self::Ob>;
    fn id(&self, a: &Self::Ob) -> Self::Hom;
    fn comp(&self, g: &Self::Hom, f: &Self::Hom) -> TermResult<Self::Hom>;
    fn bang(&self, a: &Self::Ob) -> Self::Hom;
    fn p1(&self, f1: &Self::Hom, f2: &Self::Hom) -> TermResult<Self::Hom>;
    fn p2(&self, f1: &Self::Hom, f2: &Self::Hom) -> TermResult<Self::Hom>;
    fn pb_pair(&self, f1: &Self::Hom, f2: &Self::Hom, q1: &Self::Hom, q2: &Self::Hom) -> TermResult<Self::Hom>;
    fn pi_map(&self, f1: &Self::Hom, g: &Self::Hom) -> TermResult<Self::Hom>;
    fn eval(&self, f1: &Self::Hom, g: &Self::Hom) -> TermResult<Self::Hom>;
    fn curry(&self, f1: &Self::Hom, g: &Self::Hom, f2: &Self::Hom, e: &Self::Hom) -> TermResult<Self::Hom>;
    /// Inverse of the comparison map of a diagram assumed universal.
    fn mark_inv(&self, d: &MarkImage<Self::Ob, Self::Hom>) -> TermResult<Self::Hom>;
}

/// Images of generators. Lifted leaves and marking inverses may be overridden.
pub trait Assignment<C: StrictLcc + ?Sized> {
    fn obj_gen(&self, target: &C, n: &Name) -> TermResult<C::Ob>;
    fn mor_gen(&self, target: &C, n: &Name) -> TermResult<C::Hom>;
    fn lifted_obj(&self, _target: &C, x: &Obj) -> TermResult<C::Ob> {
        Err(TermError::IllFormed { subterm: Obj::lifted(x.clone()).to_string(), reason: "no image for lifted object".into() })
    }
    fn lifted_mor(&self, _target: &C, f: &Mor) -> TermResult<C::Hom> {
        Err(TermError::IllFormed { subterm: Mor::lifted_gen(f.clone()).to_string(), reason: "no image for lifted morphism".into() })
    }
    /// Returning `None` falls back to mapping the marked diagram and asking the target.
    fn mark_inv(&self, _target: &C, _m: &MarkRef) -> Option<TermResult<C::Hom>> {
        None
    }
}

/// Memoizing homomorphic extension of an assignment.
pub struct Applier<'a, C: StrictLcc + ?Sized, A: Assignment<C> + ?Sized> {
    pub source: &'a Presentation,
    pub target: &'a C,
    pub assignment: &'a A,
    objs: HashMap<Obj, C::Ob>,
    mors: HashMap<Mor, C::Hom>,
}

impl<'a, C: StrictLcc + ?Sized, A: Assignment<C> + ?Sized> Applier<'a, C, A> {
    pub fn new(source: &'a Presentation, target: &'a C, assignment: &'a A) -> Self {
        Applier { source, target, assignment, objs: HashMap::new(), mors: HashMap::new() }
    }

    pub fn obj(&mut self, o: &Obj) -> TermResult<C::Ob> {
        if let Some(r) = self.objs.get(o) {
            return Ok(r.clone());
        }
        let t = self.target;
        let r = match o.kind() {
            ObjKind::Gen(n) => self.assignment.obj_gen(t, n)?,
            ObjKind::One => t.one(),
            ObjKind::Pb(f1, f2) => {
                let (a, b) = (self.mor(f1)?, self.mor(f2)?);
                t.pb(&a, &b)?
            }
            ObjKind::Pi(f1, g) => {
                let (a, b) = (self.mor(f1)?, self.mor(g)?);
                t.pi(&a, &b)?
            }
            ObjKind::Lifted(x) => self.assignment.lifted_obj(t, x)?,
        };
        self.objs.insert(o.clone(), r.clone());
        Ok(r)
    }

    pub fn mor(&mut self, m: &Mor) -> TermResult<C::Hom> {
        if let Some(r) = self.mors.get(m) {
            return Ok(r.clone());
        }
        let t = self.target;
        let r = match m.kind() {
            MorKind::Gen(n) => self.assignment.mor_gen(t, n)?,
            MorKind::Id(a) => t.id(&self.obj(a)?),
            MorKind::Comp(g, f) => {
                let (g, f) = (self.mor(g)?, self.mor(f)?);
                t.comp(&g, &f)?
            }
            MorKind::Bang(a) => t.bang(&self.obj(a)?),
            MorKind::P1(f1, f2) => {
                let (a, b) = (self.mor(f1)?, self.mor(f2)?);
                t.p1(&a, &b)?
            }
            MorKind::P2(f1, f2) => {
                let (a, b) = (self.mor(f1)?, self.mor(f2)?);
                t.p2(&a, &b)?
            }
            MorKind::PbPair { f1, f2, q1, q2 } => {
                let (a, b, c, d) = (self.mor(f1)?, self.mor(f2)?, self.mor(q1)?, self.mor(q2)?);
                t.pb_pair(&a, &b, &c, &d)?
            }
            MorKind::PiMap(f1, g) => {
                let (a, b) = (self.mor(f1)?, self.mor(g)?);
                t.pi_map(&a, &b)?
            }
            MorKind::Eval(f1, g) => {
                let (a, b) = (self.mor(f1)?, self.mor(g)?);
                t.eval(&a, &b)?
            }
            MorKind::Curry { f1, g, f2, e } => {
                let (a, b, c, d) = (self.mor(f1)?, self.mor(g)?, self.mor(f2)?, self.mor(e)?);
                t.curry(&a, &b, &c, &d)?
            }
            MorKind::MarkInv(mr) => match self.assignment.mark_inv(t, mr) {
                Some(r) => r?,
                None => {
                    let d = self.source.mark_diagram(mr)?;
                    let img = self.diagram(&d)?;
                    t.mark_inv(&img)?
                }
            },
            MorKind::LiftedGen(f) => self.assignment.lifted_mor(t, f)?,
        };
        self.mors.insert(m.clone(), r.clone());
        Ok(r)
    }

    pub fn diagram(&mut self, d: &MarkDiagram) -> TermResult<MarkImage<C::Ob, C::Hom>> {
        Ok(match d {
            MarkDiagram::Tm { vertex } => MarkImage::Tm { vertex: self.obj(vertex)? },
            MarkDiagram::Pb { vertex, p1, p2, f1, f2 } => MarkImage::Pb {
                vertex: self.obj(vertex)?,
                p1: self.mor(p1)?,
                p2: self.mor(p2)?,
                f1: self.mor(f1)?,
                f2: self.mor(f2)?,
            },
            MarkDiagram::Pi { vertex, f1, g, f2, eps } => MarkImage::Pi {
                vertex: self.obj(vertex)?,
                f1: self.mor(f1)?,
                g: self.mor(g)?,
                f2: self.mor(f2)?,
                eps: self.mor(eps)?,
            },
        })
    }
}

pub fn apply_obj<C: StrictLcc + ?Sized, A: Assignment<C> + ?Sized>(
    source: &Presentation,
    target: &C,
    a: &A,
    o: &Obj,
) -> TermResult<C::Ob> {
    Applier::new(source, target, a).obj(o)
}

pub fn apply_mor<C: StrictLcc + ?Sized, A: Assignment<C> + ?Sized>(
    source: &Presentation,
    target: &C,
    a: &A,
    m: &Mor,
) -> TermResult<C::Hom> {
    Applier::new(source, target, a).mor(m)
}

/// Raw terms over a presentation form a strict lcc category syntactically.
impl StrictLcc for Presentation {
    type Ob = Obj;
    type Hom = Mor;

    fn dom(&self, h: &Mor) -> TermResult<Obj> {
        Ok(Typer::new(self).boundary(h)?.0)
    }
    fn cod(&self, h: &Mor) -> TermResult<Obj> {
        Ok(Typer::new(self).boundary(h)?.1)
    }
    fn one(&self) -> Obj {
        Obj::one()
    }
    fn pb(&self, f1: &Mor, f2: &Mor) -> TermResult<Obj> {
        Ok(Obj::pb(f1.clone(), f2.clone()))
    }
    fn pi(&self, f1: &Mor, g: &Mor) -> TermResult<Obj> {
        Ok(Obj::pi(f1.clone(), g.clone()))
    }
    fn id(&self, a: &Obj) -> Mor {
        Mor::id(a.clone())
    }
    fn comp(&self, g: &Mor, f: &Mor) -> TermResult<Mor> {
        Ok(Mor::comp(g.clone(), f.clone()))
    }
    fn bang(&self, a: &Obj) -> Mor {
        Mor::bang(a.clone())
    }
    fn p1(&self, f1: &Mor, f2: &Mor) -> TermResult<Mor> {
        Ok(Mor::p1(f1.clone(), f2.clone()))
    }
    fn p2(&self, f1: &Mor, f2: &Mor) -> TermResult<Mor> {
        Ok(Mor::p2(f1.clone(), f2.clone()))
    }
    fn pb_pair(&self, f1: &Mor, f2: &Mor, q1: &Mor, q2: &Mor) -> TermResult<Mor> {
        Ok(Mor::pb_pair(f1.clone(), f2.clone(), q1.clone(), q2.clone()))
    }
    fn pi_map(&self, f1: &Mor, g: &Mor) -> TermResult<Mor> {
        Ok(Mor::pi_map(f1.clone(), g.clone()))
    }
    fn eval(&self, f1: &Mor, g: &Mor) -> TermResult<Mor> {
        Ok(Mor::eval(f1.clone(), g.clone()))
    }
    fn curry(&self, f1: &Mor, g: &Mor, f2: &Mor, e: &Mor) -> TermResult<Mor> {
        Ok(Mor::curry(f1.clone(), g.clone(), f2.clone(), e.clone()))
    }

    /// Canonical diagrams invert to identities; otherwise the diagram must be
    /// one of this presentation's (declared or lifted) markings.
    fn mark_inv(&self, d: &MarkImage<Obj, Mor>) -> TermResult<Mor> {
        let as_diagram = match d.clone() {
            MarkImage::Tm { vertex } => MarkDiagram::Tm { vertex },
            MarkImage::Pb { vertex, p1, p2, f1, f2 } => MarkDiagram::Pb { vertex, p1, p2, f1, f2 },
            MarkImage::Pi { vertex, f1, g, f2, eps } => MarkDiagram::Pi { vertex, f1, g, f2, eps },
        };
        if is_canonical(&as_diagram) {
            return Ok(Mor::id(as_diagram.canonical()));
        }
        let mut candidates: Vec<MarkRef> = Vec::new();
        let n = self.declared_markings().len();
        if self.is_lift() {
            candidates.extend((0..n).map(|i| MarkRef::Lift(LiftMark::Declared(i))));
            let unlift = |m: &Mor| match m.kind() {
                MorKind::LiftedGen(x) => Some(x.clone()),
                _ => None,
            };
            match &as_diagram {
                MarkDiagram::Tm { .. } => candidates.push(MarkRef::Lift(LiftMark::Tm)),
                MarkDiagram::Pb { f1, f2, .. } => {
                    if let (Some(a), Some(b)) = (unlift(f1), unlift(f2)) {
                        candidates.push(MarkRef::Lift(LiftMark::Pb(a, b)));
                    }
                }
                MarkDiagram::Pi { f1, g, .. } => {
                    if let (Some(a), Some(b)) = (unlift(f1), unlift(g)) {
                        candidates.push(MarkRef::Lift(LiftMark::Pi(a, b)));
                    }
                }
            }
        } else {
            candidates.extend((0..n).map(MarkRef::Declared));
        }
        for c in candidates {
            if self.mark_diagram(&c).ok().as_ref() == Some(&as_diagram) {
                return Ok(Mor::mark_inv(c));
            }
        }
        Err(TermError::TargetRejects(format!("diagram with vertex {} is not a marking of the target", as_diagram.vertex())))
    }
}

/// Whether a diagram is literally the canonical universal one.
pub fn is_canonical(d: &MarkDiagram) -> bool {
    match d {
        MarkDiagram::Tm { vertex } => vertex.is_one(),
        MarkDiagram::Pb { vertex, p1, p2, f1, f2 } => {
            *vertex == Obj::pb(f1.clone(), f2.clone())
                && *p1 == Mor::p1(f1.clone(), f2.clone())
                && *p2 == Mor::p2(f1.clone(), f2.clone())
        }
        MarkDiagram::Pi { vertex, f1, g, f2, eps } => {
            *vertex == Obj::pi(f1.clone(), g.clone())
                && *f2 == Mor::pi_map(f1.clone(), g.clone())
                && *eps == Mor::eval(f1.clone(), g.clone())
        }
    }
}

/// A finite generator table into a presentation. Unlisted generators map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Table {
    pub objs: Vec<(Name, Obj)>,
    pub mors: Vec<(Name, Mor)>,
}

impl Table {
    pub fn obj(&self, n: &Name) -> Option<&Obj> {
        self.objs.iter().find(|(k, _)| k == n).map(|(_, v)| v)
    }
    pub fn mor(&self, n: &Name) -> Option<&Mor> {
        self.mors.iter().find(|(k, _)| k == n).map(|(_, v)| v)
    }
}

impl Assignment<Presentation> for Table {
    fn obj_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Obj> {
        Ok(self.obj(n).cloned().unwrap_or_else(|| Obj::new(ObjKind::Gen(n.clone()))))
    }
    fn mor_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Mor> {
        Ok(self.mor(n).cloned().unwrap_or_else(|| Mor::new(MorKind::Gen(n.clone()))))
    }
    fn lifted_obj(&self, _t: &Presentation, x: &Obj) -> TermResult<Obj> {
        Ok(Obj::lifted(x.clone()))
    }
    fn lifted_mor(&self, _t: &Presentation, f: &Mor) -> TermResult<Mor> {
        Ok(Mor::lifted_gen(f.clone()))
    }
}

/// The counit: collapses a lifted presentation onto its base.
pub struct EpsCollapse;

impl Assignment<Presentation> for EpsCollapse {
    fn obj_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Obj> {
        Err(TermError::UnknownGenerator(n.clone()))
    }
    fn mor_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Mor> {
        Err(TermError::UnknownGenerator(n.clone()))
    }
    fn lifted_obj(&self, _t: &Presentation, x: &Obj) -> TermResult<Obj> {
        Ok(x.clone())
    }
    fn lifted_mor(&self, _t: &Presentation, f: &Mor) -> TermResult<Mor> {
        Ok(f.clone())
    }
    fn mark_inv(&self, _t: &Presentation, m: &MarkRef) -> Option<TermResult<Mor>> {
        Some(match m {
            MarkRef::Lift(LiftMark::Tm) => Ok(Mor::id(Obj::one())),
            MarkRef::Lift(LiftMark::Pb(f1, f2)) => Ok(Mor::id(Obj::pb(f1.clone(), f2.clone()))),
            MarkRef::Lift(LiftMark::Pi(f1, g)) => Ok(Mor::id(Obj::pi(f1.clone(), g.clone()))),
            MarkRef::Lift(LiftMark::Declared(i)) => Ok(Mor::mark_inv(MarkRef::Declared(*i))),
            MarkRef::Declared(_) => {
                Err(TermError::IllFormed { subterm: Mor::mark_inv(m.clone()).to_string(), reason: "declared marking in a lift".into() })
            }
        })
    }
}

pub fn eps_collapse_obj(lift: &Presentation, x: &Obj) -> TermResult<Obj> {
    let base = lift_base_of(lift)?;
    apply_obj(lift, &**base, &EpsCollapse, x)
}

pub fn eps_collapse_mor(lift: &Presentation, t: &Mor) -> TermResult<Mor> {
    let base = lift_base_of(lift)?;
    Typer::new(lift).boundary(t)?;
    apply_mor(lift, &**base, &EpsCollapse, t)
}

fn lift_base_of(lift: &Presentation) -> TermResult<&Arc<Presentation>> {
    lift.lift_base()
        .ok_or_else(|| TermError::IllFormed { subterm: "presentation".into(), reason: "not a lift".into() })
}

/// The unit: a base term regarded as a single generator of the lift.
pub fn eta_embed_obj(gamma: &Presentation, x: &Obj) -> TermResult<Obj> {
    if gamma.is_lift() {
        return Err(TermError::AlreadyLifted);
    }
    Typer::new(gamma).check_obj(x)?;
    Ok(Obj::lifted(x.clone()))
}

pub fn eta_embed_mor(gamma: &Presentation, f: &Mor) -> TermResult<Mor> {
    if gamma.is_lift() {
        return Err(TermError::AlreadyLifted);
    }
    Typer::new(gamma).boundary(f)?;
    Ok(Mor::lifted_gen(f.clone()))
}

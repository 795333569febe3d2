use std::sync::Arc;

use serde::Serialize;

use crate::closure::{decide_equal, Verdict};
use crate::functor::{MarkImage, StrictLcc};
use crate::presentation::{Presentation, TermError, TermResult, Typer};
use crate::rewrite::TraceStep;
use crate::term::{Mor, Obj};

/// An object of a slice: a vertex with its structure map into the base object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SliceObj {
    pub vertex: Obj,
    pub map: Mor,
}

/// A morphism of a slice, with its underlying morphism of the base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SliceHom {
    pub dom: SliceObj,
    pub cod: SliceObj,
    pub under: Mor,
}

/// A slice hom whose triangle was verified by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedHom {
    pub hom: SliceHom,
    pub evidence: Vec<TraceStep>,
}

/// `base / sigma`, with canonical structure read off the base.
#[derive(Debug, Clone)]
pub struct SliceView {
    pub base: Arc<Presentation>,
    pub sigma: Obj,
}

pub fn slice_view(base: &Arc<Presentation>, sigma: &Obj) -> TermResult<SliceView> {
    Typer::new(base).check_obj(sigma)?;
    Ok(SliceView { base: base.clone(), sigma: sigma.clone() })
}

impl SliceView {
    /// Slice object from a morphism into `sigma`.
    pub fn object(&self, map: &Mor) -> TermResult<SliceObj> {
        let (d, c) = Typer::new(&self.base).boundary(map)?;
        if c != self.sigma {
            return Err(TermError::BoundaryMismatch { context: "slice object".into(), left: c, right: self.sigma.clone() });
        }
        Ok(SliceObj { vertex: d, map: map.clone() })
    }

    /// Slice hom with boundaries checked syntactically (the triangle is not checked).
    pub fn hom(&self, dom: &SliceObj, cod: &SliceObj, under: &Mor) -> TermResult<SliceHom> {
        let (d, c) = Typer::new(&self.base).boundary(under)?;
        for (want, got, what) in [(&dom.vertex, d, "slice hom domain"), (&cod.vertex, c, "slice hom codomain")] {
            if *want != got {
                return Err(TermError::BoundaryMismatch { context: what.into(), left: got, right: want.clone() });
            }
        }
        Ok(SliceHom { dom: dom.clone(), cod: cod.clone(), under: under.clone() })
    }

    /// Checks `cod.map . under = dom.map` with the engine and keeps the trace.
    pub fn check(&self, h: SliceHom, facts: &[(Mor, Mor)], budget: usize) -> TermResult<CheckedHom> {
        let lhs = Mor::comp(h.cod.map.clone(), h.under.clone());
        match decide_equal(&lhs, &h.dom.map, &self.base, facts, budget, &[], true)? {
            Verdict::Equal { trace } => Ok(CheckedHom { hom: h, evidence: trace }),
            other => Err(TermError::TargetRejects(format!("slice triangle not verified for {}: {other:?}", h.under))),
        }
    }

    fn reject(&self, what: &str) -> TermError {
        TermError::TargetRejects(format!("slice over {}: {what}", self.sigma))
    }

    fn same(&self, a: &SliceObj, b: &SliceObj, what: &str) -> TermResult<()> {
        if a == b {
            Ok(())
        } else {
            Err(self.reject(&format!("{what}: {} vs {}", a.map, b.map)))
        }
    }
}

impl StrictLcc for SliceView {
    type Ob = SliceObj;
    type Hom = SliceHom;

    fn dom(&self, h: &SliceHom) -> TermResult<SliceObj> {
        Ok(h.dom.clone())
    }
    fn cod(&self, h: &SliceHom) -> TermResult<SliceObj> {
        Ok(h.cod.clone())
    }
    fn one(&self) -> SliceObj {
        SliceObj { vertex: self.sigma.clone(), map: Mor::id(self.sigma.clone()) }
    }
    fn pb(&self, f1: &SliceHom, f2: &SliceHom) -> TermResult<SliceObj> {
        self.same(&f1.cod, &f2.cod, "not a cospan")?;
        let p1 = Mor::p1(f1.under.clone(), f2.under.clone());
        Ok(SliceObj { vertex: Obj::pb(f1.under.clone(), f2.under.clone()), map: Mor::comp(f1.dom.map.clone(), p1) })
    }
    fn pi(&self, f1: &SliceHom, g: &SliceHom) -> TermResult<SliceObj> {
        self.same(&g.cod, &f1.dom, "not composable")?;
        let pm = Mor::pi_map(f1.under.clone(), g.under.clone());
        Ok(SliceObj { vertex: Obj::pi(f1.under.clone(), g.under.clone()), map: Mor::comp(f1.cod.map.clone(), pm) })
    }
    fn id(&self, a: &SliceObj) -> SliceHom {
        SliceHom { dom: a.clone(), cod: a.clone(), under: Mor::id(a.vertex.clone()) }
    }
    fn comp(&self, g: &SliceHom, f: &SliceHom) -> TermResult<SliceHom> {
        self.same(&f.cod, &g.dom, "not composable")?;
        Ok(SliceHom { dom: f.dom.clone(), cod: g.cod.clone(), under: Mor::comp(g.under.clone(), f.under.clone()) })
    }
    fn bang(&self, a: &SliceObj) -> SliceHom {
        SliceHom { dom: a.clone(), cod: self.one(), under: a.map.clone() }
    }
    fn p1(&self, f1: &SliceHom, f2: &SliceHom) -> TermResult<SliceHom> {
        let dom = self.pb(f1, f2)?;
        Ok(SliceHom { dom, cod: f1.dom.clone(), under: Mor::p1(f1.under.clone(), f2.under.clone()) })
    }
    fn p2(&self, f1: &SliceHom, f2: &SliceHom) -> TermResult<SliceHom> {
        let dom = self.pb(f1, f2)?;
        Ok(SliceHom { dom, cod: f2.dom.clone(), under: Mor::p2(f1.under.clone(), f2.under.clone()) })
    }
    fn pb_pair(&self, f1: &SliceHom, f2: &SliceHom, q1: &SliceHom, q2: &SliceHom) -> TermResult<SliceHom> {
        self.same(&q1.dom, &q2.dom, "pairing legs differ in domain")?;
        self.same(&q1.cod, &f1.dom, "first leg")?;
        self.same(&q2.cod, &f2.dom, "second leg")?;
        let under = Mor::pb_pair(f1.under.clone(), f2.under.clone(), q1.under.clone(), q2.under.clone());
        Ok(SliceHom { dom: q1.dom.clone(), cod: self.pb(f1, f2)?, under })
    }
    fn pi_map(&self, f1: &SliceHom, g: &SliceHom) -> TermResult<SliceHom> {
        let dom = self.pi(f1, g)?;
        Ok(SliceHom { dom, cod: f1.cod.clone(), under: Mor::pi_map(f1.under.clone(), g.under.clone()) })
    }
    fn eval(&self, f1: &SliceHom, g: &SliceHom) -> TermResult<SliceHom> {
        let pm = self.pi_map(f1, g)?;
        let dom = self.pb(f1, &pm)?;
        Ok(SliceHom { dom, cod: g.dom.clone(), under: Mor::eval(f1.under.clone(), g.under.clone()) })
    }
    fn curry(&self, f1: &SliceHom, g: &SliceHom, f2: &SliceHom, e: &SliceHom) -> TermResult<SliceHom> {
        self.same(&f2.cod, &f1.cod, "curry: f2 not over the base of f1")?;
        self.same(&e.dom, &self.pb(f1, f2)?, "curry: transposed map has wrong domain")?;
        self.same(&e.cod, &g.dom, "curry: transposed map has wrong codomain")?;
        let under = Mor::curry(f1.under.clone(), g.under.clone(), f2.under.clone(), e.under.clone());
        Ok(SliceHom { dom: f2.dom.clone(), cod: self.pi(f1, g)?, under })
    }
    fn mark_inv(&self, d: &MarkImage<SliceObj, SliceHom>) -> TermResult<SliceHom> {
        let u = |h: &SliceHom| h.under.clone();
        let (under_img, canon, vertex) = match d {
            MarkImage::Tm { vertex } => {
                return if vertex.map == Mor::id(self.sigma.clone()) {
                    Ok(self.id(vertex))
                } else {
                    Err(self.reject("marked terminal is not the identity"))
                };
            }
            MarkImage::Pb { vertex, p1, p2, f1, f2 } => (
                MarkImage::Pb { vertex: vertex.vertex.clone(), p1: u(p1), p2: u(p2), f1: u(f1), f2: u(f2) },
                self.pb(f1, f2)?,
                vertex,
            ),
            MarkImage::Pi { vertex, f1, g, f2, eps } => (
                MarkImage::Pi { vertex: vertex.vertex.clone(), f1: u(f1), g: u(g), f2: u(f2), eps: u(eps) },
                self.pi(f1, g)?,
                vertex,
            ),
        };
        let under = self.base.mark_inv(&under_img)?;
        Ok(SliceHom { dom: canon, cod: vertex.clone(), under })
    }
}

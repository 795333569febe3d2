use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use super::functors::WeakFunctor;
use crate::functor::{apply_mor, apply_obj, Assignment, StrictLcc};
use crate::presentation::{Presentation, TermError, TermResult, Typer};
use crate::term::{LiftMark, MarkRef, Mor, Name, Obj, ObjKind};

/// A pair of mutually inverse morphisms (inverse laws not checked here).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Iso {
    pub fwd: Mor,
    pub inv: Mor,
}

impl Iso {
    pub fn identity(x: &Obj) -> Self {
        Iso { fwd: Mor::id(x.clone()), inv: Mor::id(x.clone()) }
    }
}

/// The strict functor `base -> lift(base)` sending generators to lifted
/// generators conjugated by `phi`.
pub struct Lambda {
    pub base: Arc<Presentation>,
    pub lift: Arc<Presentation>,
    phis: RefCell<HashMap<Obj, Iso>>,
}

impl Lambda {
    pub fn new(base: &Arc<Presentation>) -> TermResult<Self> {
        let lift = Arc::new(Presentation::lift(base)?);
        Ok(Lambda { base: base.clone(), lift, phis: RefCell::new(HashMap::new()) })
    }

    pub fn obj(&self, x: &Obj) -> TermResult<Obj> {
        apply_obj(&self.base, &*self.lift, self, x)
    }

    pub fn mor(&self, h: &Mor) -> TermResult<Mor> {
        apply_mor(&self.base, &*self.lift, self, h)
    }

    fn boundary(&self, h: &Mor) -> TermResult<(Obj, Obj)> {
        Typer::new(&self.base).boundary(h)
    }

    /// `phi_x : lambda(x) -> Lifted(x)`.
    pub fn phi(&self, x: &Obj) -> TermResult<Iso> {
        if let Some(i) = self.phis.borrow().get(x) {
            return Ok(i.clone());
        }
        let lg = |h: &Mor| Mor::lifted_gen(h.clone());
        let iso = match x.kind() {
            ObjKind::Gen(_) => Iso::identity(&Obj::lifted(x.clone())),
            ObjKind::One => Iso {
                fwd: Mor::mark_inv(MarkRef::Lift(LiftMark::Tm)),
                inv: Mor::bang(Obj::lifted(Obj::one())),
            },
            ObjKind::Pb(f1, f2) => {
                let (a, _) = self.boundary(f1)?;
                let (b, _) = self.boundary(f2)?;
                let (pa, pb) = (self.phi(&a)?, self.phi(&b)?);
                let (l1, l2) = (self.mor(f1)?, self.mor(f2)?);
                let (g1, g2) = (lg(f1), lg(f2));
                let into_canon = Mor::pb_pair(
                    g1.clone(),
                    g2.clone(),
                    Mor::comp(pa.fwd, Mor::p1(l1.clone(), l2.clone())),
                    Mor::comp(pb.fwd, Mor::p2(l1.clone(), l2.clone())),
                );
                let fwd = Mor::comp(Mor::mark_inv(MarkRef::Lift(LiftMark::Pb(f1.clone(), f2.clone()))), into_canon);
                let cmp = Mor::pb_pair(
                    g1.clone(),
                    g2.clone(),
                    lg(&Mor::p1(f1.clone(), f2.clone())),
                    lg(&Mor::p2(f1.clone(), f2.clone())),
                );
                let back = Mor::pb_pair(
                    l1,
                    l2,
                    Mor::comp(pa.inv, Mor::p1(g1.clone(), g2.clone())),
                    Mor::comp(pb.inv, Mor::p2(g1, g2)),
                );
                Iso { fwd, inv: Mor::comp(back, cmp) }
            }
            ObjKind::Pi(f1, g) => {
                let (a, c) = self.boundary(f1)?;
                let (b, _) = self.boundary(g)?;
                let (pa, pb, pc) = (self.phi(&a)?, self.phi(&b)?, self.phi(&c)?);
                let (l1, lgm) = (self.mor(f1)?, self.mor(g)?);
                let (g1, gg) = (lg(f1), lg(g));
                let pm_l = Mor::pi_map(l1.clone(), lgm.clone());
                let pm_g = Mor::pi_map(g1.clone(), gg.clone());

                let f = Mor::comp(pc.fwd.clone(), pm_l.clone());
                let pair = Mor::pb_pair(
                    l1.clone(),
                    pm_l,
                    Mor::comp(pa.inv.clone(), Mor::p1(g1.clone(), f.clone())),
                    Mor::p2(g1.clone(), f.clone()),
                );
                let e = Mor::comp(pb.fwd, Mor::comp(Mor::eval(l1.clone(), lgm.clone()), pair));
                let kappa = Mor::curry(g1.clone(), gg.clone(), f, e);
                let fwd = Mor::comp(Mor::mark_inv(MarkRef::Lift(LiftMark::Pi(f1.clone(), g.clone()))), kappa);

                let pm = Mor::pi_map(f1.clone(), g.clone());
                let eps = Mor::comp(
                    lg(&Mor::eval(f1.clone(), g.clone())),
                    Mor::mark_inv(MarkRef::Lift(LiftMark::Pb(f1.clone(), pm.clone()))),
                );
                let cmp = Mor::curry(g1.clone(), gg.clone(), lg(&pm), eps);
                let f_ = Mor::comp(pc.inv, pm_g.clone());
                let pair_ = Mor::pb_pair(
                    g1.clone(),
                    pm_g,
                    Mor::comp(pa.fwd, Mor::p1(l1.clone(), f_.clone())),
                    Mor::p2(l1.clone(), f_.clone()),
                );
                let e_ = Mor::comp(pb.inv, Mor::comp(Mor::eval(g1, gg), pair_));
                let kappa_ = Mor::curry(l1, lgm, f_, e_);
                Iso { fwd, inv: Mor::comp(kappa_, cmp) }
            }
            ObjKind::Lifted(_) => return Err(TermError::AlreadyLifted),
        };
        self.phis.borrow_mut().insert(x.clone(), iso.clone());
        Ok(iso)
    }

    fn conjugate(&self, core: Mor, dom: &Obj, cod: &Obj) -> TermResult<Mor> {
        Ok(Mor::comp(self.phi(cod)?.inv, Mor::comp(core, self.phi(dom)?.fwd)))
    }
}

impl Assignment<Presentation> for Lambda {
    fn obj_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Obj> {
        Ok(Obj::lifted(Obj::new(ObjKind::Gen(n.clone()))))
    }
    fn mor_gen(&self, _t: &Presentation, n: &Name) -> TermResult<Mor> {
        let (d, c) = self.base.mor_gen(n).ok_or_else(|| TermError::UnknownGenerator(n.clone()))?;
        let (d, c) = (d.clone(), c.clone());
        let g = Mor::gen(n);
        self.conjugate(Mor::lifted_gen(g), &d, &c)
    }
    fn mark_inv(&self, _t: &Presentation, m: &MarkRef) -> Option<TermResult<Mor>> {
        let MarkRef::Declared(i) = m else { return None };
        Some((|| {
            let d = self.base.mark_diagram(m)?;
            let core = Mor::lifted_gen(Mor::mark_inv(MarkRef::Declared(*i)));
            self.conjugate(core, &d.canonical(), d.vertex())
        })())
    }
}

/// The phi iso at `x` for a fresh lambda over `base`.
pub fn phi_iso(base: &Arc<Presentation>, x: &Obj) -> TermResult<Iso> {
    Lambda::new(base)?.phi(x)
}

/// Reads a lift through a weak functor: `Lifted(x) |-> F(x)`, `LG(h) |-> F(h)`,
/// lifted markings to the comparison inverses of `F`.
struct Bar<'a, C: StrictLcc, F: WeakFunctor<C>> {
    f: &'a F,
    _c: std::marker::PhantomData<C>,
}

impl<C: StrictLcc, F: WeakFunctor<C>> Assignment<C> for Bar<'_, C, F> {
    fn obj_gen(&self, _t: &C, n: &Name) -> TermResult<C::Ob> {
        Err(TermError::UnknownGenerator(n.clone()))
    }
    fn mor_gen(&self, _t: &C, n: &Name) -> TermResult<C::Hom> {
        Err(TermError::UnknownGenerator(n.clone()))
    }
    fn lifted_obj(&self, _t: &C, x: &Obj) -> TermResult<C::Ob> {
        self.f.obj(x)
    }
    fn lifted_mor(&self, _t: &C, h: &Mor) -> TermResult<C::Hom> {
        self.f.mor(h)
    }
    fn mark_inv(&self, _t: &C, m: &MarkRef) -> Option<TermResult<C::Hom>> {
        match m {
            MarkRef::Lift(lm) => Some(self.f.comparison_inv(lm)),
            MarkRef::Declared(_) => None,
        }
    }
}

/// `F^s = Fbar . lambda`, strict by construction, with `zeta_x : F^s(x) -> F(x)`.
pub struct Strictified<'a, C: StrictLcc, F: WeakFunctor<C>> {
    pub weak: &'a F,
    lambda: Option<Lambda>,
    _c: std::marker::PhantomData<C>,
}

pub fn strictify<C: StrictLcc, F: WeakFunctor<C>>(f: &F) -> TermResult<Strictified<'_, C, F>> {
    let lambda = if f.is_strict() { None } else { Some(Lambda::new(f.source())?) };
    Ok(Strictified { weak: f, lambda, _c: std::marker::PhantomData })
}

impl<C: StrictLcc, F: WeakFunctor<C>> Strictified<'_, C, F> {
    fn bar(&self) -> Bar<'_, C, F> {
        Bar { f: self.weak, _c: std::marker::PhantomData }
    }

    pub fn obj(&self, x: &Obj) -> TermResult<C::Ob> {
        match &self.lambda {
            None => self.weak.obj(x),
            Some(l) => apply_obj(&l.lift, self.weak.target(), &self.bar(), &l.obj(x)?),
        }
    }

    pub fn mor(&self, h: &Mor) -> TermResult<C::Hom> {
        match &self.lambda {
            None => self.weak.mor(h),
            Some(l) => apply_mor(&l.lift, self.weak.target(), &self.bar(), &l.mor(h)?),
        }
    }

    pub fn zeta(&self, x: &Obj) -> TermResult<C::Hom> {
        match &self.lambda {
            None => Ok(self.weak.target().id(&self.weak.obj(x)?)),
            Some(l) => apply_mor(&l.lift, self.weak.target(), &self.bar(), &l.phi(x)?.fwd),
        }
    }

    pub fn zeta_inv(&self, x: &Obj) -> TermResult<C::Hom> {
        match &self.lambda {
            None => Ok(self.weak.target().id(&self.weak.obj(x)?)),
            Some(l) => apply_mor(&l.lift, self.weak.target(), &self.bar(), &l.phi(x)?.inv),
        }
    }

    pub fn lambda(&self) -> Option<&Lambda> {
        self.lambda.as_ref()
    }
}

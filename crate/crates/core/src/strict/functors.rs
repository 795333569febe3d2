use std::sync::Arc;

use super::slice::{SliceHom, SliceObj, SliceView};
use crate::functor::{apply_mor, apply_obj, StrictLcc, Table};
use crate::presentation::{MarkDiagram, Presentation, TermError, TermResult, Typer};
use crate::term::{LiftMark, MarkRef, Mor, Obj};

/// Pullback along `!sigma`, written out term by term.
///
/// With `one_special` the terminal object goes to the slice terminal `id sigma`
/// instead of the projection `sigma x 1 -> sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub sigma: Obj,
    pub one_special: bool,
}

impl Star {
    pub fn new(sigma: &Obj, one_special: bool) -> Self {
        Star { sigma: sigma.clone(), one_special }
    }

    fn special(&self, x: &Obj) -> bool {
        self.one_special && x.is_one()
    }

    fn bs(&self) -> Mor {
        Mor::bang(self.sigma.clone())
    }

    pub fn vertex(&self, x: &Obj) -> Obj {
        if self.special(x) {
            self.sigma.clone()
        } else {
            Obj::pb(self.bs(), Mor::bang(x.clone()))
        }
    }

    /// Structure map of the image of `x`.
    pub fn map(&self, x: &Obj) -> Mor {
        if self.special(x) {
            Mor::id(self.sigma.clone())
        } else {
            Mor::p1(self.bs(), Mor::bang(x.clone()))
        }
    }

    pub fn obj(&self, x: &Obj) -> SliceObj {
        SliceObj { vertex: self.vertex(x), map: self.map(x) }
    }

    /// Second projection `vertex(x) -> x`.
    pub fn snd(&self, x: &Obj) -> Mor {
        if self.special(x) {
            self.bs()
        } else {
            Mor::p2(self.bs(), Mor::bang(x.clone()))
        }
    }

    /// The map `W -> vertex(x)` with components `s : W -> sigma` and `y : W -> x`.
    pub fn pt(&self, x: &Obj, s: Mor, y: Mor) -> Mor {
        if self.special(x) {
            s
        } else {
            Mor::pb_pair(self.bs(), Mor::bang(x.clone()), s, y)
        }
    }

    /// Image of `h : x -> y`.
    pub fn mor(&self, h: &Mor, x: &Obj, y: &Obj) -> Mor {
        self.pt(y, self.map(x), Mor::comp(h.clone(), self.snd(x)))
    }

    /// `Pb(u1, u2) -> vertex(Pb(f1, f2))` for `f1 : a -> c`, `f2 : b -> c` with images `u1`, `u2`.
    pub fn zeta_pb(&self, f1: &Mor, f2: &Mor, a: &Obj, b: &Obj, u1: &Mor, u2: &Mor) -> Mor {
        let (q1, q2) = (Mor::p1(u1.clone(), u2.clone()), Mor::p2(u1.clone(), u2.clone()));
        let inner = Mor::pb_pair(
            f1.clone(),
            f2.clone(),
            Mor::comp(self.snd(a), q1.clone()),
            Mor::comp(self.snd(b), q2),
        );
        self.pt(&Obj::pb(f1.clone(), f2.clone()), Mor::comp(self.map(a), q1), inner)
    }

    /// `Pi(u1, ug) -> vertex(Pi(f1, g))` for `f1 : a -> c`, `g : b -> a` with images `u1`, `ug`.
    #[allow(clippy::too_many_arguments)]
    pub fn zeta_pi(&self, f1: &Mor, g: &Mor, a: &Obj, b: &Obj, c: &Obj, u1: &Mor, ug: &Mor) -> Mor {
        let pm = Mor::pi_map(u1.clone(), ug.clone());
        let f2 = Mor::comp(self.snd(c), pm.clone());
        let (r1, r2) = (Mor::p1(f1.clone(), f2.clone()), Mor::p2(f1.clone(), f2.clone()));
        let over = Mor::comp(self.map(c), Mor::comp(pm.clone(), r2.clone()));
        let pair = Mor::pb_pair(u1.clone(), pm.clone(), self.pt(a, over, r1), r2);
        let e = Mor::comp(self.snd(b), Mor::comp(Mor::eval(u1.clone(), ug.clone()), pair));
        let cur = Mor::curry(f1.clone(), g.clone(), f2, e);
        self.pt(&Obj::pi(f1.clone(), g.clone()), Mor::comp(self.map(c), pm), cur)
    }
}

/// A functor given by its action on all terms, preserving the structure only up to iso.
pub trait WeakFunctor<C: StrictLcc> {
    fn source(&self) -> &Arc<Presentation>;
    fn target(&self) -> &C;
    fn obj(&self, x: &Obj) -> TermResult<C::Ob>;
    fn mor(&self, h: &Mor) -> TermResult<C::Hom>;
    /// Inverse of the comparison from the image of a (lifted) marked vertex into
    /// the canonical object of the images.
    fn comparison_inv(&self, m: &LiftMark) -> TermResult<C::Hom>;
    fn is_strict(&self) -> bool {
        false
    }
}

fn boundary(p: &Presentation, m: &Mor) -> TermResult<(Obj, Obj)> {
    Typer::new(p).boundary(m)
}

/// `sigma* : base -> base / sigma`, sending `y` to the projection `sigma x y -> sigma`.
pub struct BangPullback {
    pub view: SliceView,
    pub star: Star,
}

pub fn bang_pullback(view: &SliceView) -> BangPullback {
    BangPullback { view: view.clone(), star: Star::new(&view.sigma, false) }
}

impl BangPullback {
    fn image(&self, h: &Mor) -> TermResult<(Obj, Obj, SliceHom)> {
        let (x, y) = boundary(&self.view.base, h)?;
        let hom = SliceHom { dom: self.star.obj(&x), cod: self.star.obj(&y), under: self.star.mor(h, &x, &y) };
        Ok((x, y, hom))
    }

    fn canonical_inv(&self, d: &MarkDiagram) -> TermResult<SliceHom> {
        let st = &self.star;
        match d {
            MarkDiagram::Tm { .. } => {
                let under = st.pt(&Obj::one(), Mor::id(st.sigma.clone()), st.bs());
                Ok(SliceHom { dom: self.view.one(), cod: st.obj(&Obj::one()), under })
            }
            MarkDiagram::Pb { f1, f2, .. } => {
                let (a, _c, i1) = self.image(f1)?;
                let (b, _, i2) = self.image(f2)?;
                let under = st.zeta_pb(f1, f2, &a, &b, &i1.under, &i2.under);
                Ok(SliceHom { dom: self.view.pb(&i1, &i2)?, cod: st.obj(&Obj::pb(f1.clone(), f2.clone())), under })
            }
            MarkDiagram::Pi { f1, g, .. } => {
                let (a, c, i1) = self.image(f1)?;
                let (b, _, ig) = self.image(g)?;
                let under = st.zeta_pi(f1, g, &a, &b, &c, &i1.under, &ig.under);
                Ok(SliceHom { dom: self.view.pi(&i1, &ig)?, cod: st.obj(&Obj::pi(f1.clone(), g.clone())), under })
            }
        }
    }
}

impl WeakFunctor<SliceView> for BangPullback {
    fn source(&self) -> &Arc<Presentation> {
        &self.view.base
    }
    fn target(&self) -> &SliceView {
        &self.view
    }
    fn obj(&self, x: &Obj) -> TermResult<SliceObj> {
        Typer::new(&self.view.base).check_obj(x)?;
        Ok(self.star.obj(x))
    }
    fn mor(&self, h: &Mor) -> TermResult<SliceHom> {
        Ok(self.image(h)?.2)
    }
    fn comparison_inv(&self, m: &LiftMark) -> TermResult<SliceHom> {
        let (f1, f2) = match m {
            LiftMark::Tm => return self.canonical_inv(&MarkDiagram::Tm { vertex: Obj::one() }),
            LiftMark::Pb(f1, f2) | LiftMark::Pi(f1, f2) => (f1.clone(), f2.clone()),
            LiftMark::Declared(i) => {
                let d = self.view.base.mark_diagram(&MarkRef::Declared(*i))?;
                let inv = self.canonical_inv(&d)?;
                let img = self.mor(&Mor::mark_inv(MarkRef::Declared(*i)))?;
                return self.view.comp(&img, &inv);
            }
        };
        let d = if matches!(m, LiftMark::Pb(..)) {
            MarkDiagram::Pb { vertex: Obj::pb(f1.clone(), f2.clone()), p1: Mor::p1(f1.clone(), f2.clone()), p2: Mor::p2(f1.clone(), f2.clone()), f1, f2 }
        } else {
            let pm = Mor::pi_map(f1.clone(), f2.clone());
            MarkDiagram::Pi { vertex: Obj::pi(f1.clone(), f2.clone()), eps: Mor::eval(f1.clone(), f2.clone()), f1, g: f2, f2: pm }
        };
        self.canonical_inv(&d)
    }
}

/// A strict functor between presentations given by a generator table.
pub struct TableFunctor {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub table: Table,
}

impl WeakFunctor<Presentation> for TableFunctor {
    fn source(&self) -> &Arc<Presentation> {
        &self.source
    }
    fn target(&self) -> &Presentation {
        &self.target
    }
    fn obj(&self, x: &Obj) -> TermResult<Obj> {
        apply_obj(&self.source, &*self.target, &self.table, x)
    }
    fn mor(&self, h: &Mor) -> TermResult<Mor> {
        apply_mor(&self.source, &*self.target, &self.table, h)
    }
    fn comparison_inv(&self, m: &LiftMark) -> TermResult<Mor> {
        Ok(match m {
            LiftMark::Tm => Mor::id(Obj::one()),
            LiftMark::Pb(f1, f2) => Mor::id(Obj::pb(self.mor(f1)?, self.mor(f2)?)),
            LiftMark::Pi(f1, g) => Mor::id(Obj::pi(self.mor(f1)?, self.mor(g)?)),
            LiftMark::Declared(i) => self.mor(&Mor::mark_inv(MarkRef::Declared(*i)))?,
        })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// `s* : base/tau -> base/sigma` for `s : sigma -> tau`.
#[derive(Debug, Clone)]
pub struct PullbackFunctor {
    pub s: Mor,
    pub from: SliceView,
    pub to: SliceView,
}

pub fn pullback_functor(base: &Arc<Presentation>, s: &Mor) -> TermResult<PullbackFunctor> {
    let (sigma, tau) = boundary(base, s)?;
    Ok(PullbackFunctor { s: s.clone(), from: super::slice_view(base, &tau)?, to: super::slice_view(base, &sigma)? })
}

fn over(view: &SliceView, x: &SliceObj) -> TermResult<()> {
    let c = boundary(&view.base, &x.map)?.1;
    if c == view.sigma {
        Ok(())
    } else {
        Err(TermError::BoundaryMismatch { context: "slice object".into(), left: c, right: view.sigma.clone() })
    }
}

impl PullbackFunctor {
    /// `y |-> P1(s, y)`.
    pub fn obj(&self, y: &SliceObj) -> TermResult<SliceObj> {
        over(&self.from, y)?;
        Ok(SliceObj { vertex: Obj::pb(self.s.clone(), y.map.clone()), map: Mor::p1(self.s.clone(), y.map.clone()) })
    }

    pub fn hom(&self, h: &SliceHom) -> TermResult<SliceHom> {
        let (x, y) = (self.obj(&h.dom)?, self.obj(&h.cod)?);
        let s = self.s.clone();
        let under = Mor::pb_pair(
            s.clone(),
            h.cod.map.clone(),
            Mor::p1(s.clone(), h.dom.map.clone()),
            Mor::comp(h.under.clone(), Mor::p2(s, h.dom.map.clone())),
        );
        Ok(SliceHom { dom: x, cod: y, under })
    }

    /// `Sigma_s x = s . x`.
    pub fn sigma_obj(&self, x: &SliceObj) -> TermResult<SliceObj> {
        over(&self.to, x)?;
        Ok(SliceObj { vertex: x.vertex.clone(), map: Mor::comp(self.s.clone(), x.map.clone()) })
    }

    pub fn sigma_hom(&self, h: &SliceHom) -> TermResult<SliceHom> {
        Ok(SliceHom { dom: self.sigma_obj(&h.dom)?, cod: self.sigma_obj(&h.cod)?, under: h.under.clone() })
    }

    /// `Pi_s x = PiMap(s, x)`.
    pub fn pi_obj(&self, x: &SliceObj) -> TermResult<SliceObj> {
        over(&self.to, x)?;
        Ok(SliceObj { vertex: Obj::pi(self.s.clone(), x.map.clone()), map: Mor::pi_map(self.s.clone(), x.map.clone()) })
    }

    pub fn pi_hom(&self, h: &SliceHom) -> TermResult<SliceHom> {
        let s = self.s.clone();
        let under = Mor::curry(
            s.clone(),
            h.cod.map.clone(),
            Mor::pi_map(s.clone(), h.dom.map.clone()),
            Mor::comp(h.under.clone(), Mor::eval(s, h.dom.map.clone())),
        );
        Ok(SliceHom { dom: self.pi_obj(&h.dom)?, cod: self.pi_obj(&h.cod)?, under })
    }

    /// Unit `x -> s* Sigma_s x`.
    pub fn sigma_unit(&self, x: &SliceObj) -> TermResult<SliceHom> {
        let sx = self.sigma_obj(x)?;
        let under = Mor::pb_pair(self.s.clone(), sx.map.clone(), x.map.clone(), Mor::id(x.vertex.clone()));
        Ok(SliceHom { dom: x.clone(), cod: self.obj(&sx)?, under })
    }

    /// Counit `Sigma_s s* y -> y`.
    pub fn sigma_counit(&self, y: &SliceObj) -> TermResult<SliceHom> {
        let dom = self.sigma_obj(&self.obj(y)?)?;
        Ok(SliceHom { dom, cod: y.clone(), under: Mor::p2(self.s.clone(), y.map.clone()) })
    }

    /// Unit `y -> Pi_s s* y`.
    pub fn pi_unit(&self, y: &SliceObj) -> TermResult<SliceHom> {
        let sy = self.obj(y)?;
        let under = Mor::curry(self.s.clone(), sy.map.clone(), y.map.clone(), Mor::id(sy.vertex.clone()));
        Ok(SliceHom { dom: y.clone(), cod: self.pi_obj(&sy)?, under })
    }

    /// Counit `s* Pi_s x -> x`.
    pub fn pi_counit(&self, x: &SliceObj) -> TermResult<SliceHom> {
        let dom = self.obj(&self.pi_obj(x)?)?;
        Ok(SliceHom { dom, cod: x.clone(), under: Mor::eval(self.s.clone(), x.map.clone()) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjunction {
    /// `Sigma_s -| s*`
    SigmaPullback,
    /// `s* -| Pi_s`
    PullbackPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// From a map out of the left adjoint to a map into the right adjoint.
    ToRight,
    ToLeft,
}

/// Adjoint mates. `x` is the object the left adjoint is applied to, `y` the
/// object the right adjoint is applied to.
pub fn transpose(
    f: &PullbackFunctor,
    adj: Adjunction,
    dir: Direction,
    x: &SliceObj,
    y: &SliceObj,
    h: &Mor,
) -> TermResult<SliceHom> {
    let s = f.s.clone();
    match (adj, dir) {
        (Adjunction::SigmaPullback, Direction::ToRight) => {
            let under = Mor::pb_pair(s, y.map.clone(), x.map.clone(), h.clone());
            Ok(SliceHom { dom: x.clone(), cod: f.obj(y)?, under })
        }
        (Adjunction::SigmaPullback, Direction::ToLeft) => {
            let under = Mor::comp(Mor::p2(s, y.map.clone()), h.clone());
            Ok(SliceHom { dom: f.sigma_obj(x)?, cod: y.clone(), under })
        }
        (Adjunction::PullbackPi, Direction::ToRight) => {
            let under = Mor::curry(s, y.map.clone(), x.map.clone(), h.clone());
            Ok(SliceHom { dom: x.clone(), cod: f.pi_obj(y)?, under })
        }
        (Adjunction::PullbackPi, Direction::ToLeft) => {
            let pm = Mor::pi_map(s.clone(), y.map.clone());
            let pair = Mor::pb_pair(
                s.clone(),
                pm,
                Mor::p1(s.clone(), x.map.clone()),
                Mor::comp(h.clone(), Mor::p2(s.clone(), x.map.clone())),
            );
            let under = Mor::comp(Mor::eval(s, y.map.clone()), pair);
            Ok(SliceHom { dom: f.obj(x)?, cod: y.clone(), under })
        }
    }
}

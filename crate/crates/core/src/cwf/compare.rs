use std::cell::RefCell;
use std::collections::HashMap;

use super::context::Context;
use super::{CwfError, CwfResult};
use crate::presentation::Typer;
use crate::strict::coalgebra::Iso;
use crate::strict::functors::Star;
use crate::strict::slice::{slice_view, SliceHom, SliceObj, SliceView};
use crate::term::{mor_mentions, obj_mentions, Mor, MorKind, Name, Obj, ObjKind};

/// The comparison `a : G.sigma -> G/sigma` and its inverse `b`.
///
/// Subterms not mentioning the variable go through pullback along `!sigma`
/// as whole terms; the rest is mapped constructor by constructor, with the
/// one-level comparison maps inserted where a constructor leaves the variable.
pub struct Compare {
    pub ext: Context,
    pub parent: Context,
    pub sigma: Obj,
    pub v: Mor,
    vname: Name,
    star: Star,
    objs: RefCell<HashMap<Obj, Mor>>,
    mors: RefCell<HashMap<Mor, Mor>>,
}

pub fn a_compare(ext: &Context) -> CwfResult<Compare> {
    let (v, sigma) = ext.variable().ok_or_else(|| CwfError::Invalid("not an extension".into()))?;
    let parent = ext.parent().expect("extension parent");
    Ok(Compare {
        ext: ext.clone(),
        parent,
        star: Star::new(&sigma, true),
        sigma,
        v,
        vname: ext.variable_name().expect("extension variable"),
        objs: RefCell::new(HashMap::new()),
        mors: RefCell::new(HashMap::new()),
    })
}

impl Compare {
    pub fn view(&self) -> SliceView {
        slice_view(self.parent.presentation(), &self.sigma).expect("sigma is a type of the parent")
    }

    pub fn star(&self) -> &Star {
        &self.star
    }

    pub fn mentions_v(&self, m: &Mor) -> bool {
        mor_mentions(m, &mut |n| *n == self.vname)
    }

    pub fn obj_mentions_v(&self, o: &Obj) -> bool {
        obj_mentions(o, &mut |n| *n == self.vname)
    }

    fn bnd(&self, m: &Mor) -> CwfResult<(Obj, Obj)> {
        Ok(Typer::new(self.ext.presentation()).boundary(m)?)
    }

    /// Structure map of `a(x)`.
    pub fn a_map(&self, x: &Obj) -> CwfResult<Mor> {
        if let Some(m) = self.objs.borrow().get(x) {
            return Ok(m.clone());
        }
        let r = if !self.obj_mentions_v(x) {
            self.star.map(x)
        } else {
            match x.kind() {
                ObjKind::Pb(k1, k2) => {
                    let a = self.bnd(k1)?.0;
                    Mor::comp(self.a_map(&a)?, Mor::p1(self.a_mor(k1)?, self.a_mor(k2)?))
                }
                ObjKind::Pi(k1, k2) => {
                    let c = self.bnd(k1)?.1;
                    Mor::comp(self.a_map(&c)?, Mor::pi_map(self.a_mor(k1)?, self.a_mor(k2)?))
                }
                _ => return Err(CwfError::Invalid(format!("unexpected type {x}"))),
            }
        };
        self.objs.borrow_mut().insert(x.clone(), r.clone());
        Ok(r)
    }

    /// Vertex of `a(x)`, the domain of its structure map.
    pub fn a_vertex(&self, x: &Obj) -> CwfResult<Obj> {
        Ok(if !self.obj_mentions_v(x) {
            self.star.vertex(x)
        } else {
            match x.kind() {
                ObjKind::Pb(k1, k2) => Obj::pb(self.a_mor(k1)?, self.a_mor(k2)?),
                ObjKind::Pi(k1, k2) => Obj::pi(self.a_mor(k1)?, self.a_mor(k2)?),
                _ => return Err(CwfError::Invalid(format!("unexpected type {x}"))),
            }
        })
    }

    pub fn a_obj(&self, x: &Obj) -> CwfResult<SliceObj> {
        Ok(SliceObj { vertex: self.a_vertex(x)?, map: self.a_map(x)? })
    }

    fn zeta_pb(&self, f1: &Mor, f2: &Mor) -> CwfResult<Mor> {
        let ((a, _), (b, _)) = (self.bnd(f1)?, self.bnd(f2)?);
        Ok(self.star.zeta_pb(f1, f2, &a, &b, &self.a_mor(f1)?, &self.a_mor(f2)?))
    }

    fn zeta_pi(&self, f1: &Mor, g: &Mor) -> CwfResult<Mor> {
        let ((a, c), (b, _)) = (self.bnd(f1)?, self.bnd(g)?);
        Ok(self.star.zeta_pi(f1, g, &a, &b, &c, &self.a_mor(f1)?, &self.a_mor(g)?))
    }

    /// Underlying map of `a(h)`.
    pub fn a_mor(&self, h: &Mor) -> CwfResult<Mor> {
        if let Some(m) = self.mors.borrow().get(h) {
            return Ok(m.clone());
        }
        let r = if !self.mentions_v(h) {
            let (x, y) = self.bnd(h)?;
            self.star.mor(h, &x, &y)
        } else {
            match h.kind() {
                MorKind::Gen(_) => {
                    let s = self.sigma.clone();
                    self.star.pt(&s, Mor::id(s.clone()), Mor::id(s.clone()))
                }
                MorKind::Comp(g, f) => Mor::comp(self.a_mor(g)?, self.a_mor(f)?),
                MorKind::Id(y) => Mor::id(self.a_vertex(y)?),
                MorKind::Bang(y) => self.a_map(y)?,
                MorKind::P1(k1, k2) => Mor::p1(self.a_mor(k1)?, self.a_mor(k2)?),
                MorKind::P2(k1, k2) => Mor::p2(self.a_mor(k1)?, self.a_mor(k2)?),
                MorKind::PiMap(k1, g) => Mor::pi_map(self.a_mor(k1)?, self.a_mor(g)?),
                MorKind::Eval(k1, g) => Mor::eval(self.a_mor(k1)?, self.a_mor(g)?),
                MorKind::PbPair { f1, f2, q1, q2 } => {
                    let pair = Mor::pb_pair(self.a_mor(f1)?, self.a_mor(f2)?, self.a_mor(q1)?, self.a_mor(q2)?);
                    if self.mentions_v(f1) || self.mentions_v(f2) {
                        pair
                    } else {
                        Mor::comp(self.zeta_pb(f1, f2)?, pair)
                    }
                }
                MorKind::Curry { f1, g, f2, e } => {
                    let mut ae = self.a_mor(e)?;
                    if !self.mentions_v(f1) && !self.mentions_v(f2) {
                        ae = Mor::comp(ae, self.zeta_pb(f1, f2)?);
                    }
                    let cur = Mor::curry(self.a_mor(f1)?, self.a_mor(g)?, self.a_mor(f2)?, ae);
                    if self.mentions_v(f1) || self.mentions_v(g) {
                        cur
                    } else {
                        Mor::comp(self.zeta_pi(f1, g)?, cur)
                    }
                }
                MorKind::MarkInv(_) | MorKind::LiftedGen(_) => {
                    return Err(CwfError::Invalid(format!("no comparison image for {h}")))
                }
            }
        };
        self.mors.borrow_mut().insert(h.clone(), r.clone());
        Ok(r)
    }

    pub fn a_hom(&self, h: &Mor) -> CwfResult<SliceHom> {
        let (x, y) = self.bnd(h)?;
        Ok(SliceHom { dom: self.a_obj(&x)?, cod: self.a_obj(&y)?, under: self.a_mor(h)? })
    }

    /// `b(x) = Pb(v, x)`.
    pub fn b_obj(&self, x: &SliceObj) -> Obj {
        Obj::pb(self.v.clone(), x.map.clone())
    }

    pub fn b_hom(&self, h: &SliceHom) -> Mor {
        let (mx, my) = (h.dom.map.clone(), h.cod.map.clone());
        Mor::pb_pair(
            self.v.clone(),
            my,
            Mor::p1(self.v.clone(), mx.clone()),
            Mor::comp(h.under.clone(), Mor::p2(self.v.clone(), mx)),
        )
    }

    /// `W -> tau` from `w : W -> a(tau)` lying over the variable.
    pub fn down(&self, tau: &Obj, w: &Mor) -> CwfResult<Mor> {
        if tau.is_one() {
            return Ok(Mor::bang(self.bnd(w)?.0));
        }
        if !self.obj_mentions_v(tau) {
            return Ok(Mor::comp(self.star.snd(tau), w.clone()));
        }
        match tau.kind() {
            ObjKind::Pb(k1, k2) => {
                let ((a, _), (b, _)) = (self.bnd(k1)?, self.bnd(k2)?);
                let (u1, u2) = (self.a_mor(k1)?, self.a_mor(k2)?);
                let d1 = self.down(&a, &Mor::comp(Mor::p1(u1.clone(), u2.clone()), w.clone()))?;
                let d2 = self.down(&b, &Mor::comp(Mor::p2(u1, u2), w.clone()))?;
                Ok(Mor::pb_pair(k1.clone(), k2.clone(), d1, d2))
            }
            ObjKind::Pi(k1, k2) => {
                let ((a, c), (b, _)) = (self.bnd(k1)?, self.bnd(k2)?);
                let (u1, u2) = (self.a_mor(k1)?, self.a_mor(k2)?);
                let pm = Mor::pi_map(u1.clone(), u2.clone());
                let f2 = self.down(&c, &Mor::comp(pm.clone(), w.clone()))?;
                let up_a = self.up(&a, &Mor::p1(k1.clone(), f2.clone()))?;
                let pair = Mor::pb_pair(u1.clone(), pm, up_a, Mor::comp(w.clone(), Mor::p2(k1.clone(), f2.clone())));
                let e = self.down(&b, &Mor::comp(Mor::eval(u1, u2), pair))?;
                Ok(Mor::curry(k1.clone(), k2.clone(), f2, e))
            }
            _ => Err(CwfError::Invalid(format!("unexpected type {tau}"))),
        }
    }

    /// `W -> a(tau)` over the variable, from `x : W -> tau`.
    pub fn up(&self, tau: &Obj, x: &Mor) -> CwfResult<Mor> {
        if !self.obj_mentions_v(tau) {
            let w = self.bnd(x)?.0;
            let over = Mor::comp(self.v.clone(), Mor::bang(w));
            return Ok(self.star.pt(tau, over, x.clone()));
        }
        match tau.kind() {
            ObjKind::Pb(k1, k2) => {
                let ((a, _), (b, _)) = (self.bnd(k1)?, self.bnd(k2)?);
                let u1 = self.up(&a, &Mor::comp(Mor::p1(k1.clone(), k2.clone()), x.clone()))?;
                let u2 = self.up(&b, &Mor::comp(Mor::p2(k1.clone(), k2.clone()), x.clone()))?;
                Ok(Mor::pb_pair(self.a_mor(k1)?, self.a_mor(k2)?, u1, u2))
            }
            ObjKind::Pi(k1, k2) => {
                let ((a, c), (b, _)) = (self.bnd(k1)?, self.bnd(k2)?);
                let (a1, a2) = (self.a_mor(k1)?, self.a_mor(k2)?);
                let pm = Mor::pi_map(k1.clone(), k2.clone());
                let f2 = self.up(&c, &Mor::comp(pm.clone(), x.clone()))?;
                let down_a = self.down(&a, &Mor::p1(a1.clone(), f2.clone()))?;
                let pair =
                    Mor::pb_pair(k1.clone(), pm, down_a, Mor::comp(x.clone(), Mor::p2(a1.clone(), f2.clone())));
                let e = self.up(&b, &Mor::comp(Mor::eval(k1.clone(), k2.clone()), pair))?;
                Ok(Mor::curry(a1, a2, f2, e))
            }
            _ => Err(CwfError::Invalid(format!("unexpected type {tau}"))),
        }
    }

    /// `theta : Pb(v, a tau) -> tau`.
    pub fn theta(&self, tau: &Obj) -> CwfResult<Mor> {
        self.down(tau, &Mor::p2(self.v.clone(), self.a_map(tau)?))
    }

    /// `chi : tau -> Pb(v, a tau)`, inverse to `theta`.
    pub fn chi(&self, tau: &Obj) -> CwfResult<Mor> {
        let up = self.up(tau, &Mor::id(tau.clone()))?;
        Ok(Mor::pb_pair(self.v.clone(), self.a_map(tau)?, Mor::bang(tau.clone()), up))
    }

    /// `b . a` at `tau`: `tau ~ Pb(v, a tau)`.
    pub fn ba_iso(&self, tau: &Obj) -> CwfResult<Iso> {
        Ok(Iso { fwd: self.chi(tau)?, inv: self.theta(tau)? })
    }

    /// `a . b` at `x`: vertex of `a(b(x))` to the vertex of `x`, in the parent.
    pub fn ab_iso(&self, x: &SliceObj) -> CwfResult<Iso> {
        let d = self.a_mor(&self.v)?;
        let am = self.a_mor(&x.map)?;
        let vx = &x.vertex;
        let fwd = Mor::comp(self.star.snd(vx), Mor::p2(d.clone(), am.clone()));
        let pt = self.star.pt(vx, x.map.clone(), Mor::id(vx.clone()));
        Ok(Iso { fwd, inv: Mor::pb_pair(d, am, x.map.clone(), pt) })
    }
}

use super::compare::Compare;
use super::context::{mk_subst, Context, Subst};
use super::{CwfError, CwfResult};
use crate::closure::{decide_equal, Verdict};
use crate::term::{Mor, MorKind, Obj, ObjKind};

pub fn unit_ty() -> Obj {
    Obj::one()
}

/// The unique term of the unit type.
pub fn tt() -> Mor {
    Mor::id(Obj::one())
}

fn mismatch(expected: impl ToString, found: impl ToString) -> CwfError {
    CwfError::TypeMismatch { expected: expected.to_string(), found: found.to_string() }
}

/// `sigma x tau` as the pullback of the two maps to the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct Prod {
    pub left: Obj,
    pub right: Obj,
}

impl Prod {
    pub fn new(ctx: &Context, left: &Obj, right: &Obj) -> CwfResult<Prod> {
        ctx.check_ty(left)?;
        ctx.check_ty(right)?;
        Ok(Prod { left: left.clone(), right: right.clone() })
    }

    /// Reads a product type back, if it is one.
    pub fn from_ty(o: &Obj) -> Option<Prod> {
        let ObjKind::Pb(f1, f2) = o.kind() else { return None };
        match (f1.kind(), f2.kind()) {
            (MorKind::Bang(a), MorKind::Bang(b)) => Some(Prod { left: a.clone(), right: b.clone() }),
            _ => None,
        }
    }

    fn legs(&self) -> (Mor, Mor) {
        (Mor::bang(self.left.clone()), Mor::bang(self.right.clone()))
    }

    pub fn ty(&self) -> Obj {
        let (a, b) = self.legs();
        Obj::pb(a, b)
    }

    pub fn pair(&self, ctx: &Context, s: &Mor, t: &Mor) -> CwfResult<Mor> {
        ctx.check_tm(s, &self.left)?;
        ctx.check_tm(t, &self.right)?;
        let (a, b) = self.legs();
        Ok(Mor::pb_pair(a, b, s.clone(), t.clone()))
    }

    pub fn fst(&self, u: &Mor) -> Mor {
        let (a, b) = self.legs();
        Mor::comp(Mor::p1(a, b), u.clone())
    }

    pub fn snd(&self, u: &Mor) -> Mor {
        let (a, b) = self.legs();
        Mor::comp(Mor::p2(a, b), u.clone())
    }
}

/// `Eq s t`, the equalizer of two terms of one type.
#[derive(Debug, Clone, PartialEq)]
pub struct Eq {
    pub lhs: Mor,
    pub rhs: Mor,
}

impl Eq {
    pub fn new(ctx: &Context, s: &Mor, t: &Mor) -> CwfResult<Eq> {
        let a = ctx.type_of(s)?;
        let b = ctx.type_of(t)?;
        if a != b {
            return Err(mismatch(a, b));
        }
        Ok(Eq { lhs: s.clone(), rhs: t.clone() })
    }

    pub fn from_ty(o: &Obj) -> Option<Eq> {
        let ObjKind::Pb(s, t) = o.kind() else { return None };
        Some(Eq { lhs: s.clone(), rhs: t.clone() })
    }

    pub fn ty(&self) -> Obj {
        Obj::pb(self.lhs.clone(), self.rhs.clone())
    }

    /// `refl`, available only when the engine proves the two sides equal.
    pub fn refl(&self, ctx: &Context, budget: usize) -> CwfResult<Mor> {
        let v = decide_equal(&self.lhs, &self.rhs, ctx.presentation(), &ctx.facts.facts, budget, &[], false)?;
        match v {
            Verdict::Equal { .. } => Ok(Mor::pb_pair(self.lhs.clone(), self.rhs.clone(), tt(), tt())),
            _ => Err(CwfError::ReflRequiresEqual(format!("{} = {}", self.lhs, self.rhs))),
        }
    }

    /// Reflection: an inhabitant of `Eq s t` makes `s = t` a fact of the context.
    pub fn reflect(ctx: &mut Context, u: &Mor) -> CwfResult<bool> {
        let ty = ctx.type_of(u)?;
        let e = Eq::from_ty(&ty).ok_or_else(|| mismatch("an equality type", &ty))?;
        ctx.register_fact(&e.lhs, &e.rhs)
    }
}

/// `Sigma_sigma tau` for `tau` over `G.sigma`, given by the comparison at `G.sigma`.
pub struct Sigma<'a> {
    pub cmp: &'a Compare,
    pub tau: Obj,
}

impl<'a> Sigma<'a> {
    pub fn new(cmp: &'a Compare, tau: &Obj) -> CwfResult<Sigma<'a>> {
        cmp.ext.check_ty(tau)?;
        Ok(Sigma { cmp, tau: tau.clone() })
    }

    pub fn ty(&self) -> CwfResult<Obj> {
        self.cmp.a_vertex(&self.tau)
    }

    /// The display map `Sigma_sigma tau -> sigma`.
    pub fn display(&self) -> CwfResult<Mor> {
        self.cmp.a_map(&self.tau)
    }

    fn at(&self, s: &Mor) -> CwfResult<Subst> {
        mk_subst(&Subst::identity(&self.cmp.parent), &self.cmp.ext, s)
    }

    /// `(s, t)` with `s : sigma` and `t : tau[<id, s>]`.
    pub fn pair(&self, s: &Mor, t: &Mor) -> CwfResult<Mor> {
        let at = self.at(s)?;
        self.cmp.parent.check_tm(t, &at.ty(&self.tau)?)?;
        let k = self.cmp.up(&self.tau, &Mor::id(self.tau.clone()))?;
        Ok(Mor::comp(at.tm(&k)?, t.clone()))
    }

    pub fn pr1(&self, u: &Mor) -> CwfResult<Mor> {
        Ok(Mor::comp(self.display()?, u.clone()))
    }

    /// Second projection, of type `tau[<id, pr1 u>]`.
    pub fn pr2(&self, u: &Mor) -> CwfResult<Mor> {
        let s = self.pr1(u)?;
        let at = self.at(&s)?;
        let theta = at.tm(&self.cmp.theta(&self.tau)?)?;
        Ok(Mor::comp(theta, Mor::pb_pair(s, self.display()?, tt(), u.clone())))
    }
}

/// `Pi_sigma tau` for `tau` over `G.sigma`.
pub struct Pi<'a> {
    pub cmp: &'a Compare,
    pub tau: Obj,
}

impl<'a> Pi<'a> {
    pub fn new(cmp: &'a Compare, tau: &Obj) -> CwfResult<Pi<'a>> {
        cmp.ext.check_ty(tau)?;
        Ok(Pi { cmp, tau: tau.clone() })
    }

    fn bang(&self) -> Mor {
        Mor::bang(self.cmp.sigma.clone())
    }

    pub fn ty(&self) -> CwfResult<Obj> {
        Ok(Obj::pi(self.bang(), self.cmp.a_map(&self.tau)?))
    }

    /// `lam t` for `t : tau` over `G.sigma`.
    pub fn lam(&self, t: &Mor) -> CwfResult<Mor> {
        self.cmp.ext.check_tm(t, &self.tau)?;
        let at = self.cmp.a_mor(t)?;
        let one = Mor::id(Obj::one());
        let e = Mor::comp(at, Mor::p1(self.bang(), one.clone()));
        Ok(Mor::curry(self.bang(), self.cmp.a_map(&self.tau)?, one, e))
    }

    /// `app u` over `G.sigma` for `u : Pi_sigma tau` over `G`.
    pub fn app(&self, u: &Mor) -> CwfResult<Mor> {
        self.cmp.parent.check_tm(u, &self.ty()?)?;
        let am = self.cmp.a_map(&self.tau)?;
        let pm = Mor::pi_map(self.bang(), am.clone());
        let pair = Mor::pb_pair(self.bang(), pm, self.cmp.v.clone(), u.clone());
        self.cmp.down(&self.tau, &Mor::comp(Mor::eval(self.bang(), am), pair))
    }
}

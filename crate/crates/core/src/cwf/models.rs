use std::sync::Arc;

use super::compare::a_compare;
use super::context::{extend, mk_subst, projection, Context, Subst};
use super::{CwfError, CwfResult};
use crate::presentation::Presentation;
use crate::term::{Mor, Obj};

/// `tbar : tau -> sigma` over `G` for a term `t : sigma` over `G.tau`.
pub fn bar_term(ext: &Context, t: &Mor) -> CwfResult<Mor> {
    let cmp = a_compare(ext)?;
    let sigma = ext.type_of(t)?;
    if cmp.obj_mentions_v(&sigma) {
        return Err(CwfError::Invalid(format!("type {sigma} depends on the variable")));
    }
    Ok(Mor::comp(cmp.star().snd(&sigma), cmp.a_mor(t)?))
}

/// `h . v` over `G.tau` for `h : tau -> sigma` over `G`.
pub fn bar_term_inv(ext: &Context, h: &Mor) -> CwfResult<Mor> {
    let (v, tau) = ext.variable().ok_or_else(|| CwfError::Invalid("not an extension".into()))?;
    let parent = ext.parent().expect("extension parent");
    let (d, _) = parent.boundary(h)?;
    if d != tau {
        return Err(CwfError::TypeMismatch { expected: tau.to_string(), found: d.to_string() });
    }
    Ok(Mor::comp(h.clone(), v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Contexts under the base: every context whose root sketch is the base's.
    Coslice,
    /// Contexts reached from the base by context extensions.
    Core,
}

/// A cwf whose contexts live over a fixed base context.
#[derive(Debug, Clone)]
pub struct ContextModel {
    pub base: Context,
    pub kind: ModelKind,
}

pub fn coslice_cwf(base: &Context) -> ContextModel {
    ContextModel { base: base.clone(), kind: ModelKind::Coslice }
}

pub fn core_cwf(base: &Context) -> ContextModel {
    ContextModel { base: base.clone(), kind: ModelKind::Core }
}

/// The core cwf over the free context on a sketch.
pub fn context_as_model(sketch: Presentation) -> ContextModel {
    core_cwf(&Context::free(sketch))
}

impl ContextModel {
    pub fn admits(&self, c: &Context) -> bool {
        match self.kind {
            ModelKind::Coslice => std::ptr::eq(c.presentation().root(), self.base.presentation().root()),
            ModelKind::Core => {
                let mut p: Option<Arc<Presentation>> = Some(c.presentation().clone());
                while let Some(q) = p {
                    if Arc::ptr_eq(&q, self.base.presentation()) {
                        return true;
                    }
                    p = q.parent().cloned();
                }
                false
            }
        }
    }

    pub fn extend(&self, c: &Context, sigma: &Obj) -> CwfResult<(Context, Subst, Mor)> {
        if !self.admits(c) {
            return Err(CwfError::Invalid("context is not in this model".into()));
        }
        extend(c, sigma)
    }

    /// An object `sigma` of the base as the context `G.sigma`.
    pub fn context_of(&self, sigma: &Obj) -> CwfResult<Context> {
        Ok(extend(&self.base, sigma)?.0)
    }

    /// `s : tau -> sigma` as the extension morphism `G.sigma -> G.tau` sending the variable to `s . v`.
    pub fn subst_of(&self, ext_sigma: &Context, ext_tau: &Context, s: &Mor) -> CwfResult<Subst> {
        for e in [ext_sigma, ext_tau] {
            if !e.parent().is_some_and(|p| p.same(&self.base)) {
                return Err(CwfError::Invalid("not a single extension of the base".into()));
            }
        }
        let p = projection(ext_tau)?;
        mk_subst(&p, ext_sigma, &bar_term_inv(ext_tau, s)?)
    }

    /// The inverse direction: a morphism of single extensions over the base back to a term.
    pub fn morphism_of(&self, f: &Subst) -> CwfResult<Mor> {
        let (v, _) = f.source.variable().ok_or_else(|| CwfError::Invalid("source is not an extension".into()))?;
        bar_term(&f.target, &f.tm(&v)?)
    }
}

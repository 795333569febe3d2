use std::sync::Arc;

use serde::Serialize;

use super::{CwfError, CwfResult};
use crate::closure::Facts;
use crate::functor::{apply_mor, apply_obj, Table};
use crate::presentation::{Presentation, TermError, Typer};
use crate::strict::coalgebra::Lambda;
use crate::term::{Mor, Name, Obj, ObjKind};

/// A context: a presentation rooted in a free sketch, with the facts assumed so far.
#[derive(Debug, Clone)]
pub struct Context {
    pres: Arc<Presentation>,
    pub facts: Facts,
}

pub fn empty_context() -> Context {
    Context::free(Presentation::empty())
}

impl Context {
    pub fn free(p: Presentation) -> Context {
        Context { pres: Arc::new(p), facts: Facts::default() }
    }

    /// Wraps a shared presentation; lifts are rejected.
    pub fn from_arc(p: Arc<Presentation>) -> CwfResult<Context> {
        if p.is_lift() {
            return Err(TermError::AlreadyLifted.into());
        }
        Ok(Context { pres: p, facts: Facts::default() })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn same(&self, other: &Context) -> bool {
        Arc::ptr_eq(&self.pres, &other.pres)
    }

    /// `(v, sigma)` for an extension `G.sigma`.
    pub fn variable(&self) -> Option<(Mor, Obj)> {
        self.pres.variable().map(|(n, s)| (Mor::gen(n), s.clone()))
    }

    pub fn variable_name(&self) -> Option<Name> {
        self.pres.variable().map(|(n, _)| n.clone())
    }

    pub fn parent(&self) -> Option<Context> {
        self.pres.parent().map(|p| Context { pres: p.clone(), facts: self.facts.clone() })
    }

    pub fn depth(&self) -> usize {
        self.pres.depth()
    }

    pub fn check_ty(&self, sigma: &Obj) -> CwfResult<()> {
        Typer::new(&self.pres).check_obj(sigma)?;
        Ok(())
    }

    /// Checks `t : 1 -> sigma` syntactically.
    pub fn check_tm(&self, t: &Mor, sigma: &Obj) -> CwfResult<()> {
        let (d, c) = Typer::new(&self.pres).boundary(t)?;
        if !d.is_one() {
            return Err(CwfError::TypeMismatch { expected: Obj::one().to_string(), found: d.to_string() });
        }
        if c != *sigma {
            return Err(CwfError::TypeMismatch { expected: sigma.to_string(), found: c.to_string() });
        }
        Ok(())
    }

    pub fn boundary(&self, t: &Mor) -> CwfResult<(Obj, Obj)> {
        Ok(Typer::new(&self.pres).boundary(t)?)
    }

    /// The type of a term.
    pub fn type_of(&self, t: &Mor) -> CwfResult<Obj> {
        let (d, c) = self.boundary(t)?;
        if !d.is_one() {
            return Err(CwfError::TypeMismatch { expected: Obj::one().to_string(), found: d.to_string() });
        }
        Ok(c)
    }

    /// The coalgebra structure map into the lift of this context.
    pub fn coalgebra(&self) -> CwfResult<Lambda> {
        Ok(Lambda::new(&self.pres)?)
    }

    pub fn register_fact(&mut self, t: &Mor, u: &Mor) -> CwfResult<bool> {
        Ok(self.facts.register_fact(&self.pres, t, u)?)
    }

    fn fresh_var(&self) -> String {
        let mut n = format!("v{}", self.depth());
        while self.pres.has_generator(&n) {
            n.push('\'');
        }
        n
    }
}

/// A generated substitution `source -> target`: a strict functor given on all
/// generators of the source.
#[derive(Debug, Clone)]
pub struct Subst {
    pub source: Context,
    pub target: Context,
    pub table: Table,
}

impl PartialEq for Subst {
    fn eq(&self, other: &Self) -> bool {
        self.source.same(&other.source) && self.target.same(&other.target) && self.table == other.table
    }
}

#[derive(Serialize)]
struct SubstJson {
    source_depth: usize,
    target_depth: usize,
    objects: Vec<(String, String)>,
    morphisms: Vec<(String, String)>,
}

impl Subst {
    fn complete(source: &Context, mut objs: impl FnMut(&Name) -> CwfResult<Obj>, mut mors: impl FnMut(&Name) -> CwfResult<Mor>) -> CwfResult<Table> {
        let mut t = Table::default();
        for n in source.pres.all_obj_gens() {
            let o = objs(&n)?;
            t.objs.push((n, o));
        }
        for a in source.pres.all_mor_gens() {
            let m = mors(&a.name)?;
            t.mors.push((a.name, m));
        }
        Ok(t)
    }

    pub fn identity(g: &Context) -> Subst {
        let table = Self::complete(g, |n| Ok(Obj::new(ObjKind::Gen(n.clone()))), |n| Ok(Mor::gen(n)))
            .expect("identity table");
        Subst { source: g.clone(), target: g.clone(), table }
    }

    /// The unique substitution out of an empty context.
    pub fn initial(empty: &Context, target: &Context) -> CwfResult<Subst> {
        if !empty.pres.all_obj_gens().is_empty() || !empty.pres.all_mor_gens().is_empty() {
            return Err(CwfError::Invalid("source context is not empty".into()));
        }
        Ok(Subst { source: empty.clone(), target: target.clone(), table: Table::default() })
    }

    /// A functor given by a table on generators, checked on boundaries and equations.
    pub fn from_table(source: &Context, target: &Context, table: Table) -> CwfResult<Subst> {
        let objs = |n: &Name| Ok(table.obj(n).cloned().unwrap_or_else(|| Obj::new(ObjKind::Gen(n.clone()))));
        let mors = |n: &Name| Ok(table.mor(n).cloned().unwrap_or_else(|| Mor::gen(n)));
        let full = Self::complete(source, objs, mors)?;
        let s = Subst { source: source.clone(), target: target.clone(), table: full };
        for a in source.pres.all_mor_gens() {
            let img = s.tm(&Mor::gen(&a.name))?;
            let want = (s.ty(&a.dom)?, s.ty(&a.cod)?);
            let got = target.boundary(&img)?;
            if got != want {
                return Err(CwfError::TypeMismatch {
                    expected: format!("{} -> {}", want.0, want.1),
                    found: format!("{} -> {}", got.0, got.1),
                });
            }
        }
        for (l, r) in source.pres.all_equations() {
            let (l, r) = (s.tm(l)?, s.tm(r)?);
            let v = crate::closure::decide_equal(&l, &r, &target.pres, &target.facts.facts, crate::rewrite::DEFAULT_BUDGET, &[], false)?;
            if !v.is_equal() {
                return Err(CwfError::Invalid(format!("equation not preserved: {l} vs {r}")));
            }
        }
        Ok(s)
    }

    /// `sigma[f]`.
    pub fn ty(&self, sigma: &Obj) -> CwfResult<Obj> {
        Ok(apply_obj(&self.source.pres, &*self.target.pres, &self.table, sigma)?)
    }

    /// `t[f]`.
    pub fn tm(&self, t: &Mor) -> CwfResult<Mor> {
        Ok(apply_mor(&self.source.pres, &*self.target.pres, &self.table, t)?)
    }

    /// `g . f`: first `self`, then `g`.
    pub fn then(&self, g: &Subst) -> CwfResult<Subst> {
        compose(g, self)
    }

    pub fn to_json(&self) -> String {
        let j = SubstJson {
            source_depth: self.source.depth(),
            target_depth: self.target.depth(),
            objects: self.table.objs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            morphisms: self.table.mors.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        };
        serde_json::to_string_pretty(&j).expect("substitution json")
    }
}

/// `g . f` for `f : A -> B`, `g : B -> C`.
pub fn compose(g: &Subst, f: &Subst) -> CwfResult<Subst> {
    if !f.target.same(&g.source) {
        return Err(CwfError::Invalid("substitutions are not composable".into()));
    }
    let table = Subst::complete(&f.source, |n| g.ty(f.table.obj(n).expect("complete table")), |n| {
        g.tm(f.table.mor(n).expect("complete table"))
    })?;
    Ok(Subst { source: f.source.clone(), target: g.target.clone(), table })
}

/// `G.sigma` with its projection `p : G -> G.sigma` and variable `v : 1 -> sigma`.
pub fn extend(g: &Context, sigma: &Obj) -> CwfResult<(Context, Subst, Mor)> {
    g.check_ty(sigma)?;
    let var = g.fresh_var();
    let pres = Presentation::extend(&g.pres, &var, sigma.clone())?;
    let ext = Context { pres: Arc::new(pres), facts: g.facts.clone() };
    let id = Subst::identity(g);
    let p = Subst { source: g.clone(), target: ext.clone(), table: id.table };
    Ok((ext, p, Mor::gen(&var)))
}

/// The projection `p : G -> G.sigma` of an existing extension.
pub fn projection(ext: &Context) -> CwfResult<Subst> {
    let parent = ext.parent().ok_or_else(|| CwfError::Invalid("not an extension".into()))?;
    let table = Subst::identity(&parent).table;
    Ok(Subst { source: parent, target: ext.clone(), table })
}

/// `<f, s> : G.sigma -> D` for `f : G -> D` and `s : 1 -> sigma[f]` in `D`.
pub fn mk_subst(f: &Subst, ext: &Context, s: &Mor) -> CwfResult<Subst> {
    let parent = ext.parent().ok_or_else(|| CwfError::Invalid("not an extension".into()))?;
    if !parent.same(&f.source) {
        return Err(CwfError::Invalid("extension is not over the source of the substitution".into()));
    }
    let (_, sigma) = ext.variable().expect("extension variable");
    f.target.check_tm(s, &f.ty(&sigma)?)?;
    let vn = ext.variable_name().expect("extension variable");
    let table = Subst::complete(
        ext,
        |n| Ok(f.table.obj(n).cloned().expect("complete table")),
        |n| Ok(if *n == vn { s.clone() } else { f.table.mor(n).cloned().expect("complete table") }),
    )?;
    Ok(Subst { source: ext.clone(), target: f.target.clone(), table })
}

/// `f+ = <p . f, v> : G.sigma -> D.sigma[f]`, building `D.sigma[f]`.
pub fn weaken(f: &Subst, ext: &Context) -> CwfResult<(Context, Subst)> {
    let (_, sigma) = ext.variable().ok_or_else(|| CwfError::Invalid("not an extension".into()))?;
    let (dext, p, v) = extend(&f.target, &f.ty(&sigma)?)?;
    let pf = compose(&p, f)?;
    Ok((dext, mk_subst(&pf, ext, &v)?))
}

/// `f+` into an existing extension `dext` of the target by `sigma[f]`.
pub fn weaken_into(f: &Subst, ext: &Context, dext: &Context) -> CwfResult<Subst> {
    let p = projection(dext)?;
    let pf = compose(&p, f)?;
    let (v, _) = dext.variable().expect("extension variable");
    mk_subst(&pf, ext, &v)
}

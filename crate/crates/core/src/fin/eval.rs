use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use super::FinStrictLcc;
use crate::functor::{apply_mor, apply_obj, Assignment};
use crate::presentation::{Presentation, TermError, TermResult};
use crate::term::{MarkRef, Mor, Name, Obj};

/// Cap on generator assignments enumerated per model.
pub const MAX_ASSIGNMENTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("equation #{0} fails under the assignment")]
    EquationFails(usize),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelAssignment {
    pub objs: HashMap<Name, usize>,
    pub mors: HashMap<Name, usize>,
}

impl Assignment<FinStrictLcc> for ModelAssignment {
    fn obj_gen(&self, _t: &FinStrictLcc, n: &Name) -> TermResult<usize> {
        self.objs.get(n).copied().ok_or_else(|| TermError::UnknownGenerator(n.clone()))
    }
    fn mor_gen(&self, _t: &FinStrictLcc, n: &Name) -> TermResult<usize> {
        self.mors.get(n).copied().ok_or_else(|| TermError::UnknownGenerator(n.clone()))
    }
}

/// Evaluation through a lift: lifted leaves are evaluated in the base.
struct ThroughLift<'a> {
    base: &'a Presentation,
    inner: &'a ModelAssignment,
}

impl Assignment<FinStrictLcc> for ThroughLift<'_> {
    fn obj_gen(&self, t: &FinStrictLcc, n: &Name) -> TermResult<usize> {
        self.inner.obj_gen(t, n)
    }
    fn mor_gen(&self, t: &FinStrictLcc, n: &Name) -> TermResult<usize> {
        self.inner.mor_gen(t, n)
    }
    fn lifted_obj(&self, t: &FinStrictLcc, x: &Obj) -> TermResult<usize> {
        apply_obj(self.base, t, self.inner, x)
    }
    fn lifted_mor(&self, t: &FinStrictLcc, f: &Mor) -> TermResult<usize> {
        apply_mor(self.base, t, self.inner, f)
    }
}

pub fn eval_obj(p: &Presentation, m: &FinStrictLcc, a: &ModelAssignment, o: &Obj) -> TermResult<usize> {
    match p.lift_base() {
        Some(base) => apply_obj(p, m, &ThroughLift { base, inner: a }, o),
        None => apply_obj(p, m, a, o),
    }
}

pub fn eval_mor(p: &Presentation, m: &FinStrictLcc, a: &ModelAssignment, t: &Mor) -> TermResult<usize> {
    match p.lift_base() {
        Some(base) => apply_mor(p, m, &ThroughLift { base, inner: a }, t),
        None => apply_mor(p, m, a, t),
    }
}

/// Checks that the assignment satisfies the equations and facts and sends
/// every marked diagram to a universal one.
pub fn check_admissible(
    p: &Presentation,
    m: &FinStrictLcc,
    a: &ModelAssignment,
    facts: &[(Mor, Mor)],
) -> Result<(), EvalError> {
    let root = p.lift_base().map(|b| &**b).unwrap_or(p);
    for (i, (l, r)) in root.all_equations().iter().chain(facts).enumerate() {
        if eval_mor(root, m, a, l)? != eval_mor(root, m, a, r)? {
            return Err(EvalError::EquationFails(i));
        }
    }
    for i in 0..root.declared_markings().len() {
        eval_mor(root, m, a, &Mor::mark_inv(MarkRef::Declared(i)))?;
    }
    Ok(())
}

/// Calls `f` on every admissible assignment of the (base) generators, up to `cap`
/// enumerated candidates. Returns the number of candidates visited.
pub fn for_each_assignment(
    p: &Presentation,
    m: &FinStrictLcc,
    facts: &[(Mor, Mor)],
    cap: usize,
    f: &mut dyn FnMut(&ModelAssignment) -> ControlFlow<()>,
) -> usize {
    let root = p.lift_base().map(|b| &**b).unwrap_or(p);
    let objs = root.all_obj_gens();
    let mors = root.all_mor_gens();
    let mut count = 0;
    let mut a = ModelAssignment::default();
    fn go(
        root: &Presentation,
        m: &FinStrictLcc,
        facts: &[(Mor, Mor)],
        objs: &[Name],
        mors: &[crate::presentation::Arrow],
        a: &mut ModelAssignment,
        count: &mut usize,
        cap: usize,
        f: &mut dyn FnMut(&ModelAssignment) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if *count >= cap {
            return ControlFlow::Break(());
        }
        if let Some((o, rest)) = objs.split_first() {
            for x in 0..m.cat.n_objects() {
                a.objs.insert(o.clone(), x);
                go(root, m, facts, rest, mors, a, count, cap, f)?;
            }
            a.objs.remove(o);
            return ControlFlow::Continue(());
        }
        if let Some((g, rest)) = mors.split_first() {
            let (Ok(d), Ok(c)) = (eval_obj(root, m, a, &g.dom), eval_obj(root, m, a, &g.cod)) else {
                return ControlFlow::Continue(());
            };
            for &h in m.cat.hom(d, c) {
                a.mors.insert(g.name.clone(), h);
                go(root, m, facts, objs, rest, a, count, cap, f)?;
            }
            a.mors.remove(&g.name);
            return ControlFlow::Continue(());
        }
        *count += 1;
        if check_admissible(root, m, a, facts).is_ok() {
            f(a)?;
        }
        ControlFlow::Continue(())
    }
    let _ = go(root, m, facts, &objs, &mors, &mut a, &mut count, cap, f);
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub model: String,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, String)>,
    pub left: String,
    pub right: String,
}

impl std::fmt::Display for Countermodel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "in {}: ", self.model)?;
        let parts: Vec<String> =
            self.objects.iter().chain(&self.arrows).map(|(k, v)| format!("{k} := {v}")).collect();
        write!(f, "{}; left = {}, right = {}", parts.join(", "), self.left, self.right)
    }
}

/// Either two objects or two parallel morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Objs(Obj, Obj),
    Mors(Mor, Mor),
}

/// First admissible assignment into one of `models` that separates the pair.
pub fn countermodel_search(
    p: &Presentation,
    facts: &[(Mor, Mor)],
    models: &[FinStrictLcc],
    q: &Query,
) -> Option<Countermodel> {
    for m in models {
        let mut found = None;
        for_each_assignment(p, m, facts, MAX_ASSIGNMENTS, &mut |a| {
            let (l, r, names): (TermResult<usize>, TermResult<usize>, bool) = match q {
                Query::Objs(x, y) => (eval_obj(p, m, a, x), eval_obj(p, m, a, y), true),
                Query::Mors(x, y) => (eval_mor(p, m, a, x), eval_mor(p, m, a, y), false),
            };
            if let (Ok(l), Ok(r)) = (l, r) {
                if l != r {
                    let show = |i: usize| if names { m.cat.objects[i].clone() } else { m.cat.arrows[i].name.clone() };
                    let mut objects: Vec<_> = a.objs.iter().map(|(k, v)| (k.to_string(), m.cat.objects[*v].clone())).collect();
                    let mut arrows: Vec<_> =
                        a.mors.iter().map(|(k, v)| (k.to_string(), m.cat.arrows[*v].name.clone())).collect();
                    objects.sort();
                    arrows.sort();
                    found = Some(Countermodel { model: m.name.clone(), objects, arrows, left: show(l), right: show(r) });
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

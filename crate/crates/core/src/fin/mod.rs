//! Finite marked categories, their chosen lcc structure and evaluation of terms.

mod dot;
mod eval;
mod fibrancy;
mod lcc;
mod models;

pub use dot::to_dot;
pub use eval::{
    check_admissible, countermodel_search, eval_mor, eval_obj, for_each_assignment, Countermodel, EvalError, ModelAssignment,
    Query, MAX_ASSIGNMENTS,
};
pub use fibrancy::{is_fibrant, universal_diagrams, FibrancyReport, Violation};
pub use lcc::{canonicalize, FinStrictLcc, NotLcc};
pub use models::{builtin_model, builtin_models, chain, diamond, semilattice, BUILTIN_NAMES};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A marked diagram in a finite category. Pi tuples list the pullback legs,
/// the evaluation map and then `g, f1, f2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FinMarking {
    Tm(usize),
    Pb { p1: usize, p2: usize, f1: usize, f2: usize },
    Pi { p1: usize, p2: usize, eps: usize, g: usize, f1: usize, f2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinArrow {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A finite category with explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    pub objects: Vec<String>,
    pub arrows: Vec<FinArrow>,
    pub ident: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
    homs: Vec<Vec<Vec<usize>>>,
    pub markings: Vec<FinMarking>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("missing composite {g} . {f}")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} . {f} has the wrong boundary")]
    BadComposite { g: String, f: String },
    #[error("composition is not associative at {h} . {g} . {f}")]
    NotAssociative { h: String, g: String, f: String },
    #[error("marking #{0} does not have the shape of its diagram")]
    BadMarking(usize),
    #[error("json: {0}")]
    Json(String),
}

impl FinCat {
    /// Builds from non-identity arrows and the table of their composites.
    /// Identities are added as `id_<object>` and take indices `0..objects.len()`;
    /// composite triples `(g, f, g . f)` index the full arrow list.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        composites: &[(usize, usize, usize)],
        markings: Vec<FinMarking>,
    ) -> Result<Self, FinError> {
        let n = objects.len();
        let mut all: Vec<FinArrow> = (0..n).map(|i| FinArrow { name: format!("id_{}", objects[i]), dom: i, cod: i }).collect();
        let ident: Vec<usize> = (0..n).collect();
        all.extend(arrows.into_iter().map(|(name, dom, cod)| FinArrow { name, dom, cod }));
        let m = all.len();
        let mut seen = std::collections::BTreeSet::new();
        for a in &all {
            if !seen.insert(a.name.clone()) {
                return Err(FinError::Duplicate(a.name.clone()));
            }
        }
        let mut comp = vec![vec![None; m]; m];
        for (g, ga) in all.iter().enumerate() {
            for (f, fa) in all.iter().enumerate() {
                if fa.cod != ga.dom {
                    continue;
                }
                if g == ident[ga.dom] {
                    comp[g][f] = Some(f);
                } else if f == ident[fa.dom] {
                    comp[g][f] = Some(g);
                }
            }
        }
        for &(g, f, h) in composites {
            let (gn, fnm) = (g, f);
            if all[fnm].cod != all[gn].dom || all[h].dom != all[fnm].dom || all[h].cod != all[gn].cod {
                return Err(FinError::BadComposite { g: all[gn].name.clone(), f: all[fnm].name.clone() });
            }
            comp[gn][fnm] = Some(h);
        }
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (i, a) in all.iter().enumerate() {
            homs[a.dom][a.cod].push(i);
        }
        let c = FinCat { objects, arrows: all, ident, comp, homs, markings };
        c.validate()?;
        Ok(c)
    }

    /// A preorder given by a reflexive-transitive relation; arrows are named `a<=b`.
    pub fn poset(objects: Vec<String>, le: impl Fn(usize, usize) -> bool, markings: Vec<FinMarking>) -> Self {
        let n = objects.len();
        let mut all: Vec<FinArrow> =
            (0..n).map(|i| FinArrow { name: format!("id_{}", objects[i]), dom: i, cod: i }).collect();
        let mut idx: Vec<Vec<Option<usize>>> = (0..n).map(|a| (0..n).map(|b| (a == b).then_some(a)).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) {
                    idx[a][b] = Some(all.len());
                    all.push(FinArrow { name: format!("{}<={}", objects[a], objects[b]), dom: a, cod: b });
                }
            }
        }
        let m = all.len();
        let mut comp = vec![vec![None; m]; m];
        for g in 0..m {
            for f in 0..m {
                if all[f].cod == all[g].dom {
                    comp[g][f] = Some(idx[all[f].dom][all[g].cod].expect("relation is transitive"));
                }
            }
        }
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (i, a) in all.iter().enumerate() {
            homs[a.dom][a.cod].push(i);
        }
        FinCat { objects, arrows: all, ident: (0..n).collect(), comp, homs, markings }
    }

    fn validate(&self) -> Result<(), FinError> {
        let m = self.arrows.len();
        for g in 0..m {
            for f in 0..m {
                if self.arrows[f].cod == self.arrows[g].dom && self.comp[g][f].is_none() {
                    return Err(FinError::MissingComposite { g: self.arrows[g].name.clone(), f: self.arrows[f].name.clone() });
                }
            }
        }
        for h in 0..m {
            for g in 0..m {
                let Some(hg) = self.comp[h][g] else { continue };
                for f in 0..m {
                    let Some(gf) = self.comp[g][f] else { continue };
                    if self.comp[hg][f] != self.comp[h][gf] {
                        return Err(FinError::NotAssociative {
                            h: self.arrows[h].name.clone(),
                            g: self.arrows[g].name.clone(),
                            f: self.arrows[f].name.clone(),
                        });
                    }
                }
            }
        }
        for (i, mk) in self.markings.iter().enumerate() {
            if !self.marking_shape_ok(mk) {
                return Err(FinError::BadMarking(i));
            }
        }
        Ok(())
    }

    fn marking_shape_ok(&self, mk: &FinMarking) -> bool {
        let m = self.arrows.len();
        let a = |i: usize| &self.arrows[i];
        match *mk {
            FinMarking::Tm(t) => t < self.objects.len(),
            FinMarking::Pb { p1, p2, f1, f2 } => {
                [p1, p2, f1, f2].iter().all(|&x| x < m)
                    && a(p1).dom == a(p2).dom
                    && a(p1).cod == a(f1).dom
                    && a(p2).cod == a(f2).dom
                    && a(f1).cod == a(f2).cod
            }
            FinMarking::Pi { p1, p2, eps, g, f1, f2 } => {
                self.marking_shape_ok(&FinMarking::Pb { p1, p2, f1, f2 })
                    && eps < m
                    && g < m
                    && a(eps).dom == a(p1).dom
                    && a(eps).cod == a(g).dom
                    && a(g).cod == a(f1).dom
            }
        }
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn dom(&self, f: usize) -> usize {
        self.arrows[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.arrows[f].cod
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    /// `g . f`, if composable.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    pub fn is_preorder(&self) -> bool {
        self.homs.iter().all(|row| row.iter().all(|h| h.len() <= 1))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.hom(self.cod(f), self.dom(f)).iter().any(|&g| {
            self.comp(g, f) == Some(self.ident[self.dom(f)]) && self.comp(f, g) == Some(self.ident[self.cod(f)])
        })
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn with_markings(&self, markings: Vec<FinMarking>) -> Self {
        FinCat { markings, ..self.clone() }
    }
}

/// JSON form of a finite category.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinCatJson {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    /// Preorder shorthand: pairs `[a, b]` meaning `a <= b`; closed reflexively and transitively.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub markings: Vec<MarkingJson>,
    /// Marks every universal diagram in addition to the listed ones.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mark_universal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkingJson {
    Tm(String),
    Pb([String; 4]),
    Pi([String; 6]),
}

impl FinCat {
    pub fn from_json(s: &str) -> Result<Self, FinError> {
        let j: FinCatJson = serde_json::from_str(s).map_err(|e| FinError::Json(e.to_string()))?;
        Self::from_json_value(&j)
    }

    pub fn from_json_value(j: &FinCatJson) -> Result<Self, FinError> {
        let obj = |n: &str| {
            j.objects.iter().position(|o| o == n).ok_or(FinError::Unknown { kind: "object", name: n.to_string() })
        };
        let base = if let Some(order) = &j.order {
            let n = j.objects.len();
            let mut le = vec![vec![false; n]; n];
            for (i, row) in le.iter_mut().enumerate() {
                row[i] = true;
            }
            for [a, b] in order {
                le[obj(a)?][obj(b)?] = true;
            }
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        if le[a][k] && le[k][b] {
                            le[a][b] = true;
                        }
                    }
                }
            }
            FinCat::poset(j.objects.clone(), |a, b| le[a][b], vec![])
        } else {
            let arrows = j
                .arrows
                .iter()
                .map(|a| Ok((a.name.clone(), obj(&a.dom)?, obj(&a.cod)?)))
                .collect::<Result<Vec<_>, FinError>>()?;
            let no = j.objects.len();
            let an = |n: &str| {
                j.arrows
                    .iter()
                    .position(|a| a.name == n)
                    .map(|i| i + no)
                    .or_else(|| j.objects.iter().position(|o| format!("id_{o}") == n))
                    .ok_or(FinError::Unknown { kind: "arrow", name: n.to_string() })
            };
            let comps = j
                .compose
                .iter()
                .map(|[g, f, h]| Ok((an(g)?, an(f)?, an(h)?)))
                .collect::<Result<Vec<_>, FinError>>()?;
            FinCat::new(j.objects.clone(), arrows, &comps, vec![])?
        };
        let ar = |n: &str| base.arrow_index(n).ok_or(FinError::Unknown { kind: "arrow", name: n.to_string() });
        let mut marks = Vec::new();
        for m in &j.markings {
            marks.push(match m {
                MarkingJson::Tm(t) => FinMarking::Tm(obj(t)?),
                MarkingJson::Pb([p1, p2, f1, f2]) => FinMarking::Pb { p1: ar(p1)?, p2: ar(p2)?, f1: ar(f1)?, f2: ar(f2)? },
                MarkingJson::Pi([p1, p2, eps, g, f1, f2]) => FinMarking::Pi {
                    p1: ar(p1)?,
                    p2: ar(p2)?,
                    eps: ar(eps)?,
                    g: ar(g)?,
                    f1: ar(f1)?,
                    f2: ar(f2)?,
                },
            });
        }
        if j.mark_universal {
            for d in universal_diagrams(&base) {
                if !marks.contains(&d) {
                    marks.push(d);
                }
            }
        }
        let c = base.with_markings(marks);
        for (i, mk) in c.markings.iter().enumerate() {
            if !c.marking_shape_ok(mk) {
                return Err(FinError::BadMarking(i));
            }
        }
        Ok(c)
    }

    pub fn to_json_value(&self) -> FinCatJson {
        let n = self.objects.len();
        let name = |i: usize| self.arrows[i].name.clone();
        let mut compose = Vec::new();
        for g in n..self.arrows.len() {
            for f in n..self.arrows.len() {
                if let Some(h) = self.comp(g, f) {
                    compose.push([name(g), name(f), name(h)]);
                }
            }
        }
        FinCatJson {
            objects: self.objects.clone(),
            arrows: self.arrows[n..]
                .iter()
                .map(|a| ArrowJson { name: a.name.clone(), dom: self.objects[a.dom].clone(), cod: self.objects[a.cod].clone() })
                .collect(),
            compose,
            order: None,
            markings: self
                .markings
                .iter()
                .map(|m| match *m {
                    FinMarking::Tm(t) => MarkingJson::Tm(self.objects[t].clone()),
                    FinMarking::Pb { p1, p2, f1, f2 } => MarkingJson::Pb([name(p1), name(p2), name(f1), name(f2)]),
                    FinMarking::Pi { p1, p2, eps, g, f1, f2 } => {
                        MarkingJson::Pi([name(p1), name(p2), name(eps), name(g), name(f1), name(f2)])
                    }
                })
                .collect(),
            mark_universal: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("fincat serializes")
    }
}

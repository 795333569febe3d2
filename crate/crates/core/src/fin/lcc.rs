use std::collections::HashMap;

use thiserror::Error;

use super::{FinCat, FinMarking};
use crate::functor::{MarkImage, StrictLcc};
use crate::presentation::{TermError, TermResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotLcc {
    #[error("no terminal object")]
    NoTerminal,
    #[error("cospan ({f1}, {f2}) has no pullback")]
    NoPullback { f1: String, f2: String },
    #[error("no dependent product of {g} along {f1}")]
    NoPi { f1: String, g: String },
}

/// A finite category with chosen terminal object, pullbacks and dependent products.
#[derive(Debug, Clone)]
pub struct FinStrictLcc {
    pub name: String,
    pub cat: FinCat,
    pub terminal: usize,
    /// `(f1, f2) -> (p1, p2)`
    pub pb: HashMap<(usize, usize), (usize, usize)>,
    /// `(f1, g) -> (f2, eps)` with `eps` on the chosen pullback of `(f1, f2)`.
    pub pi: HashMap<(usize, usize), (usize, usize)>,
}

/// Chooses canonical structure by least-index search.
pub fn canonicalize(c: &FinCat) -> Result<FinStrictLcc, NotLcc> {
    let terminal = (0..c.n_objects()).find(|&t| c.is_terminal(t)).ok_or(NotLcc::NoTerminal)?;
    let name = |i: usize| c.arrows[i].name.clone();
    let mut pb = HashMap::new();
    for (f1, f2) in c.cospans() {
        let sq = c.pullbacks_of(f1, f2).into_iter().next().ok_or(NotLcc::NoPullback { f1: name(f1), f2: name(f2) })?;
        pb.insert((f1, f2), sq);
    }
    let mut pi = HashMap::new();
    for (f1, g) in c.pi_inputs() {
        let (cc, b) = (c.cod(f1), c.dom(g));
        let mut found = None;
        'search: for d in 0..c.n_objects() {
            for &f2 in c.hom(d, cc) {
                let (p1, p2) = pb[&(f1, f2)];
                for &eps in c.hom(c.dom(p1), b) {
                    if c.is_pi(p1, p2, eps, g, f1, f2) {
                        found = Some((f2, eps));
                        break 'search;
                    }
                }
            }
        }
        pi.insert((f1, g), found.ok_or(NotLcc::NoPi { f1: name(f1), g: name(g) })?);
    }
    Ok(FinStrictLcc { name: String::new(), cat: c.clone(), terminal, pb, pi })
}

impl FinStrictLcc {
    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    fn reject(&self, what: String) -> TermError {
        TermError::TargetRejects(format!("{}: {what}", self.name))
    }

    fn arrow_name(&self, f: usize) -> &str {
        &self.cat.arrows[f].name
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let c = &self.cat;
        c.hom(c.cod(f), c.dom(f))
            .iter()
            .copied()
            .find(|&g| c.comp(g, f) == Some(c.ident[c.dom(f)]) && c.comp(f, g) == Some(c.ident[c.cod(f)]))
    }

    /// The chosen diagrams, as markings.
    pub fn chosen_diagrams(&self) -> Vec<FinMarking> {
        let mut out = vec![FinMarking::Tm(self.terminal)];
        let mut pbs: Vec<_> = self.pb.iter().collect();
        pbs.sort();
        out.extend(pbs.into_iter().map(|(&(f1, f2), &(p1, p2))| FinMarking::Pb { p1, p2, f1, f2 }));
        let mut pis: Vec<_> = self.pi.iter().collect();
        pis.sort();
        out.extend(pis.into_iter().map(|(&(f1, g), &(f2, eps))| {
            let (p1, p2) = self.pb[&(f1, f2)];
            FinMarking::Pi { p1, p2, eps, g, f1, f2 }
        }));
        out
    }
}

impl StrictLcc for FinStrictLcc {
    type Ob = usize;
    type Hom = usize;

    fn dom(&self, h: &usize) -> TermResult<usize> {
        Ok(self.cat.dom(*h))
    }
    fn cod(&self, h: &usize) -> TermResult<usize> {
        Ok(self.cat.cod(*h))
    }
    fn one(&self) -> usize {
        self.terminal
    }
    fn pb(&self, f1: &usize, f2: &usize) -> TermResult<usize> {
        let (p1, _) = self.p_pair(*f1, *f2)?;
        Ok(self.cat.dom(p1))
    }
    fn pi(&self, f1: &usize, g: &usize) -> TermResult<usize> {
        let (f2, _) = self.pi_pair(*f1, *g)?;
        Ok(self.cat.dom(f2))
    }
    fn id(&self, a: &usize) -> usize {
        self.cat.ident[*a]
    }
    fn comp(&self, g: &usize, f: &usize) -> TermResult<usize> {
        self.cat
            .comp(*g, *f)
            .ok_or_else(|| self.reject(format!("{} . {} not composable", self.arrow_name(*g), self.arrow_name(*f))))
    }
    fn bang(&self, a: &usize) -> usize {
        self.cat.hom(*a, self.terminal)[0]
    }
    fn p1(&self, f1: &usize, f2: &usize) -> TermResult<usize> {
        Ok(self.p_pair(*f1, *f2)?.0)
    }
    fn p2(&self, f1: &usize, f2: &usize) -> TermResult<usize> {
        Ok(self.p_pair(*f1, *f2)?.1)
    }
    fn pb_pair(&self, f1: &usize, f2: &usize, q1: &usize, q2: &usize) -> TermResult<usize> {
        let (p1, p2) = self.p_pair(*f1, *f2)?;
        match self.cat.factorizations(p1, p2, *q1, *q2)[..] {
            [u] => Ok(u),
            _ => Err(self.reject(format!("no unique pairing of {} and {}", self.arrow_name(*q1), self.arrow_name(*q2)))),
        }
    }
    fn pi_map(&self, f1: &usize, g: &usize) -> TermResult<usize> {
        Ok(self.pi_pair(*f1, *g)?.0)
    }
    fn eval(&self, f1: &usize, g: &usize) -> TermResult<usize> {
        Ok(self.pi_pair(*f1, *g)?.1)
    }
    fn curry(&self, f1: &usize, g: &usize, f2b: &usize, e: &usize) -> TermResult<usize> {
        let (f2, eps) = self.pi_pair(*f1, *g)?;
        let (p1, p2) = self.p_pair(*f1, f2)?;
        let (q1, q2) = self.p_pair(*f1, *f2b)?;
        let c = &self.cat;
        let sols: Vec<usize> = c
            .hom(c.dom(*f2b), c.dom(f2))
            .iter()
            .copied()
            .filter(|&u| {
                c.comp(f2, u) == Some(*f2b)
                    && c.comp(u, q2).is_some_and(|uq2| match c.factorizations(p1, p2, q1, uq2)[..] {
                        [k] => c.comp(eps, k) == Some(*e),
                        _ => false,
                    })
            })
            .collect();
        match sols[..] {
            [u] => Ok(u),
            _ => Err(self.reject(format!("no unique transpose of {}", self.arrow_name(*e)))),
        }
    }
    fn mark_inv(&self, d: &MarkImage<usize, usize>) -> TermResult<usize> {
        let cmp = match d {
            MarkImage::Tm { vertex } => self.bang(vertex),
            MarkImage::Pb { p1, p2, f1, f2, .. } => self.pb_pair(f1, f2, p1, p2)?,
            MarkImage::Pi { f1, g, f2, eps, .. } => self.curry(f1, g, f2, eps)?,
        };
        self.inverse(cmp).ok_or_else(|| self.reject("marked diagram is not universal".into()))
    }
}

impl FinStrictLcc {
    fn p_pair(&self, f1: usize, f2: usize) -> TermResult<(usize, usize)> {
        self.pb.get(&(f1, f2)).copied().ok_or_else(|| self.reject("not a cospan".into()))
    }
    fn pi_pair(&self, f1: usize, g: usize) -> TermResult<(usize, usize)> {
        self.pi.get(&(f1, g)).copied().ok_or_else(|| self.reject("not a composable pair".into()))
    }
}

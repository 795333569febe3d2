use std::fmt;

use super::{FinCat, FinMarking};

impl FinCat {
    pub fn is_terminal(&self, t: usize) -> bool {
        (0..self.n_objects()).all(|x| self.hom(x, t).len() == 1)
    }

    fn commutes(&self, p1: usize, p2: usize, f1: usize, f2: usize) -> bool {
        self.comp(f1, p1).is_some() && self.comp(f1, p1) == self.comp(f2, p2)
    }

    /// Arrows `u : w -> v` with `p1 . u = q1` and `p2 . u = q2`.
    pub fn factorizations(&self, p1: usize, p2: usize, q1: usize, q2: usize) -> Vec<usize> {
        let (w, v) = (self.dom(q1), self.dom(p1));
        self.hom(w, v)
            .iter()
            .copied()
            .filter(|&u| self.comp(p1, u) == Some(q1) && self.comp(p2, u) == Some(q2))
            .collect()
    }

    pub fn is_pullback(&self, p1: usize, p2: usize, f1: usize, f2: usize) -> bool {
        if !self.commutes(p1, p2, f1, f2) {
            return false;
        }
        let (a, b) = (self.dom(f1), self.dom(f2));
        (0..self.n_objects()).all(|w| {
            self.hom(w, a).iter().all(|&q1| {
                self.hom(w, b).iter().all(|&q2| {
                    self.comp(f1, q1) != self.comp(f2, q2) || self.factorizations(p1, p2, q1, q2).len() == 1
                })
            })
        })
    }

    /// All pullback squares `(p1, p2)` over the cospan `(f1, f2)`.
    pub fn pullbacks_of(&self, f1: usize, f2: usize) -> Vec<(usize, usize)> {
        let (a, b) = (self.dom(f1), self.dom(f2));
        let mut out = Vec::new();
        for v in 0..self.n_objects() {
            for &p1 in self.hom(v, a) {
                for &p2 in self.hom(v, b) {
                    if self.is_pullback(p1, p2, f1, f2) {
                        out.push((p1, p2));
                    }
                }
            }
        }
        out
    }

    /// Whether `(p1, p2, eps)` exhibits `f2` as the dependent product of `g` along `f1`.
    pub fn is_pi(&self, p1: usize, p2: usize, eps: usize, g: usize, f1: usize, f2: usize) -> bool {
        if !self.is_pullback(p1, p2, f1, f2) || self.comp(g, eps) != Some(p1) {
            return false;
        }
        let (c, b) = (self.cod(f1), self.dom(g));
        for d2 in 0..self.n_objects() {
            for &f2b in self.hom(d2, c) {
                for (q1, q2) in self.pullbacks_of(f1, f2b) {
                    let e_dom = self.dom(q1);
                    for &e in self.hom(e_dom, b) {
                        if self.comp(g, e) != Some(q1) {
                            continue;
                        }
                        let sols = self
                            .hom(d2, self.dom(f2))
                            .iter()
                            .filter(|&&u| {
                                if self.comp(f2, u) != Some(f2b) {
                                    return false;
                                }
                                let Some(uq2) = self.comp(u, q2) else { return false };
                                match self.factorizations(p1, p2, q1, uq2)[..] {
                                    [k] => self.comp(eps, k) == Some(e),
                                    _ => false,
                                }
                            })
                            .count();
                        if sols != 1 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_universal(&self, m: &FinMarking) -> bool {
        match *m {
            FinMarking::Tm(t) => self.is_terminal(t),
            FinMarking::Pb { p1, p2, f1, f2 } => self.is_pullback(p1, p2, f1, f2),
            FinMarking::Pi { p1, p2, eps, g, f1, f2 } => self.is_pi(p1, p2, eps, g, f1, f2),
        }
    }

    pub(crate) fn cospans(&self) -> Vec<(usize, usize)> {
        let m = self.arrows.len();
        let mut out = Vec::new();
        for f1 in 0..m {
            for f2 in 0..m {
                if self.cod(f1) == self.cod(f2) {
                    out.push((f1, f2));
                }
            }
        }
        out
    }

    /// Composable pairs `(f1, g)` with `cod g = dom f1`.
    pub(crate) fn pi_inputs(&self) -> Vec<(usize, usize)> {
        let m = self.arrows.len();
        let mut out = Vec::new();
        for f1 in 0..m {
            for g in 0..m {
                if self.cod(g) == self.dom(f1) {
                    out.push((f1, g));
                }
            }
        }
        out
    }

    /// All Pi diagrams over `(f1, g)`, in index order.
    pub(crate) fn pis_of(&self, f1: usize, g: usize) -> Vec<FinMarking> {
        let c = self.cod(f1);
        let b = self.dom(g);
        let mut out = Vec::new();
        for d in 0..self.n_objects() {
            for &f2 in self.hom(d, c) {
                for (p1, p2) in self.pullbacks_of(f1, f2) {
                    for &eps in self.hom(self.dom(p1), b) {
                        if self.is_pi(p1, p2, eps, g, f1, f2) {
                            out.push(FinMarking::Pi { p1, p2, eps, g, f1, f2 });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Every universal diagram of every shape.
pub fn universal_diagrams(c: &FinCat) -> Vec<FinMarking> {
    let mut out: Vec<FinMarking> = (0..c.n_objects()).filter(|&t| c.is_terminal(t)).map(FinMarking::Tm).collect();
    for (f1, f2) in c.cospans() {
        out.extend(c.pullbacks_of(f1, f2).into_iter().map(|(p1, p2)| FinMarking::Pb { p1, p2, f1, f2 }));
    }
    for (f1, g) in c.pi_inputs() {
        out.extend(c.pis_of(f1, g));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoTerminal,
    NoPullback { f1: String, f2: String },
    NoPi { f1: String, g: String },
    Unmarked { diagram: String },
    NotCommuting { index: usize },
    NotUniversal { index: usize, diagram: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoTerminal => write!(f, "no terminal object"),
            Violation::NoPullback { f1, f2 } => write!(f, "cospan ({f1}, {f2}) has no pullback"),
            Violation::NoPi { f1, g } => write!(f, "no dependent product of {g} along {f1}"),
            Violation::Unmarked { diagram } => write!(f, "{diagram} not marked"),
            Violation::NotCommuting { index } => write!(f, "marking #{index}: pullback square does not commute"),
            Violation::NotUniversal { index, diagram } => write!(f, "marking #{index}: {diagram} is not universal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrancyReport {
    pub fibrant: bool,
    pub violations: Vec<Violation>,
}

impl FinCat {
    pub fn describe(&self, m: &FinMarking) -> String {
        let n = |i: usize| self.arrows[i].name.as_str();
        match *m {
            FinMarking::Tm(t) => format!("terminal object {}", self.objects[t]),
            FinMarking::Pb { p1, p2, f1, f2 } => format!("pullback square ({}, {} | {}, {})", n(p1), n(p2), n(f1), n(f2)),
            FinMarking::Pi { p1, p2, eps, g, f1, f2 } => {
                format!("dependent product ({}, {}, {} | {}, {}, {})", n(p1), n(p2), n(eps), n(g), n(f1), n(f2))
            }
        }
    }
}

/// Fibrant iff the category is lcc and a diagram is marked exactly when it is universal.
pub fn is_fibrant(c: &FinCat) -> FibrancyReport {
    let mut v = Vec::new();
    let universal = universal_diagrams(c);
    if !universal.iter().any(|d| matches!(d, FinMarking::Tm(_))) {
        v.push(Violation::NoTerminal);
    }
    let name = |i: usize| c.arrows[i].name.clone();
    for (f1, f2) in c.cospans() {
        if !universal.iter().any(|d| matches!(*d, FinMarking::Pb { f1: a, f2: b, .. } if a == f1 && b == f2)) {
            v.push(Violation::NoPullback { f1: name(f1), f2: name(f2) });
        }
    }
    for (f1, g) in c.pi_inputs() {
        if !universal.iter().any(|d| matches!(*d, FinMarking::Pi { f1: a, g: b, .. } if a == f1 && b == g)) {
            v.push(Violation::NoPi { f1: name(f1), g: name(g) });
        }
    }
    for d in &universal {
        if !c.markings.contains(d) {
            v.push(Violation::Unmarked { diagram: c.describe(d) });
        }
    }
    for (index, m) in c.markings.iter().enumerate() {
        if universal.contains(m) {
            continue;
        }
        let sq = match *m {
            FinMarking::Pb { p1, p2, f1, f2 } | FinMarking::Pi { p1, p2, f1, f2, .. } => Some((p1, p2, f1, f2)),
            FinMarking::Tm(_) => None,
        };
        match sq {
            Some((p1, p2, f1, f2)) if !c.commutes(p1, p2, f1, f2) => v.push(Violation::NotCommuting { index }),
            _ => v.push(Violation::NotUniversal { index, diagram: c.describe(m) }),
        }
    }
    FibrancyReport { fibrant: v.is_empty(), violations: v }
}

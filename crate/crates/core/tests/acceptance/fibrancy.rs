use std::collections::BTreeSet;

use lcc_core::fin::{is_fibrant, FinCat, FinMarking};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::common::{rng, R};
use crate::Outcome;

// Brute force from the definitions, scanning the arrow list and the composition
// table only.

fn between(c: &FinCat, a: usize, b: usize) -> Vec<usize> {
    (0..c.arrows.len()).filter(|&f| c.arrows[f].dom == a && c.arrows[f].cod == b).collect()
}

fn terminal(c: &FinCat, t: usize) -> bool {
    (0..c.n_objects()).all(|x| between(c, x, t).len() == 1)
}

/// Hom(w, P) -> {(q1, q2) | f1 q1 = f2 q2} is a bijection for every w.
fn pullback(c: &FinCat, p1: usize, p2: usize, f1: usize, f2: usize) -> bool {
    let ar = &c.arrows;
    if ar[p1].dom != ar[p2].dom || ar[p1].cod != ar[f1].dom || ar[p2].cod != ar[f2].dom || ar[f1].cod != ar[f2].cod {
        return false;
    }
    if c.comp(f1, p1) != c.comp(f2, p2) {
        return false;
    }
    let (pv, a, b) = (ar[p1].dom, ar[f1].dom, ar[f2].dom);
    (0..c.n_objects()).all(|w| {
        let image: Vec<(usize, usize)> =
            between(c, w, pv).into_iter().map(|u| (c.comp(p1, u).unwrap(), c.comp(p2, u).unwrap())).collect();
        let distinct: BTreeSet<_> = image.iter().copied().collect();
        let mut cones = BTreeSet::new();
        for q1 in between(c, w, a) {
            for q2 in between(c, w, b) {
                if c.comp(f1, q1) == c.comp(f2, q2) {
                    cones.insert((q1, q2));
                }
            }
        }
        distinct.len() == image.len() && distinct == cones
    })
}

fn pullbacks(c: &FinCat, f1: usize, f2: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p1 in 0..c.arrows.len() {
        for p2 in 0..c.arrows.len() {
            if pullback(c, p1, p2, f1, f2) {
                out.push((p1, p2));
            }
        }
    }
    out
}

/// `u |-> eps . <q1, u . q2>` is a bijection from maps over `f2b` into `f2` onto
/// maps `e` with `g . e = q1`, for every `f2b` and every pullback `(q1, q2)`.
fn pi(c: &FinCat, p1: usize, p2: usize, eps: usize, g: usize, f1: usize, f2: usize) -> bool {
    let ar = &c.arrows;
    if ar[eps].dom != ar[p1].dom || ar[eps].cod != ar[g].dom || ar[g].cod != ar[f1].dom {
        return false;
    }
    if !pullback(c, p1, p2, f1, f2) || c.comp(g, eps) != Some(p1) {
        return false;
    }
    let (cc, b, d) = (ar[f1].cod, ar[g].dom, ar[f2].dom);
    for d2 in 0..c.n_objects() {
        for f2b in between(c, d2, cc) {
            let us: Vec<usize> = between(c, d2, d).into_iter().filter(|&u| c.comp(f2, u) == Some(f2b)).collect();
            for (q1, q2) in pullbacks(c, f1, f2b) {
                let q = ar[q1].dom;
                let targets: BTreeSet<usize> = between(c, q, b).into_iter().filter(|&e| c.comp(g, e) == Some(q1)).collect();
                let mut image = BTreeSet::new();
                for &u in &us {
                    let uq2 = c.comp(u, q2).unwrap();
                    let k: Vec<usize> = between(c, q, ar[p1].dom)
                        .into_iter()
                        .filter(|&k| c.comp(p1, k) == Some(q1) && c.comp(p2, k) == Some(uq2))
                        .collect();
                    let [k] = k[..] else { return false };
                    image.insert(c.comp(eps, k).unwrap());
                }
                if image.len() != us.len() || image != targets {
                    return false;
                }
            }
        }
    }
    true
}

fn universal(c: &FinCat) -> BTreeSet<FinMarking> {
    let m = c.arrows.len();
    let mut out: BTreeSet<FinMarking> = (0..c.n_objects()).filter(|&t| terminal(c, t)).map(FinMarking::Tm).collect();
    for f1 in 0..m {
        for f2 in 0..m {
            for (p1, p2) in pullbacks(c, f1, f2) {
                out.insert(FinMarking::Pb { p1, p2, f1, f2 });
            }
        }
    }
    for f1 in 0..m {
        for g in 0..m {
            for f2 in 0..m {
                for (p1, p2) in pullbacks(c, f1, f2) {
                    for eps in 0..m {
                        if pi(c, p1, p2, eps, g, f1, f2) {
                            out.insert(FinMarking::Pi { p1, p2, eps, g, f1, f2 });
                        }
                    }
                }
            }
        }
    }
    out
}

fn oracle(c: &FinCat) -> bool {
    let m = c.arrows.len();
    let u = universal(c);
    let has_pb = |f1, f2| u.iter().any(|d| matches!(*d, FinMarking::Pb { f1: a, f2: b, .. } if a == f1 && b == f2));
    let has_pi = |f1, g| u.iter().any(|d| matches!(*d, FinMarking::Pi { f1: a, g: b, .. } if a == f1 && b == g));
    let a = &c.arrows;
    u.iter().any(|d| matches!(d, FinMarking::Tm(_)))
        && (0..m).all(|f1| (0..m).all(|f2| a[f1].cod != a[f2].cod || has_pb(f1, f2)))
        && (0..m).all(|f1| (0..m).all(|g| a[g].cod != a[f1].dom || has_pi(f1, g)))
        && c.markings.iter().copied().collect::<BTreeSet<_>>() == u
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A random preorder: a random relation closed reflexively and transitively.
fn preorder(r: &mut R, n: usize, density: f64) -> FinCat {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = i == j || (i < j && r.gen_bool(density));
        }
    }
    // Sometimes add a top, so a terminal exists more often.
    if r.gen_bool(0.7) {
        for row in le.iter_mut() {
            row[n - 1] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    FinCat::poset(names(n), |a, b| le[a][b], vec![])
}

/// One object with a non-trivial automorphism.
fn z2() -> FinCat {
    FinCat::new(vec!["x".into()], vec![("s".into(), 0, 0)], &[(1, 1, 0)], vec![FinMarking::Tm(0)]).unwrap()
}

/// `1` and an object with two points and their constant endomaps.
fn two_points() -> FinCat {
    // 0 id_1, 1 id_X, 2 a, 3 b, 4 !, 5 ca = a.!, 6 cb = b.!
    let arrows = vec![
        ("a".into(), 0, 1),
        ("b".into(), 0, 1),
        ("!".into(), 1, 0),
        ("ca".into(), 1, 1),
        ("cb".into(), 1, 1),
    ];
    let comps = [
        (4, 2, 0),
        (4, 3, 0),
        (2, 4, 5),
        (3, 4, 6),
        (4, 5, 4),
        (4, 6, 4),
        (5, 2, 2),
        (5, 3, 2),
        (6, 2, 3),
        (6, 3, 3),
        (5, 5, 5),
        (5, 6, 5),
        (6, 5, 6),
        (6, 6, 6),
    ];
    FinCat::new(vec!["1".into(), "X".into()], arrows, &comps, vec![FinMarking::Tm(0)]).unwrap()
}

fn corpus(r: &mut R) -> Vec<(String, FinCat)> {
    let mut out: Vec<(String, FinCat)> = Vec::new();
    for n in 1..=3 {
        let c = FinCat::poset(names(n), |_, _| true, vec![]);
        let full: Vec<_> = universal(&c).into_iter().collect();
        out.push((format!("chaotic{n}"), c.with_markings(full)));
    }
    out.push(("z2".into(), z2()));
    out.push(("two-points".into(), two_points()));
    while out.len() < 64 {
        let n = r.gen_range(1..=5);
        let density = r.gen_range(0.2..0.8);
        let c = preorder(r, n, density);
        let mut full: Vec<FinMarking> = universal(&c).into_iter().collect();
        full.shuffle(r);
        let (tag, marks) = match r.gen_range(0..5) {
            0 | 1 => ("full", full),
            2 if !full.is_empty() => {
                full.remove(r.gen_range(0..full.len()));
                ("one dropped", full)
            }
            3 => {
                // A square that commutes but is not a pullback, if there is one.
                let m = c.arrows.len();
                let mut bogus = None;
                'find: for f1 in 0..m {
                    for f2 in 0..m {
                        for p1 in 0..m {
                            for p2 in 0..m {
                                let d = FinMarking::Pb { p1, p2, f1, f2 };
                                let a = &c.arrows;
                                if a[f1].cod == a[f2].cod && a[p1].cod == a[f1].dom && a[p2].cod == a[f2].dom
                                    && a[p1].dom == a[p2].dom && !full.contains(&d) && r.gen_bool(0.3)
                                {
                                    bogus = Some(d);
                                    break 'find;
                                }
                            }
                        }
                    }
                }
                full.extend(bogus);
                ("bogus added", full)
            }
            _ => ("terminal only", full.into_iter().filter(|d| matches!(d, FinMarking::Tm(_))).collect()),
        };
        out.push((format!("preorder{n} {tag}"), c.with_markings(marks)));
    }
    out
}

pub fn check() -> Outcome {
    let mut r = rng(0x5eed_0006);
    let cases = corpus(&mut r);
    let (mut pos, mut neg, mut disagree) = (0, 0, Vec::new());
    for (name, c) in &cases {
        let expected = oracle(c);
        let got = is_fibrant(c).fibrant;
        if expected {
            pos += 1;
        } else {
            neg += 1;
        }
        if expected != got {
            disagree.push(format!("{name}: oracle {expected}, checker {got}"));
        }
    }
    Outcome {
        pass: disagree.is_empty() && pos > 0 && neg > 0 && cases.len() >= 50,
        detail: format!("{} categories ({pos} fibrant, {neg} not), {} disagreements {:?}", cases.len(), disagree.len(), disagree.first()),
    }
}

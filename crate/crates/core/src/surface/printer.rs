use std::fmt::Write;

use super::*;
use crate::presentation::Marking;

/// Canonical text of a file; `parse(print(f)) == f`.
pub fn print(f: &SurfaceFile) -> String {
    let mut s = String::new();
    for (i, it) in f.items.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        item(&mut s, it);
    }
    s
}

fn item(s: &mut String, it: &Item) {
    match it {
        Item::UseModel(m) => {
            let _ = writeln!(s, "use-model {};", m.name);
        }
        Item::Sketch(sk) => {
            match &sk.name {
                Some(n) => s.push_str(&format!("sketch {} {{\n", n.name)),
                None => s.push_str("sketch {\n"),
            }
            for e in &sk.entries {
                let line = match e {
                    SketchEntry::Obj(n) => format!("obj {}", n.name),
                    SketchEntry::Arrow { name, dom, cod } => format!("arrow {} : {dom} -> {cod}", name.name),
                    SketchEntry::Eq { lhs, rhs, .. } => format!("eq {lhs} = {rhs}"),
                    SketchEntry::Mark { mark, .. } => format!("mark {}", marking(mark)),
                };
                let _ = writeln!(s, "  {line};");
            }
            s.push_str("}\n");
        }
        Item::Context(c) => {
            s.push_str(&format!("context {}", c.name.name));
            if let Some(o) = &c.over {
                s.push_str(&format!(" over {}", o.name));
            }
            s.push_str(" {\n");
            for (x, t) in &c.telescope {
                let _ = writeln!(s, "  {} : {};", x.name, ty(t));
            }
            s.push_str("}\n");
        }
        Item::Judgment(b) => {
            match &b.context {
                Some(c) => s.push_str(&format!("judgment in {} {{\n", c.name)),
                None => s.push_str("judgment {\n"),
            }
            for j in &b.judgments {
                let line = match j {
                    Judgment::Check { term: t, ty: a, .. } => format!("check {} : {}", term(t), ty(a)),
                    Judgment::Eq { lhs, rhs, ty: a, .. } => {
                        let mut l = format!("eq {} {}", atom(lhs), atom(rhs));
                        if let Some(a) = a {
                            l.push_str(&format!(" : {}", ty(a)));
                        }
                        l
                    }
                    Judgment::Norm { term: t, .. } => format!("norm {}", term(t)),
                };
                let _ = writeln!(s, "  {line};");
            }
            s.push_str("}\n");
        }
    }
}

fn marking(m: &Marking) -> String {
    match m {
        Marking::Tm { obj } => format!("tm({obj})"),
        Marking::Pb { p1, p2, f1, f2 } => format!("pb({p1}, {p2} | {f1}, {f2})"),
        Marking::Pi { f1, g, f2, eps } => format!("pi({f1}, {g}, {f2} | {eps})"),
    }
}

/// Text of a type.
pub fn print_ty(t: &Ty) -> String {
    ty(t)
}

/// Text of a term.
pub fn print_term(t: &Term) -> String {
    term(t)
}

pub fn ty(t: &Ty) -> String {
    match t {
        Ty::Unit(_) => "Unit".into(),
        Ty::Named(n) => n.name.clone(),
        Ty::Prod(a, b) => {
            let left = if matches!(**a, Ty::Sigma(..) | Ty::Pi(..)) { format!("({})", ty(a)) } else { ty(a) };
            let right = if matches!(**b, Ty::Sigma(..) | Ty::Pi(..) | Ty::Prod(..)) { format!("({})", ty(b)) } else { ty(b) };
            format!("{left} * {right}")
        }
        Ty::Eq(l, r) => format!("Eq({}, {})", term(l), term(r)),
        Ty::Sigma(x, a, b) => format!("Sigma({} : {}) {}", x.name, ty(a), ty(b)),
        Ty::Pi(x, a, b) => format!("Pi({} : {}) {}", x.name, ty(a), ty(b)),
    }
}

pub fn term(t: &Term) -> String {
    match t {
        Term::Lam(x, b) => format!("\\{}. {}", x.name, term(b)),
        Term::Apply(f, a) => {
            let head = match **f {
                Term::Apply(..) => term(f),
                _ => atom(f),
            };
            format!("{head} {}", atom(a))
        }
        _ => atom(t),
    }
}

pub fn atom(t: &Term) -> String {
    match t {
        Term::Var(x) => x.name.clone(),
        Term::Builtin(b, _) => b.keyword().into(),
        Term::Ann(t, a) => format!("({} : {})", term(t), ty(a)),
        Term::Apply(..) | Term::Lam(..) => format!("({})", term(t)),
    }
}

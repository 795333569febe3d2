use super::*;

fn run(src: &str) -> Elaborated {
    elaborate_source(src, &ElabOptions::default())
}

fn passes(src: &str) {
    let e = run(src);
    for d in &e.diagnostics {
        eprintln!("{d}");
    }
    assert_eq!(e.status(), Status::Pass, "{src}");
}

#[test]
fn parse_shapes() {
    assert_eq!(parse("").unwrap(), SurfaceFile::default());
    let f = parse("context G { x : Unit; }").unwrap();
    let Item::Context(c) = &f.items[0] else { panic!() };
    assert_eq!(c.telescope.len(), 1);
    let f = parse("judgment { check (fst (pair x x)) : A }").unwrap();
    let Item::Judgment(b) = &f.items[0] else { panic!() };
    let Judgment::Check { term, .. } = &b.judgments[0] else { panic!() };
    let Term::Apply(h, a) = term else { panic!("{term:?}") };
    assert!(matches!(**h, Term::Builtin(Builtin::Fst, _)));
    assert!(matches!(**a, Term::Apply(..)));
}

#[test]
fn parse_errors_have_spans() {
    let d = parse("sketch {\n  obj ;\n}").unwrap_err();
    assert_eq!(d.span.line, 2);
    assert!(parse("context G { x : }").is_err());
    assert!(parse("judgment { check : A }").is_err());
}

const SAMPLE: &str = "
-- a sketch with a point
sketch S {
  obj A; obj B;
  arrow f : A -> B;
  arrow a : 1 -> A;
  arrow g : pb(f, f) -> A;
  eq (f . g) = (f . p1(f, f));
  mark tm(1);
}
use-model chain2
context G over S { x : A; p : Eq(f x, f a); y : Sigma(z : A) Eq(f z, f x) }
judgment in G {
  check (\\u. u : Pi(u : A) A) : Pi(u : A) A
  eq (app (\\u. pair u u : Pi(u : A) A * A) a) (pair a a) : A * A
  norm fst (pair x a)
}
";

#[test]
fn print_parse_round_trip() {
    let f = parse(SAMPLE).unwrap();
    let s = print(&f);
    assert_eq!(parse(&s).unwrap(), f, "{s}");
    assert_eq!(print(&parse(&s).unwrap()), s);
}

#[test]
fn unit_checks() {
    passes("judgment { check tt : Unit }");
    passes("context G { x : Unit; } judgment { eq x tt : Unit }");
}

#[test]
fn beta_passes() {
    passes(
        "sketch { obj A; arrow a : 1 -> A; }
         context G { }
         judgment {
           check (\\x. x) : Pi(x:A) A;
           eq (app ((\\x. x) : Pi(x:A) A) a) a : A;
           eq ((\\x. x) : Pi(x:A) A) (\\y. app ((\\x. x) : Pi(x:A) A) y) : Pi(x:A) A;
         }",
    );
}

#[test]
fn reflection_from_context() {
    let src = "sketch { obj A; arrow s : 1 -> A; arrow t : 1 -> A; }
               context G { p : Eq(s, t); }
               judgment { eq s t : A; check refl : Eq(s, t) }";
    passes(src);
    let e = run("sketch { obj A; arrow s : 1 -> A; arrow t : 1 -> A; } judgment { eq s t : A }");
    assert_eq!(e.status(), Status::Unknown);
}

#[test]
fn posets_never_separate_parallel_terms() {
    let e = run("sketch { obj A; arrow s : 1 -> A; arrow t : 1 -> A; } use-model chain2 judgment { eq s t : A }");
    assert_eq!(e.status(), Status::Unknown);
    assert!(e.outcomes[0].countermodel.is_none());
    assert_eq!(e.models, vec!["chain2".to_string()]);
}

#[test]
fn products_and_sigma() {
    passes(
        "sketch { obj A; obj B; arrow a : 1 -> A; arrow b : 1 -> B; arrow f : A -> B; }
         context G { x : A; }
         judgment {
           eq (fst (pair a b)) a : A;
           eq (snd (pair a b)) b;
           check pair x (pair a b) : A * (A * B);
           check pair x refl : Sigma(y : A) Eq(f y, f x);
           eq (fst (pair x refl : Sigma(y : A) Eq(f y, f x))) x : A;
           check snd (pair x refl : Sigma(y : A) Eq(f y, f x)) : Eq(f x, f x);
         }",
    );
}

#[test]
fn dependent_application() {
    passes(
        "sketch { obj A; obj B; arrow a : 1 -> A; arrow f : A -> B; }
         context G { h : Pi(y : A) Eq(f y, f y); }
         judgment {
           check app h a : Eq(f a, f a);
           check h a : Eq(f a, f a);
           eq (h a) refl : Eq(f a, f a);
         }",
    );
}

#[test]
fn errors_are_reported() {
    for src in [
        "judgment { check tt : A }",
        "sketch { obj A; arrow a : 1 -> A; } judgment { check a : Unit }",
        "sketch { obj A; arrow a : 1 -> A; arrow b : 1 -> A; } judgment { check refl : Eq(a, b) }",
        "judgment { check (\\x. x) : Unit }",
        "judgment in H { check tt : Unit }",
        "use-model nowhere",
    ] {
        let e = run(src);
        assert_eq!(e.status(), Status::Fail, "{src}");
        assert!(!e.diagnostics.is_empty());
    }
}

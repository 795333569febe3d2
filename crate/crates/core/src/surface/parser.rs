use super::lexer::{lex, Tok, Token};
use super::*;
use crate::presentation::Marking;

/// Words that cannot name a variable, object or arrow.
pub(crate) const RESERVED: &[&str] = &[
    "sketch", "context", "judgment", "use-model", "over", "in", "obj", "arrow", "eq", "mark", "check", "norm",
    "Unit", "Eq", "Sigma", "Pi", "tt", "refl", "fst", "snd", "pair", "app", "id", "p1", "p2", "pimap", "ev",
    "cur", "pb", "pi", "tm",
];

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

pub fn parse(src: &str) -> PResult<SurfaceFile> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(SurfaceFile { items })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }
    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }
    fn span(&self) -> Span {
        self.toks[self.pos].span
    }
    fn prev_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].span.end
    }
    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }
    fn err<T>(&self, what: &str) -> PResult<T> {
        Err(Diagnostic::error(self.span(), format!("expected {what}, found {}", self.peek())))
    }
    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            self.err(&t.to_string())
        }
    }
    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }
    fn eat_kw(&mut self, kw: &str) -> bool {
        let b = self.is_kw(kw);
        if b {
            self.bump();
        }
        b
    }
    fn eat_semi(&mut self) {
        if *self.peek() == Tok::Semi {
            self.bump();
        }
    }
    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let span = self.bump().span;
                Ok(Ident { name: s, span })
            }
            _ => self.err("a name"),
        }
    }
    fn close(&self, start: Span) -> Span {
        Span { end: self.prev_end(), ..start }
    }

    fn item(&mut self) -> PResult<Item> {
        let start = self.span();
        if self.eat_kw("sketch") {
            let name = if matches!(self.peek(), Tok::Ident(_)) { Some(self.ident()?) } else { None };
            self.expect(Tok::LBrace)?;
            let mut entries = Vec::new();
            while *self.peek() != Tok::RBrace {
                entries.push(self.sketch_entry()?);
                self.eat_semi();
            }
            self.bump();
            Ok(Item::Sketch(SketchDecl { name, entries, span: self.close(start) }))
        } else if self.eat_kw("context") {
            let name = self.ident()?;
            let over = if self.eat_kw("over") { Some(self.ident()?) } else { None };
            self.expect(Tok::LBrace)?;
            let mut telescope = Vec::new();
            while *self.peek() != Tok::RBrace {
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                telescope.push((x, self.ty()?));
                self.eat_semi();
            }
            self.bump();
            Ok(Item::Context(ContextDecl { name, over, telescope, span: self.close(start) }))
        } else if self.eat_kw("judgment") {
            let context = if self.eat_kw("in") { Some(self.ident()?) } else { None };
            self.expect(Tok::LBrace)?;
            let mut judgments = Vec::new();
            while *self.peek() != Tok::RBrace {
                judgments.push(self.judgment()?);
                self.eat_semi();
            }
            self.bump();
            Ok(Item::Judgment(JudgmentBlock { context, judgments, span: self.close(start) }))
        } else if self.eat_kw("use-model") {
            let m = self.ident()?;
            self.eat_semi();
            Ok(Item::UseModel(m))
        } else {
            self.err("`sketch`, `context`, `judgment` or `use-model`")
        }
    }

    fn sketch_entry(&mut self) -> PResult<SketchEntry> {
        let start = self.span();
        if self.eat_kw("obj") {
            Ok(SketchEntry::Obj(self.ident()?))
        } else if self.eat_kw("arrow") {
            let name = self.ident()?;
            self.expect(Tok::Colon)?;
            let dom = self.obj()?;
            self.expect(Tok::Arrow)?;
            let cod = self.obj()?;
            Ok(SketchEntry::Arrow { name, dom, cod })
        } else if self.eat_kw("eq") {
            let lhs = self.mor()?;
            self.expect(Tok::Equals)?;
            let rhs = self.mor()?;
            Ok(SketchEntry::Eq { lhs, rhs, span: self.close(start) })
        } else if self.eat_kw("mark") {
            let mark = if self.eat_kw("tm") {
                self.expect(Tok::LParen)?;
                let obj = self.obj()?;
                self.expect(Tok::RParen)?;
                Marking::Tm { obj }
            } else if self.eat_kw("pb") {
                let (p1, p2, f1, f2) = self.four(Tok::Comma, Tok::Bar, Tok::Comma, Tok::RParen)?;
                Marking::Pb { p1, p2, f1, f2 }
            } else if self.eat_kw("pi") {
                let (f1, g, f2, eps) = self.four(Tok::Comma, Tok::Comma, Tok::Bar, Tok::RParen)?;
                Marking::Pi { f1, g, f2, eps }
            } else {
                return self.err("`tm`, `pb` or `pi`");
            };
            Ok(SketchEntry::Mark { mark, span: self.close(start) })
        } else {
            self.err("`obj`, `arrow`, `eq` or `mark`")
        }
    }

    /// `( m s1 m s2 m s3 m close`, the opener being `(` unless `close` is `>`.
    fn four(&mut self, s1: Tok, s2: Tok, s3: Tok, close: Tok) -> PResult<(Mor, Mor, Mor, Mor)> {
        self.expect(if close == Tok::Gt { Tok::Lt } else { Tok::LParen })?;
        let a = self.mor()?;
        self.expect(s1)?;
        let b = self.mor()?;
        self.expect(s2)?;
        let c = self.mor()?;
        self.expect(s3)?;
        let d = self.mor()?;
        self.expect(close)?;
        Ok((a, b, c, d))
    }

    fn two(&mut self) -> PResult<(Mor, Mor)> {
        self.expect(Tok::LParen)?;
        let a = self.mor()?;
        self.expect(Tok::Comma)?;
        let b = self.mor()?;
        self.expect(Tok::RParen)?;
        Ok((a, b))
    }

    fn obj(&mut self) -> PResult<Obj> {
        match self.peek().clone() {
            Tok::One => {
                self.bump();
                Ok(Obj::one())
            }
            Tok::LParen => {
                self.bump();
                let o = self.obj()?;
                self.expect(Tok::RParen)?;
                Ok(o)
            }
            Tok::Ident(s) if s == "pb" || s == "pi" => {
                self.bump();
                let (a, b) = self.two()?;
                Ok(if s == "pb" { Obj::pb(a, b) } else { Obj::pi(a, b) })
            }
            _ => Ok(Obj::gen(&self.ident()?.name)),
        }
    }

    fn mor(&mut self) -> PResult<Mor> {
        let mut parts = vec![self.matom()?];
        while *self.peek() == Tok::Dot {
            self.bump();
            parts.push(self.matom()?);
        }
        Ok(Mor::comp_all(parts).expect("nonempty"))
    }

    fn matom(&mut self) -> PResult<Mor> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let m = self.mor()?;
                self.expect(Tok::RParen)?;
                Ok(m)
            }
            Tok::Bang => {
                self.bump();
                Ok(Mor::bang(self.obj()?))
            }
            Tok::Lt => {
                let (q1, q2, f1, f2) = self.four(Tok::Comma, Tok::Bar, Tok::Comma, Tok::Gt)?;
                Ok(Mor::pb_pair(f1, f2, q1, q2))
            }
            Tok::Ident(s) => {
                let ctor: Option<fn(Mor, Mor) -> Mor> = match s.as_str() {
                    "p1" => Some(Mor::p1),
                    "p2" => Some(Mor::p2),
                    "pimap" => Some(Mor::pi_map),
                    "ev" => Some(Mor::eval),
                    _ => None,
                };
                if let Some(c) = ctor {
                    self.bump();
                    let (a, b) = self.two()?;
                    return Ok(c(a, b));
                }
                if s == "id" {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let o = self.obj()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Mor::id(o));
                }
                if s == "cur" {
                    self.bump();
                    let (f1, g, f2, e) = self.four(Tok::Comma, Tok::Bar, Tok::Comma, Tok::RParen)?;
                    return Ok(Mor::curry(f1, g, f2, e));
                }
                Ok(Mor::gen(&self.ident()?.name))
            }
            _ => self.err("a morphism"),
        }
    }

    fn judgment(&mut self) -> PResult<Judgment> {
        let start = self.span();
        if self.eat_kw("check") {
            let term = self.tm()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            Ok(Judgment::Check { term, ty, span: self.close(start) })
        } else if self.eat_kw("eq") {
            let lhs = self.atom()?;
            let rhs = self.atom()?;
            let ty = if *self.peek() == Tok::Colon {
                self.bump();
                Some(self.ty()?)
            } else {
                None
            };
            Ok(Judgment::Eq { lhs, rhs, ty, span: self.close(start) })
        } else if self.eat_kw("norm") {
            let term = self.tm()?;
            Ok(Judgment::Norm { term, span: self.close(start) })
        } else {
            self.err("`check`, `eq` or `norm`")
        }
    }

    fn ty(&mut self) -> PResult<Ty> {
        let mut t = self.tatom()?;
        while *self.peek() == Tok::Times {
            self.bump();
            t = Ty::Prod(Box::new(t), Box::new(self.tatom()?));
        }
        Ok(t)
    }

    fn tatom(&mut self) -> PResult<Ty> {
        let start = self.span();
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.ty()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        if self.eat_kw("Unit") {
            return Ok(Ty::Unit(start));
        }
        if self.eat_kw("Eq") {
            self.expect(Tok::LParen)?;
            let s = self.tm()?;
            self.expect(Tok::Comma)?;
            let t = self.tm()?;
            self.expect(Tok::RParen)?;
            return Ok(Ty::Eq(Box::new(s), Box::new(t)));
        }
        for (kw, sigma) in [("Sigma", true), ("Pi", false)] {
            if self.eat_kw(kw) {
                self.expect(Tok::LParen)?;
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let a = Box::new(self.ty()?);
                self.expect(Tok::RParen)?;
                let b = Box::new(self.ty()?);
                return Ok(if sigma { Ty::Sigma(x, a, b) } else { Ty::Pi(x, a, b) });
            }
        }
        Ok(Ty::Named(self.ident()?))
    }

    fn tm(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::Backslash {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Dot)?;
            return Ok(Term::Lam(x, Box::new(self.tm()?)));
        }
        let mut t = self.atom()?;
        while self.atom_starts() {
            t = Term::Apply(Box::new(t), Box::new(self.atom()?));
        }
        Ok(t)
    }

    fn atom_starts(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => Builtin::from_keyword(s).is_some() || !RESERVED.contains(&s.as_str()),
            _ => false,
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.tm()?;
                let t = if *self.peek() == Tok::Colon {
                    self.bump();
                    Term::Ann(Box::new(t), Box::new(self.ty()?))
                } else {
                    t
                };
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if Builtin::from_keyword(&s).is_some() => {
                let span = self.bump().span;
                Ok(Term::Builtin(Builtin::from_keyword(&s).expect("builtin"), span))
            }
            _ if self.peek_at(0) != &Tok::Eof => Ok(Term::Var(self.ident()?)),
            _ => self.err("a term"),
        }
    }
}

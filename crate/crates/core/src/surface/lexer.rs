use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    One,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Lt,
    Gt,
    Bar,
    Dot,
    Bang,
    Backslash,
    Arrow,
    Comma,
    Colon,
    Semi,
    Equals,
    Times,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::One => "`1`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Bar => "`|`",
            Tok::Dot => "`.`",
            Tok::Bang => "`!`",
            Tok::Backslash => "`\\`",
            Tok::Arrow => "`->`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Semi => "`;`",
            Tok::Equals => "`=`",
            Tok::Times => "`*`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

// `-` is allowed inside identifiers so that `use-model` is one word.
fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokens of a source text, ending in `Eof`.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let at = |k: usize| chars.get(k).map(|c| c.1);
    let off = |k: usize| chars.get(k).map_or(src.len(), |c| c.0);
    while i < chars.len() {
        let c = chars[i].1;
        let start = Span { start: off(i), end: off(i), line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && at(i + 1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if ident_start(c) {
            let mut j = i + 1;
            while let Some(d) = at(j) {
                let hyphen = d == '-' && at(j + 1).is_some_and(ident_start) && at(j + 1) != Some('-');
                if ident_char(d) || (hyphen && chars[i..j].iter().all(|x| x.1.is_ascii_lowercase())) {
                    j += 1;
                } else {
                    break;
                }
            }
            (Tok::Ident(chars[i..j].iter().map(|x| x.1).collect()), j - i)
        } else {
            match c {
                '1' if !at(i + 1).is_some_and(|d| d.is_alphanumeric()) => (Tok::One, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '<' => (Tok::Lt, 1),
                '>' => (Tok::Gt, 1),
                '|' => (Tok::Bar, 1),
                '.' => (Tok::Dot, 1),
                '!' => (Tok::Bang, 1),
                '\\' | 'λ' => (Tok::Backslash, 1),
                '-' if at(i + 1) == Some('>') => (Tok::Arrow, 2),
                '→' => (Tok::Arrow, 1),
                ',' => (Tok::Comma, 1),
                ':' => (Tok::Colon, 1),
                ';' => (Tok::Semi, 1),
                '=' => (Tok::Equals, 1),
                '*' | '×' => (Tok::Times, 1),
                _ => return Err(Diagnostic::error(start, format!("unexpected character {c:?}"))),
            }
        };
        i += len;
        col += len;
        out.push(Token { tok, span: Span { end: off(i), ..start } });
    }
    let end = Span { start: src.len(), end: src.len(), line, col };
    out.push(Token { tok: Tok::Eof, span: end });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn comments_and_keywords() {
        assert_eq!(toks("-- nothing\n"), vec![Tok::Eof]);
        assert_eq!(
            toks("use-model chain2 -- trailing"),
            vec![Tok::Ident("use-model".into()), Tok::Ident("chain2".into()), Tok::Eof]
        );
        assert_eq!(toks("f : A -> 1"), vec![
            Tok::Ident("f".into()),
            Tok::Colon,
            Tok::Ident("A".into()),
            Tok::Arrow,
            Tok::One,
            Tok::Eof
        ]);
    }

    #[test]
    fn positions() {
        let t = lex("a\n  b").unwrap();
        assert_eq!((t[1].span.line, t[1].span.col), (2, 3));
        assert!(lex("a # b").is_err());
    }
}

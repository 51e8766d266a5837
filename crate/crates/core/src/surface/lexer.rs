use std::fmt;

use crate::surface::ast::Span;
use crate::surface::error::SurfaceError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Eq,
    Define,
    Arrow,
    Iff,
    SortArrow,
    MetaImp,
    Amp,
    AmpAmp,
    Bar,
    Tilde,
    Lt,
    Gt,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Eq => "=",
            Tok::Define => ":=",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::SortArrow => "=>",
            Tok::MetaImp => "==>",
            Tok::Amp => "&",
            Tok::AmpAmp => "&&",
            Tok::Bar => "|",
            Tok::Tilde => "~",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

/// Words that can never be used as names.
pub const RESERVED: &[&str] = &[
    "sorts", "consts", "def", "axiom", "goal", "forall", "exists", "top", "bot", "boxA", "diaA",
    "boxP", "diaP", "boxD", "Oa", "Oi", "O", "valid", "validD", "validAt", "validCtx",
];

pub fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>, SurfaceError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let sym = [
            ("==>", Tok::MetaImp),
            ("<->", Tok::Iff),
            (":=", Tok::Define),
            ("->", Tok::Arrow),
            ("=>", Tok::SortArrow),
            ("&&", Tok::AmpAmp),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBrack),
            ("]", Tok::RBrack),
            (",", Tok::Comma),
            (":", Tok::Colon),
            (".", Tok::Dot),
            ("=", Tok::Eq),
            ("&", Tok::Amp),
            ("|", Tok::Bar),
            ("~", Tok::Tilde),
            ("<", Tok::Lt),
            (">", Tok::Gt),
        ]
        .into_iter()
        .find(|(s, _)| rest.starts_with(s));
        if let Some((s, tok)) = sym {
            advance(&mut i, &mut line, &mut col, s.len());
            out.push((tok, span));
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            advance(&mut i, &mut line, &mut col, 1);
            loop {
                if i >= chars.len() {
                    return Err(SurfaceError::Parse {
                        span,
                        expected: vec!["closing `\"`".into()],
                        found: "end of input".into(),
                    });
                }
                let d = chars[i];
                if d == '"' {
                    advance(&mut i, &mut line, &mut col, 1);
                    break;
                }
                if d == '\\' && i + 1 < chars.len() {
                    s.push(chars[i + 1]);
                    advance(&mut i, &mut line, &mut col, 2);
                    continue;
                }
                s.push(d);
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Str(s), span));
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let n = digits.parse().map_err(|_| SurfaceError::Parse {
                span,
                expected: vec!["a number below 2^32".into()],
                found: digits.clone(),
            })?;
            let len = j - i;
            advance(&mut i, &mut line, &mut col, len);
            out.push((Tok::Int(n), span));
            continue;
        }
        if ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() {
                if ident_char(chars[j]) {
                    j += 1;
                } else if chars[j] == '-' && j + 1 < chars.len() && chars[j + 1].is_ascii_alphanumeric() {
                    // `pgc-bounded` is one name; `a->b` is not
                    j += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            out.push((Tok::Ident(word), span));
            continue;
        }
        return Err(SurfaceError::Parse {
            span,
            expected: vec!["a token".into()],
            found: format!("`{c}`"),
        });
    }
    out.push((Tok::Eof, Span::new(line, col)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn operators_and_names() {
        assert_eq!(
            toks("a->b <-> c ==> d => e"),
            vec![
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Iff,
                Tok::Ident("c".into()),
                Tok::MetaImp,
                Tok::Ident("d".into()),
                Tok::SortArrow,
                Tok::Ident("e".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("pgc-bounded")[0], Tok::Ident("pgc-bounded".into()));
    }

    #[test]
    fn comments_strings_positions() {
        let t = tokenize("# note\n  goal \"x\\\"y\" 12").unwrap();
        assert_eq!(t[0].0, Tok::Ident("goal".into()));
        assert_eq!((t[0].1.line, t[0].1.col), (2, 3));
        assert_eq!(t[1].0, Tok::Str("x\"y".into()));
        assert_eq!(t[2].0, Tok::Int(12));
    }

    #[test]
    fn rejects_stray_character() {
        assert!(tokenize("a $ b").is_err());
    }
}

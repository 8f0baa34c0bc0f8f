//! Line-oriented presentation text format.
//!
//! ```text
//! group D8
//! gens a, b
//! rels a^4, b^2, (a*b)^2
//! ```
//!
//! Statements are separated by newlines or `;`; `#` starts a comment.
//! `rels` may be repeated and appends. Word expressions:
//!
//! ```text
//! atom     := id | "1" | "(" wordexpr ")" | "[" wordexpr "," wordexpr "]"
//! term     := atom ( "^" int | "^" atom )?
//! wordexpr := term ( "*" term )*
//! ```
//!
//! `u^k` is repetition (negative `k` inverts), `u^v` with a word `v` is
//! conjugation `v⁻¹uv`, and `[u,v]` is `u⁻¹v⁻¹uv`. `1` is the empty word.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::word::{commutator, conjugate, Presentation, PresentationError, Word};

const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("relators given before any `gens` statement")]
    MissingGens,
    #[error("`gens` declared twice")]
    DuplicateGens,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Star,
    Caret,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Sep,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            })
        };
        if c == '\n' {
            chars.next();
            push(&mut out, Tok::Sep);
            line += 1;
            column = 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                column += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            push(&mut out, Tok::Ident(s));
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&c) = chars.peek() {
                if let Some(d) = c.to_digit(10) {
                    v = v.saturating_mul(10).saturating_add(d as u64);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            push(&mut out, Tok::Int(v));
            continue;
        }
        let tok = match c {
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Sep,
            other => {
                return Err(ParseError {
                    line,
                    column,
                    kind: ParseErrorKind::Syntax(alloc::format!("unexpected character `{other}`")),
                })
            }
        };
        chars.next();
        column += 1;
        push(&mut out, tok);
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    gens: Option<Vec<String>>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        self.error_here(ParseErrorKind::Syntax(msg.to_string()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&alloc::format!("expected {what}")))
        }
    }

    fn at_statement_end(&self) -> bool {
        matches!(self.peek(), Tok::Sep | Tok::Eof)
    }

    fn wordexpr(&mut self) -> Result<Word, ParseError> {
        let mut w = self.term()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let t = self.term()?;
            w = w.mul(&t);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                match self.bump().tok {
                    Tok::Int(k) => self.power(&base, k, true),
                    _ => {
                        self.pos -= 1;
                        Err(self.syntax("expected integer after `^-`"))
                    }
                }
            }
            Tok::Int(k) => {
                self.bump();
                self.power(&base, k, false)
            }
            _ => {
                let v = self.atom()?;
                Ok(conjugate(&base, &v))
            }
        }
    }

    fn power(&self, base: &Word, k: u64, negative: bool) -> Result<Word, ParseError> {
        if k > MAX_EXPONENT {
            return Err(self.syntax("exponent too large"));
        }
        let k = k as i64;
        Ok(base.pow(if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let gens = self
                    .gens
                    .as_ref()
                    .ok_or_else(|| self.error_here(ParseErrorKind::MissingGens))?;
                match gens.iter().position(|g| *g == name) {
                    Some(i) => {
                        self.bump();
                        Ok(Word::generator(i))
                    }
                    None => Err(self.error_here(ParseErrorKind::UndeclaredGenerator(name))),
                }
            }
            Tok::Int(1) => {
                self.bump();
                Ok(Word::empty())
            }
            Tok::LParen => {
                self.bump();
                let w = self.wordexpr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(w)
            }
            Tok::LBracket => {
                self.bump();
                let u = self.wordexpr()?;
                self.expect(Tok::Comma, "`,` inside commutator")?;
                let v = self.wordexpr()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(commutator(&u, &v))
            }
            _ => Err(self.syntax("expected generator, `1`, `(` or `[`")),
        }
    }
}

/// Parses the presentation text format.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        gens: None,
    };
    let mut name: Option<String> = None;
    let mut relators: Vec<Word> = Vec::new();
    let mut gens_pos = (1, 1);
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Sep => {
                p.bump();
            }
            Tok::Ident(kw) if kw == "group" => {
                p.bump();
                match p.bump().tok {
                    Tok::Ident(n) => name = Some(n),
                    _ => {
                        p.pos -= 1;
                        return Err(p.syntax("expected group name"));
                    }
                }
                if !p.at_statement_end() {
                    return Err(p.syntax("expected end of statement"));
                }
            }
            Tok::Ident(kw) if kw == "gens" => {
                if p.gens.is_some() {
                    return Err(p.error_here(ParseErrorKind::DuplicateGens));
                }
                let t = p.bump();
                gens_pos = (t.line, t.column);
                let mut names = Vec::new();
                if !p.at_statement_end() {
                    loop {
                        match p.bump().tok {
                            Tok::Ident(n) => {
                                if names.contains(&n) {
                                    p.pos -= 1;
                                    return Err(p.error_here(ParseErrorKind::Presentation(
                                        PresentationError::DuplicateGenerator(n),
                                    )));
                                }
                                names.push(n)
                            }
                            _ => {
                                p.pos -= 1;
                                return Err(p.syntax("expected generator name"));
                            }
                        }
                        if *p.peek() == Tok::Comma {
                            p.bump();
                        } else {
                            break;
                        }
                    }
                }
                if names.is_empty() {
                    return Err(ParseError {
                        line: gens_pos.0,
                        column: gens_pos.1,
                        kind: ParseErrorKind::EmptyGenerators,
                    });
                }
                if !p.at_statement_end() {
                    return Err(p.syntax("expected `,` or end of statement"));
                }
                p.gens = Some(names);
            }
            Tok::Ident(kw) if kw == "rels" => {
                if p.gens.is_none() {
                    return Err(p.error_here(ParseErrorKind::MissingGens));
                }
                p.bump();
                if !p.at_statement_end() {
                    loop {
                        relators.push(p.wordexpr()?);
                        if *p.peek() == Tok::Comma {
                            p.bump();
                        } else {
                            break;
                        }
                    }
                }
                if !p.at_statement_end() {
                    return Err(p.syntax("expected `,` `*` or end of statement"));
                }
            }
            _ => return Err(p.syntax("expected `group`, `gens` or `rels`")),
        }
    }
    let names = p.gens.ok_or(ParseError {
        line: gens_pos.0,
        column: gens_pos.1,
        kind: ParseErrorKind::EmptyGenerators,
    })?;
    let pres = Presentation::new(names, relators).map_err(|e| ParseError {
        line: gens_pos.0,
        column: gens_pos.1,
        kind: e.into(),
    })?;
    Ok(match name {
        Some(n) => pres.with_name(n),
        None => pres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;
    use alloc::format;

    #[test]
    fn single_line_forms() {
        let p = parse_presentation("gens a; rels a^2").unwrap();
        assert_eq!(p.ngens(), 1);
        assert_eq!(p.relators(), &[Word::generator(0).pow(2)]);

        let k = parse_presentation("gens a,b; rels a^2, b^2, [a,b]").unwrap();
        assert_eq!(k.ngens(), 2);
        assert_eq!(k.relators().len(), 3);
        assert_eq!(
            k.relators()[2],
            commutator(&Word::generator(0), &Word::generator(1))
        );
    }

    #[test]
    fn undeclared_generator() {
        let e = parse_presentation("gens a; rels b^2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredGenerator("b".into()));
        assert_eq!((e.line, e.column), (1, 14));
    }

    #[test]
    fn empty_generators() {
        let e = parse_presentation("group X\ngens\nrels").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyGenerators);
        assert!(parse_presentation("group X").is_err());
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_presentation("gens a, b\nrels a^2, (a*b").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.line, 2);
    }

    #[test]
    fn conjugation_and_inverse_exponents() {
        let p = parse_presentation("gens a, b\nrels a^b, a^-2, (a*b)^-1, 1").unwrap();
        let a = Word::generator(0);
        let b = Word::generator(1);
        assert_eq!(p.relators()[0], conjugate(&a, &b));
        assert_eq!(p.relators()[1], a.pow(-2));
        assert_eq!(
            p.relators()[2],
            Word::from_letters([Letter::new(1, true), Letter::new(0, true)])
        );
        assert!(p.relators()[3].is_empty());
    }

    #[test]
    fn comments_and_repeated_rels() {
        let text =
            "# dihedral\ngroup D8\ngens a, b # two generators\nrels a^4\nrels b^2, (a*b)^2\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.name.as_deref(), Some("D8"));
        assert_eq!(p.relators().len(), 3);
        let printed = format!("{p}");
        assert_eq!(parse_presentation(&printed).unwrap(), p);
    }
}

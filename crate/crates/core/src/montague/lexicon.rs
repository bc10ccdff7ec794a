//! Lexicon files and the concrete lambda syntax.
//!
//! ```text
//! # comment
//! name : type
//! name : type = term
//! ```
//!
//! Types are `e`, `t`, `A -> B` (right associative) and parenthesized types.
//! Terms are `\x:type. body`, application by juxtaposition, parentheses,
//! bound variables and earlier lexicon words. A word declared without a
//! definition is a constant; a defined word stands for its definition.
//! `λ`, `∃`, `∀`, `&`, `⊃`, `∨`, `¬`, `ε` and `τ` are accepted for `\`,
//! `exists`, `forall`, `and`, `implies`, `or`, `not`, `eps` and `tau`.

use std::collections::BTreeMap;

use super::{LambdaTerm, MontagueError, SemType};

/// Logical constants and the words something, everything, some, every.
pub const BUILTIN_LEXICON: &str = include_str!("../../data/builtins.lex");

/// Nouns, a name and a verb for the examples and demonstrations.
pub const DEMO_LEXICON: &str = include_str!("../../data/demo.lex");

/// Word to meaning. Read-only once loaded.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, LambdaTerm>,
}

impl Lexicon {
    /// Just the compiled-in logical vocabulary.
    pub fn builtin() -> Lexicon {
        let mut lex = Lexicon::default();
        lex.load(BUILTIN_LEXICON).expect("built-in lexicon is well formed");
        lex
    }

    /// Built-ins plus the demonstration words.
    pub fn standard() -> Lexicon {
        let mut lex = Lexicon::builtin();
        lex.load(DEMO_LEXICON).expect("demo lexicon is well formed");
        lex
    }

    pub fn get(&self, word: &str) -> Option<&LambdaTerm> {
        self.entries.get(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Adds the entries of a lexicon file. Words may not be redefined.
    pub fn load(&mut self, text: &str) -> Result<(), MontagueError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| MontagueError::Lexicon { line: i + 1, message };
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `name : type` or `name : type = term`".into()))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(is_ident_char) {
                return Err(err(format!("bad word `{name}`")));
            }
            if self.entries.contains_key(name) {
                return Err(err(format!("`{name}` is already defined")));
            }
            let (ty_src, def_src) = match rest.split_once('=') {
                Some((ty, def)) => (ty, Some(def)),
                None => (rest, None),
            };
            let ty = parse_type(ty_src).map_err(|e| err(e.to_string()))?;
            let meaning = match def_src {
                None => LambdaTerm::constant(name, ty),
                Some(src) => {
                    let term = self.parse_term(src).map_err(|e| err(e.to_string()))?;
                    let found = term.typecheck().map_err(|e| err(e.to_string()))?;
                    if found != ty {
                        return Err(err(format!("`{name}` is declared {ty} but its definition has type {found}")));
                    }
                    term
                }
            };
            self.entries.insert(name.to_string(), meaning);
        }
        Ok(())
    }

    /// Parses a term, resolving free words through the lexicon.
    pub fn parse_term(&self, src: &str) -> Result<LambdaTerm, MontagueError> {
        let mut p = TermParser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
            scope: Vec::new(),
            lexicon: self,
        };
        let t = p.term()?;
        if p.pos < p.toks.len() {
            return Err(p.error("unexpected input after term"));
        }
        Ok(t)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Colon,
    Dot,
    LParen,
    RParen,
    Arrow,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, MontagueError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        chars.next();
        let tok = match c {
            c if c.is_whitespace() => continue,
            '\\' | 'λ' => Tok::Lambda,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '→' => Tok::Arrow,
            '-' if chars.peek().map(|&(_, n)| n) == Some('>') => {
                chars.next();
                Tok::Arrow
            }
            '∃' => Tok::Ident("exists".into()),
            '∀' => Tok::Ident("forall".into()),
            '&' | '∧' => Tok::Ident("and".into()),
            '⊃' => Tok::Ident("implies".into()),
            '∨' | '|' => Tok::Ident("or".into()),
            '¬' | '~' => Tok::Ident("not".into()),
            'ε' => Tok::Ident("eps".into()),
            'τ' => Tok::Ident("tau".into()),
            c if is_ident_char(c) => {
                let mut name = c.to_string();
                while let Some(&(_, n)) = chars.peek() {
                    if !is_ident_char(n) {
                        break;
                    }
                    name.push(n);
                    chars.next();
                }
                Tok::Ident(name)
            }
            other => {
                return Err(MontagueError::Parse {
                    offset: at,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((at, tok));
    }
    Ok(out)
}

/// Parses `e`, `t`, `A -> B` and parenthesized types.
pub fn parse_type(src: &str) -> Result<SemType, MontagueError> {
    let toks = lex(src)?;
    let mut pos = 0;
    let ty = type_expr(&toks, &mut pos, src.len())?;
    if pos < toks.len() {
        return Err(MontagueError::Parse {
            offset: toks[pos].0,
            message: "unexpected input after type".into(),
        });
    }
    Ok(ty)
}

fn type_expr(toks: &[(usize, Tok)], pos: &mut usize, end: usize) -> Result<SemType, MontagueError> {
    let offset = toks.get(*pos).map_or(end, |t| t.0);
    let from = match toks.get(*pos).map(|t| &t.1) {
        Some(Tok::Ident(n)) if n == "e" => SemType::E,
        Some(Tok::Ident(n)) if n == "t" => SemType::T,
        Some(Tok::LParen) => {
            *pos += 1;
            let inner = type_expr(toks, pos, end)?;
            if toks.get(*pos).map(|t| &t.1) != Some(&Tok::RParen) {
                return Err(MontagueError::Parse {
                    offset: toks.get(*pos).map_or(end, |t| t.0),
                    message: "expected `)` in type".into(),
                });
            }
            inner
        }
        _ => {
            return Err(MontagueError::Parse {
                offset,
                message: "expected a type (e, t or parenthesized)".into(),
            })
        }
    };
    *pos += 1;
    if toks.get(*pos).map(|t| &t.1) == Some(&Tok::Arrow) {
        *pos += 1;
        let to = type_expr(toks, pos, end)?;
        return Ok(SemType::arrow(from, to));
    }
    Ok(from)
}

struct TermParser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    scope: Vec<(String, SemType)>,
    lexicon: &'a Lexicon,
}

impl TermParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn error(&self, message: &str) -> MontagueError {
        MontagueError::Parse {
            offset: self.toks.get(self.pos).map_or(self.end, |t| t.0),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), MontagueError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn term(&mut self) -> Result<LambdaTerm, MontagueError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.abstraction();
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) => return Ok(LambdaTerm::app(t, self.abstraction()?)),
                Some(Tok::Ident(_)) | Some(Tok::LParen) => t = LambdaTerm::app(t, self.atom()?),
                _ => return Ok(t),
            }
        }
    }

    fn abstraction(&mut self) -> Result<LambdaTerm, MontagueError> {
        self.expect(Tok::Lambda, "`\\`")?;
        let Some(Tok::Ident(x)) = self.peek().cloned() else {
            return Err(self.error("expected a variable after `\\`"));
        };
        self.pos += 1;
        self.expect(Tok::Colon, "`:` and a type")?;
        let ty = type_expr(&self.toks, &mut self.pos, self.end)?;
        self.expect(Tok::Dot, "`.` after the binder type")?;
        self.scope.push((x.clone(), ty.clone()));
        let body = self.term();
        self.scope.pop();
        Ok(LambdaTerm::abs(x, ty, body?))
    }

    fn atom(&mut self) -> Result<LambdaTerm, MontagueError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some((_, ty)) = self.scope.iter().rev().find(|(y, _)| *y == name) {
                    return Ok(LambdaTerm::var(name, ty.clone()));
                }
                self.lexicon
                    .get(&name)
                    .cloned()
                    .ok_or(MontagueError::UnknownWord(name))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

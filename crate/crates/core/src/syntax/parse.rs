//! Recursive-descent parser for the concrete syntax.
//!
//! ```text
//! formula := "~" formula | formula "&" formula | formula "|" formula
//!          | formula "->" formula | pred "(" terms ")" | term "=" term
//!          | ("exists" | "forall") ident "." formula | "(" formula ")"
//!          | "true" | "false"
//! term    := ident | ident "(" terms ")" | ("eps" | "tau") ident "." formula
//!          | "(" term ")"
//! ```
//!
//! Precedence is `~` > `&` > `|` > `->`; `->` associates to the right, `&`
//! and `|` to the left. Binders extend as far right as possible.
//!
//! A bare identifier in term position is a variable when it is bound by an
//! enclosing binder, declared as a variable, or (failing a declaration)
//! starts with one of `u`..`z`; otherwise it is a constant.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Naming convention for undeclared free identifiers.
pub fn is_variable_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| ('u'..='z').contains(&c))
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    Parser::new(src)?.formula()
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    Parser::new(src)?.term()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    Eps,
    Tau,
    True,
    False,
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    Equals,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Eps => f.write_str("`eps`"),
            Tok::Tau => f.write_str("`tau`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Equals => f.write_str("`=`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_alphabetic() && !"¬∧∨∃∀ετ⊥⊤".contains(c) || c == '_' {
            let mut ident = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_alphanumeric() && !"ετ".contains(c) || c == '_' || c == '\'' {
                    ident.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = match ident.as_str() {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "eps" => Tok::Eps,
                "tau" => Tok::Tau,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(ident),
            };
            out.push((tok, at));
            continue;
        }
        chars.next();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '=' => Tok::Equals,
            '→' | '⇒' | '⊃' => Tok::Arrow,
            '∃' => Tok::Exists,
            '∀' => Tok::Forall,
            'ε' => Tok::Eps,
            'τ' => Tok::Tau,
            '⊥' => Tok::False,
            '⊤' => Tok::True,
            '-' if chars.peek().map(|&(_, c)| c) == Some('>') => {
                chars.next();
                Tok::Arrow
            }
            other => {
                return Err(ParseError {
                    offset: at,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, at));
    }
    Ok(out)
}

pub struct Parser {
    tokens: Vec<(Tok, usize)>,
    end: usize,
    pos: usize,
    scope: Vec<String>,
    constants: BTreeSet<String>,
    variables: BTreeSet<String>,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lex(src)?,
            end: src.len(),
            pos: 0,
            scope: Vec::new(),
            constants: BTreeSet::new(),
            variables: BTreeSet::new(),
        })
    }

    /// Treats every constant of `sig` as a constant regardless of its name.
    pub fn with_signature(mut self, sig: &Signature) -> Self {
        self.constants.extend(sig.constants().iter().cloned());
        self
    }

    /// Treats the given names as free variables regardless of their spelling.
    pub fn with_variables<I: IntoIterator<Item = String>>(mut self, vars: I) -> Self {
        self.variables.extend(vars);
        self
    }

    /// Parses a complete formula; trailing input is an error.
    pub fn formula(mut self) -> Result<Formula, ParseError> {
        let f = self.implication()?;
        self.finish()?;
        Ok(f)
    }

    /// Parses a complete term; trailing input is an error.
    pub fn term(mut self) -> Result<Term, ParseError> {
        let t = self.term_inner()?;
        self.finish()?;
        Ok(t)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some((tok, _)) => Err(self.error(format!("unexpected {tok} after end of expression"))),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, at)| at)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            offset: self.offset(),
            message,
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(t) => t.to_string(),
                None => "end of input".to_string(),
            };
            Err(self.error(format!("expected {tok}, found {found}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            Some(t) => Err(self.error(format!("expected identifier, found {t}"))),
            None => Err(self.error("expected identifier, found end of input".into())),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let (var, body) = self.binder_tail()?;
                Ok(if universal {
                    Formula::Forall(var, Box::new(body))
                } else {
                    Formula::Exists(var, Box::new(body))
                })
            }
            _ => self.atom(),
        }
    }

    /// `ident "." formula`, with `ident` in scope inside the formula.
    fn binder_tail(&mut self) -> Result<(String, Formula), ParseError> {
        let var = self.ident()?;
        self.expect(&Tok::Dot)?;
        self.scope.push(var.clone());
        let body = self.implication();
        self.scope.pop();
        Ok((var, body?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                let saved = self.pos;
                if let Ok(eq) = self.parenthesized_equation() {
                    return Ok(eq);
                }
                self.pos = saved;
                self.pos += 1;
                let f = self.implication()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Eps) | Some(Tok::Tau) => {
                let lhs = self.term_inner()?;
                self.equation_rhs(lhs)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let args = self.arguments()?;
                    if self.peek() == Some(&Tok::Equals) {
                        self.equation_rhs(Term::App(name, args))
                    } else {
                        Ok(Formula::Pred(name, args))
                    }
                } else {
                    let lhs = self.resolve(name);
                    self.equation_rhs(lhs)
                }
            }
            Some(t) => Err(self.error(format!("expected a formula, found {t}"))),
            None => Err(self.error("expected a formula, found end of input".into())),
        }
    }

    fn parenthesized_equation(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term_inner()?;
        if self.peek() != Some(&Tok::Equals) {
            return Err(self.error("not an equation".into()));
        }
        self.equation_rhs(lhs)
    }

    fn equation_rhs(&mut self, lhs: Term) -> Result<Formula, ParseError> {
        self.expect(&Tok::Equals)?;
        let rhs = self.term_inner()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term_inner()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn term_inner(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Eps) | Some(Tok::Tau) => {
                let is_eps = self.peek() == Some(&Tok::Eps);
                self.pos += 1;
                let (var, body) = self.binder_tail()?;
                Ok(if is_eps {
                    Term::Eps(var, Box::new(body))
                } else {
                    Term::Tau(var, Box::new(body))
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term_inner()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let args = self.arguments()?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(self.resolve(name))
                }
            }
            Some(t) => Err(self.error(format!("expected a term, found {t}"))),
            None => Err(self.error("expected a term, found end of input".into())),
        }
    }

    fn resolve(&self, name: String) -> Term {
        if self.scope.contains(&name) || self.variables.contains(&name) {
            Term::Var(name)
        } else if self.constants.contains(&name) || !is_variable_name(&name) {
            Term::Const(name)
        } else {
            Term::Var(name)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let s = |n: &str| Formula::pred(n, vec![]);
        assert_eq!(
            p("A() | B() & ~C() -> D()"),
            Formula::implies(Formula::or(s("A"), Formula::and(s("B"), Formula::not(s("C")))), s("D"))
        );
        assert_eq!(
            p("A() -> B() -> C()"),
            Formula::implies(s("A"), Formula::implies(s("B"), s("C")))
        );
        assert_eq!(
            p("A() & B() & C()"),
            Formula::and(Formula::and(s("A"), s("B")), s("C"))
        );
    }

    #[test]
    fn binders_extend_right() {
        let f = p("exists x. S(x) & P(x)");
        assert!(matches!(f, Formula::Exists(_, ref b) if matches!(**b, Formula::And(..))));
        let t = parse_term("eps x. S(x) | P(x)").unwrap();
        assert!(matches!(t, Term::Eps(_, ref b) if matches!(**b, Formula::Or(..))));
    }

    #[test]
    fn variables_and_constants() {
        assert_eq!(p("P(x)"), Formula::unary("P", Term::var("x")));
        assert_eq!(p("P(c)"), Formula::unary("P", Term::constant("c")));
        // bound names are variables whatever their spelling
        assert_eq!(
            parse_term("eps c. S(c)").unwrap(),
            Term::eps("c", Formula::unary("S", Term::var("c")))
        );
        let mut sig = Signature::new();
        sig.add_constant("zero").unwrap();
        let f = Parser::new("P(zero)").unwrap().with_signature(&sig).formula().unwrap();
        assert_eq!(f, Formula::unary("P", Term::constant("zero")));
    }

    #[test]
    fn equations() {
        assert_eq!(p("f(x) = c"), Formula::eq(Term::app("f", vec![Term::var("x")]), Term::constant("c")));
        assert_eq!(
            p("(eps x. S(x)) = c"),
            Formula::eq(Term::eps("x", Formula::unary("S", Term::var("x"))), Term::constant("c"))
        );
        assert_eq!(p("(x = c)"), Formula::eq(Term::var("x"), Term::constant("c")));
        // the binder swallows the equation
        let t = p("c = eps x. f(x) = x");
        assert!(matches!(t, Formula::Eq(Term::Const(_), Term::Eps(..))));
    }

    #[test]
    fn unicode_spellings() {
        assert_eq!(p("¬P(τx. S(x)) ∧ ⊤"), p("~P(tau x. S(x)) & true"));
        assert_eq!(p("∃x. S(x) → ⊥"), p("exists x. S(x) -> false"));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_formula("P(x) &").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(parse_formula("P(x))").is_err());
        assert!(parse_formula("x").is_err());
        assert!(parse_formula("P(x) # Q(x)").is_err());
        assert!(parse_formula("exists . P(x)").is_err());
    }
}

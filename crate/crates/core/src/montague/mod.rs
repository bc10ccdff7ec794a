//! Simply typed lambda calculus over the base types `e` and `t`, with the
//! standard quantifier lexicon, and a bridge from closed first-order terms of
//! type `t` to [`Formula`](crate::syntax::Formula).

mod inadequacy;
mod lexicon;
mod reify;

pub use inadequacy::{demonstrate_inadequacy, InadequacyReport, Tree};
pub use lexicon::{parse_type, Lexicon, BUILTIN_LEXICON, DEMO_LEXICON};
pub use reify::{reify, reify_term};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::fresh_name;

/// Reduction steps allowed by [`beta_normalize`].
pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SemType {
    E,
    T,
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(from: SemType, to: SemType) -> SemType {
        SemType::Arrow(Box::new(from), Box::new(to))
    }

    /// `e -> t`
    pub fn predicate() -> SemType {
        SemType::arrow(SemType::E, SemType::T)
    }

    /// `(e -> t) -> t`
    pub fn quantifier() -> SemType {
        SemType::arrow(SemType::predicate(), SemType::T)
    }

    /// `(e -> t) -> (e -> t) -> t`
    pub fn determiner() -> SemType {
        SemType::arrow(SemType::predicate(), SemType::quantifier())
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::Arrow(a, b) if matches!(**a, SemType::Arrow(..)) => write!(f, "({a}) -> {b}"),
            SemType::Arrow(a, b) => write!(f, "{a} -> {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(String, SemType),
    Const(String, SemType),
    Abs(String, SemType, Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MontagueError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error("there are three demonstrations (1, 2, 3), not {0}")]
    NoSuchDemonstration(u8),
    #[error("normalization did not finish within {0} steps")]
    FuelExhausted(usize),
}

impl LambdaTerm {
    pub fn var(name: impl Into<String>, ty: SemType) -> Self {
        LambdaTerm::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Self {
        LambdaTerm::Const(name.into(), ty)
    }

    pub fn abs(var: impl Into<String>, ty: SemType, body: LambdaTerm) -> Self {
        LambdaTerm::Abs(var.into(), ty, Box::new(body))
    }

    pub fn app(fun: LambdaTerm, arg: LambdaTerm) -> Self {
        LambdaTerm::App(Box::new(fun), Box::new(arg))
    }

    /// `f a1 ... an`
    pub fn apply(fun: LambdaTerm, args: impl IntoIterator<Item = LambdaTerm>) -> Self {
        args.into_iter().fold(fun, LambdaTerm::app)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&LambdaTerm, Vec<&LambdaTerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let LambdaTerm::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LambdaTerm::Var(x, _) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LambdaTerm::Const(..) => {}
            LambdaTerm::Abs(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            LambdaTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    /// Capture-avoiding `self[var := value]`.
    pub fn substitute(&self, var: &str, value: &LambdaTerm) -> LambdaTerm {
        match self {
            LambdaTerm::Var(x, _) if x == var => value.clone(),
            LambdaTerm::Var(..) | LambdaTerm::Const(..) => self.clone(),
            LambdaTerm::App(f, a) => LambdaTerm::app(f.substitute(var, value), a.substitute(var, value)),
            LambdaTerm::Abs(x, ty, body) => {
                if x == var || !body.free_vars().contains(var) {
                    return self.clone();
                }
                let value_free = value.free_vars();
                if !value_free.contains(x) {
                    return LambdaTerm::abs(x.clone(), ty.clone(), body.substitute(var, value));
                }
                let mut avoid = value_free;
                avoid.extend(body.free_vars());
                let fresh = fresh_name(x, &avoid);
                let renamed = body.substitute(x, &LambdaTerm::var(fresh.clone(), ty.clone()));
                LambdaTerm::abs(fresh, ty.clone(), renamed.substitute(var, value))
            }
        }
    }

    /// The type of a closed term.
    pub fn typecheck(&self) -> Result<SemType, MontagueError> {
        typecheck_in(self, &mut Vec::new())
    }

    /// One leftmost-outermost beta step, if any redex remains.
    fn step(&self) -> Option<LambdaTerm> {
        match self {
            LambdaTerm::App(f, a) => {
                if let LambdaTerm::Abs(x, _, body) = &**f {
                    return Some(body.substitute(x, a));
                }
                if let Some(f2) = f.step() {
                    return Some(LambdaTerm::App(Box::new(f2), a.clone()));
                }
                a.step().map(|a2| LambdaTerm::App(f.clone(), Box::new(a2)))
            }
            LambdaTerm::Abs(x, ty, body) => body.step().map(|b| LambdaTerm::abs(x.clone(), ty.clone(), b)),
            _ => None,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.step().is_none()
    }
}

/// The type of a closed term.
pub fn typecheck(term: &LambdaTerm) -> Result<SemType, MontagueError> {
    term.typecheck()
}

fn typecheck_in(term: &LambdaTerm, env: &mut Vec<(String, SemType)>) -> Result<SemType, MontagueError> {
    match term {
        LambdaTerm::Var(x, ty) => {
            let bound = env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .ok_or_else(|| MontagueError::UnboundVariable(x.clone()))?;
            if bound.1 != *ty {
                return Err(MontagueError::TypeMismatch(format!(
                    "{x} is bound at type {} but used at type {ty}",
                    bound.1
                )));
            }
            Ok(ty.clone())
        }
        LambdaTerm::Const(_, ty) => Ok(ty.clone()),
        LambdaTerm::Abs(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let body_ty = typecheck_in(body, env);
            env.pop();
            Ok(SemType::arrow(ty.clone(), body_ty?))
        }
        LambdaTerm::App(f, a) => {
            let fty = typecheck_in(f, env)?;
            let aty = typecheck_in(a, env)?;
            match fty {
                SemType::Arrow(from, to) if *from == aty => Ok(*to),
                SemType::Arrow(from, _) => Err(MontagueError::TypeMismatch(format!(
                    "{f} expects an argument of type {from}, but {a} has type {aty}"
                ))),
                other => Err(MontagueError::TypeMismatch(format!(
                    "{f} has type {other} and cannot be applied to {a}"
                ))),
            }
        }
    }
}

/// Normal-order beta normalization with [`DEFAULT_FUEL`] steps.
pub fn beta_normalize(term: &LambdaTerm) -> Result<LambdaTerm, MontagueError> {
    beta_normalize_with_fuel(term, DEFAULT_FUEL)
}

pub fn beta_normalize_with_fuel(term: &LambdaTerm, fuel: usize) -> Result<LambdaTerm, MontagueError> {
    let mut current = term.clone();
    for _ in 0..fuel {
        match current.step() {
            Some(next) => current = next,
            None => return Ok(current),
        }
    }
    if current.is_normal() {
        Ok(current)
    } else {
        Err(MontagueError::FuelExhausted(fuel))
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Var(x, _) | LambdaTerm::Const(x, _) => f.write_str(x),
            LambdaTerm::Abs(x, ty, body) => write!(f, "\\{x}:{ty}. {body}"),
            LambdaTerm::App(..) => {
                let (head, args) = self.spine();
                if matches!(head, LambdaTerm::Abs(..)) {
                    write!(f, "({head})")?;
                } else {
                    write!(f, "{head}")?;
                }
                let last = args.len() - 1;
                for (i, a) in args.iter().enumerate() {
                    match a {
                        LambdaTerm::App(..) => write!(f, " ({a})")?,
                        LambdaTerm::Abs(..) if i < last => write!(f, " ({a})")?,
                        _ => write!(f, " {a}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::standard()
    }

    #[test]
    fn determiner_types() {
        let l = lex();
        assert_eq!(l.get("some").unwrap().typecheck().unwrap(), SemType::determiner());
        assert_eq!(l.get("every").unwrap().typecheck().unwrap(), SemType::determiner());
        assert_eq!(l.get("something").unwrap().typecheck().unwrap(), SemType::quantifier());
        assert_eq!(l.get("everything").unwrap().typecheck().unwrap(), SemType::quantifier());
        assert_eq!(SemType::determiner().to_string(), "(e -> t) -> (e -> t) -> t");
    }

    #[test]
    fn partial_application_and_mismatch() {
        let l = lex();
        let some_s = l.parse_term("some S").unwrap();
        assert_eq!(some_s.typecheck().unwrap(), SemType::quantifier());
        let bad = l.parse_term("S S").unwrap();
        assert!(matches!(bad.typecheck(), Err(MontagueError::TypeMismatch(_))));
        let free = LambdaTerm::var("x", SemType::E);
        assert_eq!(free.typecheck(), Err(MontagueError::UnboundVariable("x".into())));
    }

    #[test]
    fn some_unfolds_to_the_existential() {
        let l = lex();
        let nf = beta_normalize(&l.parse_term("some S P").unwrap()).unwrap();
        let pred = SemType::predicate();
        let x = || LambdaTerm::var("x", SemType::E);
        let and = LambdaTerm::constant("and", SemType::arrow(SemType::T, SemType::arrow(SemType::T, SemType::T)));
        let body = LambdaTerm::apply(
            and,
            [
                LambdaTerm::app(LambdaTerm::constant("S", pred.clone()), x()),
                LambdaTerm::app(LambdaTerm::constant("P", pred), x()),
            ],
        );
        let want = LambdaTerm::app(
            LambdaTerm::constant("exists", SemType::quantifier()),
            LambdaTerm::abs("x", SemType::E, body),
        );
        assert_eq!(nf, want);
        assert_eq!(nf.to_string(), "exists \\x:e. and (S x) (P x)");
    }

    #[test]
    fn constants_are_normal() {
        let c = LambdaTerm::constant("c", SemType::E);
        assert_eq!(beta_normalize(&c).unwrap(), c);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\y. \x. y) x  ->  \x'. x
        let e = SemType::E;
        let inner = LambdaTerm::abs("x", e.clone(), LambdaTerm::var("y", e.clone()));
        let redex = LambdaTerm::app(LambdaTerm::abs("y", e.clone(), inner), LambdaTerm::var("x", e.clone()));
        let nf = beta_normalize(&redex).unwrap();
        assert_eq!(nf, LambdaTerm::abs("x'", e.clone(), LambdaTerm::var("x", e)));
    }

    #[test]
    fn fuel_runs_out_on_long_reductions() {
        let l = lex();
        let t = l.parse_term("every S P").unwrap();
        assert_eq!(beta_normalize_with_fuel(&t, 1), Err(MontagueError::FuelExhausted(1)));
    }
}

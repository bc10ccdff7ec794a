use std::collections::BTreeSet;

use super::{LambdaTerm, MontagueError, SemType};
use crate::syntax::{fresh_name, Formula, Term};

const LOGICAL: [&str; 9] = ["exists", "forall", "and", "or", "implies", "not", "eq", "eps", "tau"];

fn not_first_order(what: impl std::fmt::Display) -> MontagueError {
    MontagueError::NotFirstOrder(what.to_string())
}

/// Reads a beta-normal term of type `t` as a first-order formula.
///
/// The logical constants become connectives, quantifiers, equality and
/// subnectors; other constants whose arguments all have type `e` become
/// predicates and function symbols. Quantifier arguments that are not
/// abstractions are eta-expanded.
pub fn reify(term: &LambdaTerm) -> Result<Formula, MontagueError> {
    let ty = term.typecheck()?;
    if ty != SemType::T {
        return Err(not_first_order(format!("{term} has type {ty}, not t")));
    }
    formula(term)
}

/// Reads a beta-normal term of type `e` as a first-order term.
pub fn reify_term(term: &LambdaTerm) -> Result<Term, MontagueError> {
    let ty = term.typecheck_open()?;
    if ty != SemType::E {
        return Err(not_first_order(format!("{term} has type {ty}, not e")));
    }
    individual(term)
}

impl LambdaTerm {
    /// Type of a term whose free variables carry their own types.
    fn typecheck_open(&self) -> Result<SemType, MontagueError> {
        let mut wrapped = self.clone();
        for x in self.free_vars() {
            let ty = self.free_var_type(&x).expect("free variable occurs");
            wrapped = LambdaTerm::abs(x.clone(), ty.clone(), wrapped);
        }
        let mut ty = wrapped.typecheck()?;
        for _ in self.free_vars() {
            let SemType::Arrow(_, to) = ty else { unreachable!("abstraction has arrow type") };
            ty = *to;
        }
        Ok(ty)
    }

    fn free_var_type(&self, x: &str) -> Option<SemType> {
        match self {
            LambdaTerm::Var(y, ty) if y == x => Some(ty.clone()),
            LambdaTerm::Var(..) | LambdaTerm::Const(..) => None,
            LambdaTerm::Abs(y, _, body) if y != x => body.free_var_type(x),
            LambdaTerm::Abs(..) => None,
            LambdaTerm::App(f, a) => f.free_var_type(x).or_else(|| a.free_var_type(x)),
        }
    }
}

/// `\x. body` for a predicate argument, eta-expanding when needed.
fn open_predicate(pred: &LambdaTerm) -> (String, LambdaTerm) {
    match pred {
        LambdaTerm::Abs(x, SemType::E, body) => (x.clone(), (**body).clone()),
        _ => {
            let avoid: BTreeSet<String> = pred.free_vars();
            let x = if avoid.contains("x") { fresh_name("x", &avoid) } else { "x".to_string() };
            let body = LambdaTerm::app(pred.clone(), LambdaTerm::var(x.clone(), SemType::E));
            let body = super::beta_normalize(&body).unwrap_or(body);
            (x, body)
        }
    }
}

fn formula(t: &LambdaTerm) -> Result<Formula, MontagueError> {
    let (head, args) = t.spine();
    let LambdaTerm::Const(name, _) = head else {
        return Err(not_first_order(format!("{t} is not headed by a constant")));
    };
    match (name.as_str(), args.as_slice()) {
        ("exists" | "forall", [pred]) => {
            let (x, body) = open_predicate(pred);
            let body = formula(&body)?;
            Ok(if name == "exists" {
                Formula::exists(x, body)
            } else {
                Formula::forall(x, body)
            })
        }
        ("and", [a, b]) => Ok(Formula::and(formula(a)?, formula(b)?)),
        ("or", [a, b]) => Ok(Formula::or(formula(a)?, formula(b)?)),
        ("implies", [a, b]) => Ok(Formula::implies(formula(a)?, formula(b)?)),
        ("not", [a]) => Ok(Formula::not(formula(a)?)),
        ("eq", [a, b]) => Ok(Formula::eq(individual(a)?, individual(b)?)),
        (logical, _) if LOGICAL.contains(&logical) => {
            Err(not_first_order(format!("{logical} is not fully applied in {t}")))
        }
        (pred, args) => Ok(Formula::pred(pred, args.iter().map(|a| individual(a)).collect::<Result<_, _>>()?)),
    }
}

fn individual(t: &LambdaTerm) -> Result<Term, MontagueError> {
    if let LambdaTerm::Var(x, ty) = t {
        return if *ty == SemType::E {
            Ok(Term::var(x.clone()))
        } else {
            Err(not_first_order(format!("variable {x} has type {ty}")))
        };
    }
    let (head, args) = t.spine();
    let LambdaTerm::Const(name, _) = head else {
        return Err(not_first_order(format!("{t} is not an individual")));
    };
    match (name.as_str(), args.as_slice()) {
        ("eps" | "tau", [pred]) => {
            let (x, body) = open_predicate(pred);
            let body = formula(&body)?;
            Ok(if name == "eps" {
                Term::eps(x, body)
            } else {
                Term::tau(x, body)
            })
        }
        (logical, _) if LOGICAL.contains(&logical) => Err(not_first_order(format!("{t} is not an individual"))),
        (c, []) => Ok(Term::constant(c)),
        (f, args) => Ok(Term::app(f, args.iter().map(|a| individual(a)).collect::<Result<_, _>>()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montague::{beta_normalize, Lexicon};
    use crate::syntax::{alpha_eq, parse_formula};

    fn reify_src(src: &str) -> Result<Formula, MontagueError> {
        let lex = Lexicon::standard();
        reify(&beta_normalize(&lex.parse_term(src).unwrap()).unwrap())
    }

    #[test]
    fn quantifier_words_reify() {
        let cases = [
            ("some S P", "exists x. S(x) & P(x)"),
            ("every S P", "forall x. S(x) -> P(x)"),
            ("something S", "exists x. S(x)"),
            ("everything P", "forall x. P(x)"),
        ];
        for (src, want) in cases {
            let got = reify_src(src).unwrap();
            assert!(alpha_eq(&got, &parse_formula(want).unwrap()), "{src}: {got}");
        }
    }

    #[test]
    fn subnectors_and_verbs() {
        let got = reify_src("composed (eps hits) keith").unwrap();
        assert_eq!(got.to_string(), "compose(keith, eps x. hit(x))");
        let lex = Lexicon::standard();
        let goat = reify_term(&beta_normalize(&lex.parse_term("eps goats").unwrap()).unwrap()).unwrap();
        assert_eq!(goat.to_string(), "eps x. goat(x)");
    }

    #[test]
    fn higher_order_leftovers_are_rejected() {
        let lex = Lexicon::standard();
        let ex = lex.parse_term("exists").unwrap();
        assert!(matches!(reify(&ex), Err(MontagueError::NotFirstOrder(_))));
        assert!(matches!(reify_src("some S"), Err(MontagueError::NotFirstOrder(_))));
    }
}

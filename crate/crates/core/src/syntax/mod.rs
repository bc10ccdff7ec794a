//! The epsilon/tau calculus: terms and formulas defined by mutual recursion.
//!
//! Terms are variables, constants, function applications and the two
//! subnectors `eps x. F` and `tau x. F`, which bind `x` in the formula `F`
//! and produce a term. Formulas are predicate applications, equations, the
//! propositional connectives and the convenience quantifiers `exists` and
//! `forall` (eliminable through [`expand_quantifiers`]).

mod ops;
mod parse;
mod print;
mod signature;

pub use ops::{
    alpha_eq, alpha_eq_term, canonical, canonical_term, dual_normalize, dual_normalize_term,
    expand_quantifiers, fresh_name, free_vars, free_vars_term, substitute, substitute_term,
};
pub use parse::{is_variable_name, parse_formula, parse_term, ParseError, Parser};
pub use signature::{Signature, SignatureError, SymbolKind};

use serde::{Serialize, Serializer};

/// A term of the calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
    /// `eps x. F`: a witness of `F` whenever one exists.
    Eps(String, Box<Formula>),
    /// `tau x. F`: the dual subnector, `F(tau x. F)` holds iff `F` holds everywhere.
    Tau(String, Box<Formula>),
}

/// A formula of the calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn eps(var: impl Into<String>, body: Formula) -> Term {
        Term::Eps(var.into(), Box::new(body))
    }

    pub fn tau(var: impl Into<String>, body: Formula) -> Term {
        Term::Tau(var.into(), Box::new(body))
    }

    /// True for `eps` and `tau` terms.
    pub fn is_binder(&self) -> bool {
        matches!(self, Term::Eps(..) | Term::Tau(..))
    }
}

impl Formula {
    pub fn pred(symbol: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(symbol.into(), args)
    }

    /// Shorthand for a unary predicate application `symbol(arg)`.
    pub fn unary(symbol: impl Into<String>, arg: Term) -> Formula {
        Formula::Pred(symbol.into(), vec![arg])
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Nesting depth of connectives, quantifiers and subnectors. Atoms whose
    /// arguments are plain variables or constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Pred(_, args) => args.iter().map(Term::depth).max().unwrap_or(0),
            Formula::Eq(l, r) => l.depth().max(r.depth()),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

impl Term {
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            Term::Eps(_, body) | Term::Tau(_, body) => 1 + body.depth(),
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

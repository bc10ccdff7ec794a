use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function,
    Predicate,
}

impl std::fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymbolKind::Constant => "constant",
            SymbolKind::Function => "function",
            SymbolKind::Predicate => "predicate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("{kind} `{symbol}` used with arity {found}, expected {expected}")]
    ArityError {
        kind: SymbolKind,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{symbol}` declared both as {first} and as {second}")]
    KindClash {
        symbol: String,
        first: SymbolKind,
        second: SymbolKind,
    },
    #[error("{kind} `{symbol}` is not declared in the signature")]
    Unknown { kind: SymbolKind, symbol: String },
}

/// The non-logical vocabulary: constants, function symbols and predicate
/// symbols with their arities. Equality is built in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    constants: BTreeSet<String>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{S, P}` style signature made of unary predicates only.
    pub fn unary_predicates<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sig = Signature::new();
        for name in names {
            sig.predicates.insert(name.into(), 1);
        }
        sig
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn predicate_arity(&self, symbol: &str) -> Option<usize> {
        self.predicates.get(symbol).copied()
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.ensure_kind(name, SymbolKind::Constant)?;
        self.constants.insert(name.to_string());
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.ensure_kind(name, SymbolKind::Function)?;
        Self::insert_arity(&mut self.functions, SymbolKind::Function, name, arity)
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.ensure_kind(name, SymbolKind::Predicate)?;
        Self::insert_arity(&mut self.predicates, SymbolKind::Predicate, name, arity)
    }

    /// Adds every symbol of `other`, failing on any clash.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for c in &other.constants {
            self.add_constant(c)?;
        }
        for (f, &n) in &other.functions {
            self.add_function(f, n)?;
        }
        for (p, &n) in &other.predicates {
            self.add_predicate(p, n)?;
        }
        Ok(())
    }

    /// Collects the vocabulary used by a set of formulas.
    pub fn infer<'a, I>(formulas: I) -> Result<Signature, SignatureError>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        let mut sig = Signature::new();
        for f in formulas {
            sig.absorb_formula(f)?;
        }
        Ok(sig)
    }

    /// Extends the signature with the symbols of `f`.
    pub fn absorb_formula(&mut self, f: &Formula) -> Result<(), SignatureError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Pred(p, args) => {
                self.add_predicate(p, args.len())?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
            Formula::Eq(l, r) => {
                self.absorb_term(l)?;
                self.absorb_term(r)
            }
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => {
                self.absorb_formula(g)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.absorb_formula(a)?;
                self.absorb_formula(b)
            }
        }
    }

    fn absorb_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => self.add_constant(c),
            Term::App(f, args) => {
                self.add_function(f, args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
            Term::Eps(_, body) | Term::Tau(_, body) => self.absorb_formula(body),
        }
    }

    /// Checks that `f` only uses declared symbols at their declared arities.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SignatureError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Pred(p, args) => {
                Self::check_arity(&self.predicates, SymbolKind::Predicate, p, args.len())?;
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(l, r) => {
                self.check_term(l)?;
                self.check_term(r)
            }
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => {
                self.check_formula(g)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
        }
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) if self.constants.contains(c) => Ok(()),
            Term::Const(c) => Err(SignatureError::Unknown {
                kind: SymbolKind::Constant,
                symbol: c.clone(),
            }),
            Term::App(f, args) => {
                Self::check_arity(&self.functions, SymbolKind::Function, f, args.len())?;
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Term::Eps(_, body) | Term::Tau(_, body) => self.check_formula(body),
        }
    }

    fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else if self.functions.contains_key(name) {
            Some(SymbolKind::Function)
        } else if self.predicates.contains_key(name) {
            Some(SymbolKind::Predicate)
        } else {
            None
        }
    }

    fn ensure_kind(&self, name: &str, kind: SymbolKind) -> Result<(), SignatureError> {
        match self.kind_of(name) {
            Some(existing) if existing != kind => Err(SignatureError::KindClash {
                symbol: name.to_string(),
                first: existing,
                second: kind,
            }),
            _ => Ok(()),
        }
    }

    fn insert_arity(
        table: &mut BTreeMap<String, usize>,
        kind: SymbolKind,
        name: &str,
        arity: usize,
    ) -> Result<(), SignatureError> {
        match table.get(name) {
            Some(&expected) if expected != arity => Err(SignatureError::ArityError {
                kind,
                symbol: name.to_string(),
                expected,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn check_arity(
        table: &BTreeMap<String, usize>,
        kind: SymbolKind,
        name: &str,
        found: usize,
    ) -> Result<(), SignatureError> {
        match table.get(name) {
            Some(&expected) if expected == found => Ok(()),
            Some(&expected) => Err(SignatureError::ArityError {
                kind,
                symbol: name.to_string(),
                expected,
                found,
            }),
            None => Err(SignatureError::Unknown {
                kind,
                symbol: name.to_string(),
            }),
        }
    }
}

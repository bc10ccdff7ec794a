//! Finite choice-function semantics for the epsilon calculus.
//!
//! A [`ChoiceModel`] is a finite first-order structure over the domain
//! `1..=n` together with a choice function defined on every subset of the
//! domain. `eps x. F` denotes the element chosen from the extension of `F`;
//! the empty extension is sent to the model's default element. `tau x. F` is
//! read through the duality `tau x. F = eps x. ~F`.
//!
//! The semantics is sound for the calculus but not complete, so the
//! entailment check in [`entails`] is definitive only when it produces a
//! countermodel.

mod compile;
mod entail;
mod enumerate;
mod json;

pub use compile::CompiledFormula;
pub use entail::{entails, entails_capped, Countermodel, EntailError, EntailmentVerdict};
pub use enumerate::{enumerate_models, EnumerateError, ModelIter, ModelSpace, DEFAULT_BUDGET};
pub use json::ModelDoc;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Formula, SymbolKind, Term};

/// Domain elements are `1..=size`.
pub type Element = usize;

/// Values of free variables.
pub type Assignment = BTreeMap<String, Element>;

/// Largest domain a model may have; the choice table holds `2^size` entries.
pub const MAX_DOMAIN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the domain must be nonempty")]
    EmptyDomain,
    #[error("domain size {0} exceeds the supported maximum of {MAX_DOMAIN}")]
    DomainTooLarge(usize),
    #[error("element {element} is outside the domain 1..={size}")]
    OutOfDomain { element: Element, size: usize },
    #[error("tuple of length {found} given for {symbol} of arity {arity}")]
    TupleArity {
        symbol: String,
        arity: usize,
        found: usize,
    },
    #[error("choice({subset:?}) = {element} is not a member of the subset")]
    ChoiceNotMember { subset: Vec<Element>, element: Element },
    #[error("the choice function is only set on nonempty subsets; use the default element for the empty set")]
    EmptyChoice,
    #[error("{0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("{kind} `{symbol}` is not interpreted by the model")]
    Uninterpreted { kind: SymbolKind, symbol: String },
    #[error("{symbol} applied to {found} arguments, interpreted with arity {arity}")]
    ArityMismatch {
        symbol: String,
        arity: usize,
        found: usize,
    },
    #[error("`{var}` is assigned {value}, outside the domain 1..={size}")]
    OutOfDomain { var: String, value: Element, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    arity: usize,
    /// Indexed by tuple code, see [`ChoiceModel::code`].
    holds: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Table {
    arity: usize,
    values: Vec<Element>,
}

/// A finite structure with a total choice function on subsets of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceModel {
    size: usize,
    predicates: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Table>,
    constants: BTreeMap<String, Element>,
    /// Indexed by subset bitmask (bit `i` stands for element `i + 1`);
    /// entry 0 is the default element.
    choice: Vec<Element>,
}

impl ChoiceModel {
    /// A model over `1..=size` with no symbols, choosing the least element
    /// of every nonempty subset and defaulting to 1.
    pub fn new(size: usize) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        if size > MAX_DOMAIN {
            return Err(ModelError::DomainTooLarge(size));
        }
        let choice = (0..1usize << size)
            .map(|mask| if mask == 0 { 1 } else { mask.trailing_zeros() as usize + 1 })
            .collect();
        Ok(ChoiceModel {
            size,
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
            constants: BTreeMap::new(),
            choice,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> impl Iterator<Item = Element> {
        1..=self.size
    }

    pub fn default_element(&self) -> Element {
        self.choice[0]
    }

    /// The element chosen from `subset`; the default element for the empty set.
    pub fn choose(&self, subset: &[Element]) -> Result<Element, ModelError> {
        Ok(self.choice[self.mask(subset)?])
    }

    pub fn constant(&self, name: &str) -> Option<Element> {
        self.constants.get(name).copied()
    }

    /// The extension of a predicate as sorted tuples.
    pub fn extension(&self, name: &str) -> Option<Vec<Vec<Element>>> {
        let rel = self.predicates.get(name)?;
        Some(
            rel.holds
                .iter()
                .enumerate()
                .filter(|(_, &h)| h)
                .map(|(code, _)| self.decode(code, rel.arity))
                .collect(),
        )
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> {
        self.predicates.keys().map(String::as_str)
    }

    /// Interprets `name` as the relation holding exactly of `tuples`.
    pub fn set_predicate(
        &mut self,
        name: &str,
        arity: usize,
        tuples: &[Vec<Element>],
    ) -> Result<(), ModelError> {
        let mut holds = vec![false; self.size.pow(arity as u32)];
        for tuple in tuples {
            if tuple.len() != arity {
                return Err(ModelError::TupleArity {
                    symbol: name.to_string(),
                    arity,
                    found: tuple.len(),
                });
            }
            holds[self.code(tuple)?] = true;
        }
        self.predicates.insert(name.to_string(), Relation { arity, holds });
        Ok(())
    }

    /// Unary shorthand for [`ChoiceModel::set_predicate`].
    pub fn with_unary(mut self, name: &str, members: &[Element]) -> Result<Self, ModelError> {
        let tuples: Vec<_> = members.iter().map(|&e| vec![e]).collect();
        self.set_predicate(name, 1, &tuples)?;
        Ok(self)
    }

    pub fn set_constant(&mut self, name: &str, value: Element) -> Result<(), ModelError> {
        self.check_element(value)?;
        self.constants.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with_constant(mut self, name: &str, value: Element) -> Result<Self, ModelError> {
        self.set_constant(name, value)?;
        Ok(self)
    }

    /// Interprets `name` by tabulating `f` over every argument tuple.
    pub fn set_function(
        &mut self,
        name: &str,
        arity: usize,
        f: impl Fn(&[Element]) -> Element,
    ) -> Result<(), ModelError> {
        let count = self.size.pow(arity as u32);
        let mut values = Vec::with_capacity(count);
        for code in 0..count {
            let value = f(&self.decode(code, arity));
            self.check_element(value)?;
            values.push(value);
        }
        self.functions.insert(name.to_string(), Table { arity, values });
        Ok(())
    }

    pub fn set_choice(&mut self, subset: &[Element], element: Element) -> Result<(), ModelError> {
        let mask = self.mask(subset)?;
        if mask == 0 {
            return Err(ModelError::EmptyChoice);
        }
        if !subset.contains(&element) {
            let mut subset = subset.to_vec();
            subset.sort_unstable();
            subset.dedup();
            return Err(ModelError::ChoiceNotMember { subset, element });
        }
        self.choice[mask] = element;
        Ok(())
    }

    pub fn with_choice(mut self, subset: &[Element], element: Element) -> Result<Self, ModelError> {
        self.set_choice(subset, element)?;
        Ok(self)
    }

    pub fn set_default(&mut self, element: Element) -> Result<(), ModelError> {
        self.check_element(element)?;
        self.choice[0] = element;
        Ok(())
    }

    pub fn with_default(mut self, element: Element) -> Result<Self, ModelError> {
        self.set_default(element)?;
        Ok(self)
    }

    fn check_element(&self, e: Element) -> Result<(), ModelError> {
        if (1..=self.size).contains(&e) {
            Ok(())
        } else {
            Err(ModelError::OutOfDomain {
                element: e,
                size: self.size,
            })
        }
    }

    fn mask(&self, subset: &[Element]) -> Result<usize, ModelError> {
        subset.iter().try_fold(0usize, |mask, &e| {
            self.check_element(e)?;
            Ok(mask | 1 << (e - 1))
        })
    }

    /// Mixed-radix code of a tuple, first argument least significant.
    fn code(&self, tuple: &[Element]) -> Result<usize, ModelError> {
        let mut code = 0;
        for &e in tuple.iter().rev() {
            self.check_element(e)?;
            code = code * self.size + (e - 1);
        }
        Ok(code)
    }

    fn decode(&self, mut code: usize, arity: usize) -> Vec<Element> {
        let mut tuple = Vec::with_capacity(arity);
        for _ in 0..arity {
            tuple.push(code % self.size + 1);
            code /= self.size;
        }
        tuple
    }

    /// Value of `t` under `env`.
    pub fn eval_term(&self, env: &Assignment, t: &Term) -> Result<Element, EvalError> {
        self.check_assignment(env)?;
        let mut stack: Vec<(&str, Element)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        self.term(&mut stack, t)
    }

    /// Truth value of `f` under `env`.
    pub fn eval_formula(&self, env: &Assignment, f: &Formula) -> Result<bool, EvalError> {
        self.check_assignment(env)?;
        let mut stack: Vec<(&str, Element)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        self.formula(&mut stack, f)
    }

    fn check_assignment(&self, env: &Assignment) -> Result<(), EvalError> {
        match env.iter().find(|(_, &v)| !(1..=self.size).contains(&v)) {
            Some((var, &value)) => Err(EvalError::OutOfDomain {
                var: var.clone(),
                value,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    /// Truth value of a formula without free variables.
    pub fn holds(&self, f: &Formula) -> Result<bool, EvalError> {
        self.formula(&mut Vec::new(), f)
    }

    fn lookup(stack: &[(&str, Element)], x: &str) -> Result<Element, EvalError> {
        stack
            .iter()
            .rev()
            .find(|(name, _)| *name == x)
            .map(|&(_, v)| v)
            .ok_or_else(|| EvalError::UnboundVariable(x.to_string()))
    }

    fn args_code<'a>(
        &self,
        stack: &mut Vec<(&'a str, Element)>,
        symbol: &str,
        arity: usize,
        args: &'a [Term],
    ) -> Result<usize, EvalError> {
        if args.len() != arity {
            return Err(EvalError::ArityMismatch {
                symbol: symbol.to_string(),
                arity,
                found: args.len(),
            });
        }
        let mut code = 0;
        for a in args.iter().rev() {
            code = code * self.size + (self.term(stack, a)? - 1);
        }
        Ok(code)
    }

    fn term<'a>(&self, stack: &mut Vec<(&'a str, Element)>, t: &'a Term) -> Result<Element, EvalError> {
        match t {
            Term::Var(x) => Self::lookup(stack, x),
            Term::Const(c) => self.constants.get(c).copied().ok_or_else(|| EvalError::Uninterpreted {
                kind: SymbolKind::Constant,
                symbol: c.clone(),
            }),
            Term::App(f, args) => {
                let table = self.functions.get(f).ok_or_else(|| EvalError::Uninterpreted {
                    kind: SymbolKind::Function,
                    symbol: f.clone(),
                })?;
                let code = self.args_code(stack, f, table.arity, args)?;
                Ok(table.values[code])
            }
            Term::Eps(x, body) => Ok(self.choice[self.extension_mask(stack, x, body, true)?]),
            Term::Tau(x, body) => Ok(self.choice[self.extension_mask(stack, x, body, false)?]),
        }
    }

    /// Bitmask of the elements `d` with `body[x := d]` equal to `polarity`.
    fn extension_mask<'a>(
        &self,
        stack: &mut Vec<(&'a str, Element)>,
        x: &'a str,
        body: &'a Formula,
        polarity: bool,
    ) -> Result<usize, EvalError> {
        let mut mask = 0;
        for d in 1..=self.size {
            stack.push((x, d));
            let value = self.formula(stack, body);
            stack.pop();
            if value? == polarity {
                mask |= 1 << (d - 1);
            }
        }
        Ok(mask)
    }

    fn formula<'a>(&self, stack: &mut Vec<(&'a str, Element)>, f: &'a Formula) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Pred(p, args) => {
                let rel = self.predicates.get(p).ok_or_else(|| EvalError::Uninterpreted {
                    kind: SymbolKind::Predicate,
                    symbol: p.clone(),
                })?;
                let code = self.args_code(stack, p, rel.arity, args)?;
                rel.holds[code]
            }
            Formula::Eq(l, r) => self.term(stack, l)? == self.term(stack, r)?,
            Formula::Not(g) => !self.formula(stack, g)?,
            Formula::And(a, b) => self.formula(stack, a)? && self.formula(stack, b)?,
            Formula::Or(a, b) => self.formula(stack, a)? || self.formula(stack, b)?,
            Formula::Implies(a, b) => !self.formula(stack, a)? || self.formula(stack, b)?,
            Formula::Exists(x, body) => self.extension_mask(stack, x, body, true)? != 0,
            Formula::Forall(x, body) => self.extension_mask(stack, x, body, false)? == 0,
        })
    }
}

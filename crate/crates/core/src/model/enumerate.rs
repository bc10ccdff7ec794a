//! Exhaustive enumeration of choice models over a signature.

use thiserror::Error;

use super::{ChoiceModel, Relation, Table, MAX_DOMAIN};
use crate::syntax::Signature;

/// Default cap on the number of models a sweep may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("models must have a nonempty domain (maximum size 0 requested)")]
    EmptyDomain,
    #[error("{count} models up to size {max_size} exceed the budget of {cap}")]
    BudgetExceeded { count: u128, cap: u64, max_size: usize },
    #[error("function symbols are only enumerated up to domain size 2 (requested {0})")]
    FunctionsTooLarge(usize),
}

/// All choice models with domains `1..=n` for `n` in `1..=max_size`.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    sig: Signature,
    max_size: usize,
    count: u128,
}

impl ModelSpace {
    pub fn new(sig: &Signature, max_size: usize) -> Result<Self, EnumerateError> {
        Self::with_budget(sig, max_size, DEFAULT_BUDGET)
    }

    pub fn with_budget(sig: &Signature, max_size: usize, cap: u64) -> Result<Self, EnumerateError> {
        if max_size == 0 {
            return Err(EnumerateError::EmptyDomain);
        }
        if !sig.functions().is_empty() && max_size > 2 {
            return Err(EnumerateError::FunctionsTooLarge(max_size));
        }
        let count = (1..=max_size)
            .map(|n| stratum_count(sig, n))
            .fold(0u128, u128::saturating_add);
        if count > u128::from(cap) || max_size > MAX_DOMAIN {
            return Err(EnumerateError::BudgetExceeded { count, cap, max_size });
        }
        Ok(ModelSpace {
            sig: sig.clone(),
            max_size,
            count,
        })
    }

    /// Number of models the iterator yields.
    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn iter(&self) -> ModelIter {
        ModelIter::new(&self.sig, self.max_size)
    }
}

impl<'a> IntoIterator for &'a ModelSpace {
    type Item = ChoiceModel;
    type IntoIter = ModelIter;

    fn into_iter(self) -> ModelIter {
        self.iter()
    }
}

/// Shorthand for `ModelSpace::new(sig, max_size)?.iter()`.
pub fn enumerate_models(sig: &Signature, max_size: usize) -> Result<ModelIter, EnumerateError> {
    Ok(ModelSpace::new(sig, max_size)?.iter())
}

/// Number of models with domain exactly `1..=n`, saturating.
pub(crate) fn stratum_count(sig: &Signature, n: usize) -> u128 {
    let n128 = n as u128;
    let mut count: u128 = 1;
    let mut mul = |k: u128| count = count.saturating_mul(k);
    for &arity in sig.predicates().values() {
        let cells = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
        mul(u32::try_from(cells).ok().and_then(|c| 2u128.checked_pow(c)).unwrap_or(u128::MAX));
    }
    for _ in sig.constants() {
        mul(n128);
    }
    for &arity in sig.functions().values() {
        let cells = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
        mul(u32::try_from(cells).ok().and_then(|c| n128.checked_pow(c)).unwrap_or(u128::MAX));
    }
    if n <= MAX_DOMAIN {
        for mask in 1u32..(1 << n) {
            mul(u128::from(mask.count_ones()));
        }
    } else {
        mul(u128::MAX);
    }
    mul(n128);
    count
}

#[derive(Clone, Debug)]
enum Digit {
    Default,
    Choice(usize),
    Function(usize, usize),
    Constant(usize),
    Predicate(usize),
}

/// Deterministic odometer over the models of a [`ModelSpace`]: domain size
/// ascending; within a size the default element varies fastest, then the
/// choice on each subset (by bitmask), function tables, constants, and
/// finally predicate extensions in name order.
#[derive(Clone, Debug)]
pub struct ModelIter {
    predicates: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
    max_size: usize,
    size: usize,
    digits: Vec<(Digit, u64)>,
    counters: Vec<u64>,
    done: bool,
}

impl ModelIter {
    fn new(sig: &Signature, max_size: usize) -> Self {
        let mut it = ModelIter {
            predicates: sig.predicates().iter().map(|(p, &a)| (p.clone(), a)).collect(),
            functions: sig.functions().iter().map(|(f, &a)| (f.clone(), a)).collect(),
            constants: sig.constants().iter().cloned().collect(),
            max_size,
            size: 0,
            digits: Vec::new(),
            counters: Vec::new(),
            done: max_size == 0,
        };
        if !it.done {
            it.start_stratum(1);
        }
        it
    }

    fn start_stratum(&mut self, n: usize) {
        self.size = n;
        let mut digits = vec![(Digit::Default, n as u64)];
        for mask in 1usize..(1 << n) {
            digits.push((Digit::Choice(mask), u64::from(mask.count_ones())));
        }
        for (i, (_, arity)) in self.functions.iter().enumerate() {
            for code in 0..n.pow(*arity as u32) {
                digits.push((Digit::Function(i, code), n as u64));
            }
        }
        for i in 0..self.constants.len() {
            digits.push((Digit::Constant(i), n as u64));
        }
        for (i, (_, arity)) in self.predicates.iter().enumerate() {
            digits.push((Digit::Predicate(i), 1u64 << n.pow(*arity as u32)));
        }
        self.counters = vec![0; digits.len()];
        self.digits = digits;
    }

    fn current(&self) -> ChoiceModel {
        let n = self.size;
        let mut model = ChoiceModel::new(n).expect("stratum sizes are within bounds");
        let mut tables: Vec<Table> = self
            .functions
            .iter()
            .map(|(_, arity)| Table {
                arity: *arity,
                values: vec![1; n.pow(*arity as u32)],
            })
            .collect();
        for ((digit, _), &value) in self.digits.iter().zip(&self.counters) {
            let value = value as usize;
            match *digit {
                Digit::Default => model.choice[0] = value + 1,
                Digit::Choice(mask) => {
                    let member = (0..n).filter(|i| mask >> i & 1 == 1).nth(value).expect("counter below popcount");
                    model.choice[mask] = member + 1;
                }
                Digit::Function(i, code) => tables[i].values[code] = value + 1,
                Digit::Constant(i) => {
                    model.constants.insert(self.constants[i].clone(), value + 1);
                }
                Digit::Predicate(i) => {
                    let (name, arity) = &self.predicates[i];
                    let holds = (0..n.pow(*arity as u32)).map(|code| value >> code & 1 == 1).collect();
                    model.predicates.insert(name.clone(), Relation { arity: *arity, holds });
                }
            }
        }
        for ((name, _), table) in self.functions.iter().zip(tables) {
            model.functions.insert(name.clone(), table);
        }
        model
    }

    fn advance(&mut self) {
        for (counter, (_, radix)) in self.counters.iter_mut().zip(&self.digits) {
            *counter += 1;
            if *counter < *radix {
                return;
            }
            *counter = 0;
        }
        if self.size < self.max_size {
            self.start_stratum(self.size + 1);
        } else {
            self.done = true;
        }
    }
}

impl Iterator for ModelIter {
    type Item = ChoiceModel;

    fn next(&mut self) -> Option<ChoiceModel> {
        if self.done {
            return None;
        }
        let model = self.current();
        self.advance();
        Some(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn square_sig() -> Signature {
        Signature::unary_predicates(["S", "P"])
    }

    /// Product over nonempty subsets of an n-set of the subset size.
    fn choice_functions(n: u32) -> u128 {
        (1..=n)
            .map(|k| {
                let subsets = (1..=k).fold(1u128, |acc, i| acc * u128::from(n - i + 1) / u128::from(i));
                u128::from(k).pow(subsets as u32)
            })
            .product()
    }

    #[test]
    fn counts_match_direct_combinatorics() {
        assert_eq!(choice_functions(1), 1);
        assert_eq!(choice_functions(2), 2);
        assert_eq!(choice_functions(3), 24);
        assert_eq!(ModelSpace::new(&square_sig(), 1).unwrap().count(), 4);
        let two = ModelSpace::new(&square_sig(), 2).unwrap();
        assert_eq!(two.count(), 4 + 64);
        let three = ModelSpace::new(&square_sig(), 3).unwrap();
        assert_eq!(three.count(), 4 * 1 * 1 + 16 * 2 * 2 + 64 * 24 * 3);
        assert_eq!(three.iter().count() as u128, three.count());
    }

    #[test]
    fn size_two_stratum_has_64_distinct_models() {
        let models: Vec<_> = enumerate_models(&square_sig(), 2).unwrap().filter(|m| m.size() == 2).collect();
        assert_eq!(models.len(), 64);
        let distinct: HashSet<String> = models.iter().map(|m| format!("{m:?}")).collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn every_enumerated_choice_is_a_member() {
        for m in enumerate_models(&square_sig(), 3).unwrap() {
            for mask in 1usize..(1 << m.size()) {
                let chosen = m.choice[mask];
                assert!(mask >> (chosen - 1) & 1 == 1);
            }
            assert!((1..=m.size()).contains(&m.default_element()));
        }
    }

    #[test]
    fn constants_and_functions() {
        let mut sig = Signature::new();
        sig.add_constant("c").unwrap();
        sig.add_function("f", 1).unwrap();
        let space = ModelSpace::new(&sig, 2).unwrap();
        // n=1: 1 * 1 * 1 * 1; n=2: c:2, f:2^2, choice:2, default:2
        assert_eq!(space.count(), 1 + 2 * 4 * 2 * 2);
        assert_eq!(space.iter().count(), 33);
        assert!(matches!(ModelSpace::new(&sig, 3), Err(EnumerateError::FunctionsTooLarge(3))));
    }

    #[test]
    fn zero_size_is_rejected() {
        assert_eq!(ModelSpace::new(&square_sig(), 0).unwrap_err(), EnumerateError::EmptyDomain);
    }

    #[test]
    fn budget_is_enforced() {
        let err = ModelSpace::with_budget(&square_sig(), 3, 100).unwrap_err();
        assert!(matches!(err, EnumerateError::BudgetExceeded { count: 4676, cap: 100, .. }));
        let big = Signature::unary_predicates(["A", "B", "C", "D", "E"]);
        assert!(ModelSpace::new(&big, 6).is_err());
    }

    #[test]
    fn order_is_deterministic() {
        let a: Vec<_> = enumerate_models(&square_sig(), 2).unwrap().collect();
        let b: Vec<_> = enumerate_models(&square_sig(), 2).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a[0].size(), 1);
    }
}

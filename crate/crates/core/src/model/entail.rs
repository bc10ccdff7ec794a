use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{Assignment, ChoiceModel, CompiledFormula, EnumerateError, EvalError, ModelDoc, ModelSpace, DEFAULT_BUDGET};
use crate::syntax::{free_vars, Formula, Signature, SignatureError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EntailError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A model and assignment making every premise true and the goal false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: ChoiceModel,
    pub assignment: Assignment,
}

impl Countermodel {
    /// Re-evaluates the sequent; true iff this really is a counterexample.
    pub fn refutes(&self, premises: &[Formula], goal: &Formula) -> bool {
        let holds = |f: &Formula| self.model.eval_formula(&self.assignment, f);
        premises.iter().all(|p| holds(p) == Ok(true)) && holds(goal) == Ok(false)
    }
}

impl Serialize for Countermodel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Countermodel", 2)?;
        s.serialize_field("model", &ModelDoc::from(&self.model))?;
        s.serialize_field("assignment", &self.assignment)?;
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntailmentVerdict {
    /// No countermodel with at most `bound` elements.
    ValidUpTo(usize),
    Countermodel(Countermodel),
}

impl EntailmentVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, EntailmentVerdict::ValidUpTo(_))
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            EntailmentVerdict::Countermodel(c) => Some(c),
            EntailmentVerdict::ValidUpTo(_) => None,
        }
    }
}

/// Bounded semantic consequence with the default budget.
///
/// Free variables are read as jointly universally quantified over the whole
/// sequent. Returns the first countermodel in enumeration order.
pub fn entails(
    premises: &[Formula],
    goal: &Formula,
    sig: &Signature,
    bound: usize,
) -> Result<EntailmentVerdict, EntailError> {
    entails_capped(premises, goal, sig, bound, DEFAULT_BUDGET)
}

pub fn entails_capped(
    premises: &[Formula],
    goal: &Formula,
    sig: &Signature,
    bound: usize,
    cap: u64,
) -> Result<EntailmentVerdict, EntailError> {
    for f in premises.iter().chain(std::iter::once(goal)) {
        sig.check_formula(f)?;
    }
    let space = ModelSpace::with_budget(sig, bound, cap)?;
    let vars: Vec<String> = premises
        .iter()
        .chain(std::iter::once(goal))
        .flat_map(free_vars)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let premises: Vec<CompiledFormula> = premises.iter().map(CompiledFormula::new).collect();
    let goal = CompiledFormula::new(goal);
    for model in &space {
        if let Some(assignment) = refuting_assignment(&model, &vars, &premises, &goal)? {
            return Ok(EntailmentVerdict::Countermodel(Countermodel { model, assignment }));
        }
    }
    Ok(EntailmentVerdict::ValidUpTo(bound))
}

fn refuting_assignment(
    model: &ChoiceModel,
    vars: &[String],
    premises: &[CompiledFormula],
    goal: &CompiledFormula,
) -> Result<Option<Assignment>, EvalError> {
    let n = model.size();
    let mut values = vec![1; vars.len()];
    loop {
        let env: Assignment = vars.iter().cloned().zip(values.iter().copied()).collect();
        let mut premises_hold = true;
        for p in premises {
            if !p.eval(model, &env)? {
                premises_hold = false;
                break;
            }
        }
        if premises_hold && !goal.eval(model, &env)? {
            return Ok(Some(env));
        }
        // next assignment, odometer style
        let mut i = 0;
        loop {
            if i == values.len() {
                return Ok(None);
            }
            values[i] += 1;
            if values[i] <= n {
                break;
            }
            values[i] = 1;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn sp() -> Signature {
        Signature::unary_predicates(["S", "P"])
    }

    #[test]
    fn tau_does_not_entail_epsilon() {
        let premises = [f("P(tau x. S(x))")];
        let goal = f("P(eps x. S(x))");
        let verdict = entails(&premises, &goal, &sp(), 3).unwrap();
        let cm = verdict.countermodel().expect("countermodel");
        assert!(cm.refutes(&premises, &goal));
        assert_eq!(cm.model.size(), 2);
    }

    #[test]
    fn first_displayed_entailment_is_valid() {
        let verdict = entails(
            &[f("P(eps x. S(x))"), f("exists x. S(x)")],
            &f("exists x. S(x) & P(x)"),
            &sp(),
            3,
        )
        .unwrap();
        assert_eq!(verdict, EntailmentVerdict::ValidUpTo(3));
    }

    #[test]
    fn tautology_with_a_constant() {
        let mut sig = Signature::unary_predicates(["P"]);
        sig.add_constant("c").unwrap();
        assert_eq!(entails(&[], &f("P(c) -> P(c)"), &sig, 1).unwrap(), EntailmentVerdict::ValidUpTo(1));
    }

    #[test]
    fn free_variables_are_universal() {
        let sig = Signature::unary_predicates(["P"]);
        let verdict = entails(&[], &f("P(x)"), &sig, 1).unwrap();
        let cm = verdict.countermodel().unwrap();
        assert_eq!(cm.assignment.get("x"), Some(&1));
        assert!(entails(&[f("P(x)")], &f("P(x)"), &sig, 2).unwrap().is_valid());
        // the eigenvariable condition matters: P(x) does not entail P(y)
        assert!(!entails(&[f("P(x)")], &f("P(y)"), &sig, 2).unwrap().is_valid());
    }

    #[test]
    fn symbols_outside_the_signature_are_rejected() {
        let err = entails(&[], &f("Q(eps x. S(x))"), &sp(), 1).unwrap_err();
        assert!(matches!(err, EntailError::Signature(_)));
    }

    #[test]
    fn budget_errors_surface() {
        let err = entails_capped(&[], &f("P(eps x. S(x))"), &sp(), 3, 10).unwrap_err();
        assert!(matches!(err, EntailError::Enumerate(EnumerateError::BudgetExceeded { .. })));
    }
}

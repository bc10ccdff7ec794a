//! Constructors that compute each rule's conclusion from its premises.
//!
//! Builders only assemble trees; [`Derivation::check`] is still the
//! authority. Those that need a particular premise shape return
//! [`KernelError`] with [`KernelErrorKind::RuleMismatch`] when it is absent.

use super::check::binder_subterms;
use super::{multiset_minus, Derivation, KernelError, KernelErrorKind, Payload, Rule, Sequent};
use crate::syntax::{alpha_eq, substitute, Formula, Term};

fn reject(rule: Rule, msg: String) -> KernelError {
    KernelError {
        rule,
        label: None,
        kind: KernelErrorKind::RuleMismatch(msg),
    }
}

impl Derivation {
    fn hyps(&self) -> Vec<Formula> {
        self.conclusion.hypotheses.clone()
    }

    fn goal(&self) -> &Formula {
        &self.conclusion.conclusion
    }

    fn derive(rule: Rule, premises: Vec<Derivation>, hyps: Vec<Formula>, goal: Formula) -> Derivation {
        Derivation::new(rule, premises, Sequent::new(hyps, goal))
    }

    /// `A |- A`.
    pub fn axiom(a: Formula) -> Derivation {
        Self::derive(Rule::Axiom, vec![], vec![a.clone()], a)
    }

    /// Adds hypotheses after the existing ones.
    pub fn weaken(self, extra: impl IntoIterator<Item = Formula>) -> Derivation {
        let mut hyps = self.hyps();
        hyps.extend(extra);
        let goal = self.goal().clone();
        Self::derive(Rule::Weakening, vec![self], hyps, goal)
    }

    pub fn and_intro(left: Derivation, right: Derivation) -> Derivation {
        let goal = Formula::and(left.goal().clone(), right.goal().clone());
        let hyps = left.hyps();
        Self::derive(Rule::AndIntro, vec![left, right], hyps, goal)
    }

    fn and_elim(self, rule: Rule) -> Result<Derivation, KernelError> {
        let Formula::And(a, b) = self.goal().clone() else {
            return Err(reject(rule, format!("{} is not a conjunction", self.goal())));
        };
        let part = if rule == Rule::AndElimLeft { *a } else { *b };
        let hyps = self.hyps();
        Ok(Self::derive(rule, vec![self], hyps, part))
    }

    pub fn and_elim_left(self) -> Result<Derivation, KernelError> {
        self.and_elim(Rule::AndElimLeft)
    }

    pub fn and_elim_right(self) -> Result<Derivation, KernelError> {
        self.and_elim(Rule::AndElimRight)
    }

    /// `G |- A` to `G |- A | right`.
    pub fn or_intro_left(self, right: Formula) -> Derivation {
        let goal = Formula::or(self.goal().clone(), right);
        let hyps = self.hyps();
        Self::derive(Rule::OrIntroLeft, vec![self], hyps, goal)
    }

    /// `G |- B` to `G |- left | B`.
    pub fn or_intro_right(self, left: Formula) -> Derivation {
        let goal = Formula::or(left, self.goal().clone());
        let hyps = self.hyps();
        Self::derive(Rule::OrIntroRight, vec![self], hyps, goal)
    }

    /// Case split on the disjunction proved by `self`.
    pub fn or_elim(self, left_case: Derivation, right_case: Derivation) -> Result<Derivation, KernelError> {
        if !matches!(self.goal(), Formula::Or(..)) {
            return Err(reject(Rule::OrElim, format!("{} is not a disjunction", self.goal())));
        }
        let goal = left_case.goal().clone();
        let hyps = self.hyps();
        Ok(Self::derive(Rule::OrElim, vec![self, left_case, right_case], hyps, goal))
    }

    /// Discharges `hyp`, concluding `hyp -> B`.
    pub fn imp_intro(self, hyp: &Formula) -> Result<Derivation, KernelError> {
        let hyps = self.discharge(Rule::ImpIntro, hyp)?;
        let goal = Formula::implies(hyp.clone(), self.goal().clone());
        Ok(Self::derive(Rule::ImpIntro, vec![self], hyps, goal))
    }

    pub fn imp_elim(imp: Derivation, arg: Derivation) -> Result<Derivation, KernelError> {
        let Formula::Implies(_, b) = imp.goal().clone() else {
            return Err(reject(Rule::ImpElim, format!("{} is not an implication", imp.goal())));
        };
        let hyps = imp.hyps();
        Ok(Self::derive(Rule::ImpElim, vec![imp, arg], hyps, *b))
    }

    /// From `G, A |- false`, discharges `hyp` (= `A`) and concludes `~A`.
    pub fn not_intro(self, hyp: &Formula) -> Result<Derivation, KernelError> {
        let hyps = self.discharge(Rule::NotIntro, hyp)?;
        Ok(Self::derive(Rule::NotIntro, vec![self], hyps, Formula::not(hyp.clone())))
    }

    pub fn not_elim(a: Derivation, not_a: Derivation) -> Derivation {
        let hyps = a.hyps();
        Self::derive(Rule::NotElim, vec![a, not_a], hyps, Formula::False)
    }

    pub fn falsum_elim(self, goal: Formula) -> Derivation {
        let hyps = self.hyps();
        Self::derive(Rule::FalsumElim, vec![self], hyps, goal)
    }

    pub fn dne(self) -> Result<Derivation, KernelError> {
        let Formula::Not(inner) = self.goal() else {
            return Err(reject(Rule::DoubleNegElim, format!("{} is not a double negation", self.goal())));
        };
        let Formula::Not(a) = &**inner else {
            return Err(reject(Rule::DoubleNegElim, format!("{} is not a double negation", self.goal())));
        };
        let (hyps, goal) = (self.hyps(), (**a).clone());
        Ok(Self::derive(Rule::DoubleNegElim, vec![self], hyps, goal))
    }

    pub fn eq_refl(t: Term) -> Derivation {
        Self::derive(Rule::EqRefl, vec![], vec![], Formula::eq(t.clone(), t))
    }

    /// From `s = t` and `motive[var := s]`, concludes `motive[var := t]`.
    pub fn eq_subst(eq: Derivation, body: Derivation, var: &str, motive: Formula) -> Result<Derivation, KernelError> {
        let Formula::Eq(_, t) = eq.goal().clone() else {
            return Err(reject(Rule::EqSubst, format!("{} is not an equation", eq.goal())));
        };
        let goal = substitute(&motive, var, &t);
        let hyps = eq.hyps();
        Ok(Self::derive(Rule::EqSubst, vec![eq, body], hyps, goal).with_payload(Payload {
            var: Some(var.to_string()),
            motive: Some(motive),
            ..Payload::default()
        }))
    }

    /// Generalizes over the eigenvariable `var`.
    pub fn tau_intro(self, var: &str) -> Derivation {
        let body = self.goal().clone();
        let goal = substitute(&body, var, &Term::tau(var, body.clone()));
        let hyps = self.hyps();
        Self::derive(Rule::TauIntro, vec![self], hyps, goal).with_payload(Payload {
            var: Some(var.to_string()),
            ..Payload::default()
        })
    }

    /// Instantiates the first tau-term `tau x. F` of the premise for which
    /// the premise reads `F[x := tau x. F]`.
    pub fn tau_elim(self, witness: Term) -> Result<Derivation, KernelError> {
        let premise = self.goal().clone();
        let goal = binder_subterms(&premise).into_iter().find_map(|tau| match &tau {
            Term::Tau(x, body) if alpha_eq(&substitute(body, x, &tau), &premise) => {
                Some(substitute(body, x, &witness))
            }
            _ => None,
        });
        let Some(goal) = goal else {
            return Err(reject(Rule::TauElim, format!("{premise} is not of the form F[x := tau x. F]")));
        };
        let hyps = self.hyps();
        Ok(Self::derive(Rule::TauElim, vec![self], hyps, goal).with_payload(Payload {
            term: Some(witness),
            ..Payload::default()
        }))
    }

    /// From `G |- body[var := witness]`, concludes `G |- body[var := eps var. body]`.
    pub fn eps_intro(self, var: &str, body: Formula, witness: Term) -> Derivation {
        let goal = substitute(&body, var, &Term::eps(var, body.clone()));
        let hyps = self.hyps();
        Self::derive(Rule::EpsIntro, vec![self], hyps, goal).with_payload(Payload {
            term: Some(witness),
            ..Payload::default()
        })
    }

    /// Rewrites the conclusion to `goal`, which must be one dual step away.
    pub fn dual_rewrite(self, goal: Formula) -> Derivation {
        let hyps = self.hyps();
        Self::derive(Rule::DualRewrite, vec![self], hyps, goal)
    }

    /// Replaces hypothesis `index` by `hyp`, one dual step away.
    pub fn dual_rewrite_hypothesis(self, index: usize, hyp: Formula) -> Derivation {
        let mut hyps = self.hyps();
        hyps[index] = hyp;
        let goal = self.goal().clone();
        Self::derive(Rule::DualRewrite, vec![self], hyps, goal)
    }

    /// `G |- A` to `G |- ~~A`, via a short refutation of `~A`.
    pub fn double_negation_intro(self) -> Result<Derivation, KernelError> {
        let not_a = Formula::not(self.goal().clone());
        let context = self.hyps();
        let refuted = Derivation::axiom(not_a.clone()).weaken(context);
        Derivation::not_elim(self.weaken([not_a.clone()]), refuted).not_intro(&not_a)
    }

    fn discharge(&self, rule: Rule, hyp: &Formula) -> Result<Vec<Formula>, KernelError> {
        multiset_minus(&self.conclusion.hypotheses, std::slice::from_ref(hyp))
            .ok_or_else(|| reject(rule, format!("{hyp} is not a hypothesis of {}", self.conclusion)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn builders_produce_checked_derivations() {
        let ab = Derivation::axiom(f("A(c) & B(c)"));
        let swapped = Derivation::and_intro(ab.clone().and_elim_right().unwrap(), ab.and_elim_left().unwrap());
        let d = swapped.imp_intro(&f("A(c) & B(c)")).unwrap();
        assert!(d.check().unwrap().same_as(&Sequent::new(vec![], f("A(c) & B(c) -> B(c) & A(c)"))));
    }

    #[test]
    fn or_elim_commutes_disjunction() {
        let h = f("A(c) | B(c)");
        let left = Derivation::axiom(f("A(c)")).or_intro_right(f("B(c)")).weaken([h.clone()]);
        let right = Derivation::axiom(f("B(c)")).or_intro_left(f("A(c)")).weaken([h.clone()]);
        let d = Derivation::axiom(h.clone()).or_elim(left, right).unwrap();
        assert!(d.check().unwrap().same_as(&Sequent::new(vec![h], f("B(c) | A(c)"))));
    }

    #[test]
    fn double_negation_round_trip() {
        let d = Derivation::axiom(f("P(c)")).double_negation_intro().unwrap();
        assert!(d.check().unwrap().same_as(&Sequent::new(vec![f("P(c)")], f("~~P(c)"))));
        let back = Derivation::axiom(f("~~P(c)")).dne().unwrap();
        assert!(back.check().is_ok());
        assert!(Derivation::axiom(f("~P(c)")).dne().is_err());
    }

    #[test]
    fn equality_substitution() {
        let eq = Derivation::axiom(f("c = d"));
        let body = Derivation::axiom(f("P(c)")).weaken([f("c = d")]);
        let eq = eq.weaken([f("P(c)")]);
        let d = Derivation::eq_subst(eq, body, "z", f("P(z)")).unwrap();
        assert!(d.check().unwrap().same_as(&Sequent::new(vec![f("c = d"), f("P(c)")], f("P(d)"))));
        assert!(Derivation::eq_refl(Term::constant("c")).check().is_ok());
    }

    #[test]
    fn ex_falso() {
        let d = Derivation::not_elim(
            Derivation::axiom(f("P(c)")).weaken([f("~P(c)")]),
            Derivation::axiom(f("~P(c)")).weaken([f("P(c)")]),
        )
        .falsum_elim(f("Q(c)"));
        assert!(d.check().is_ok());
    }

    #[test]
    fn tau_rules_round_trip() {
        // |- P(x) -> P(x), generalized, then instantiated at c
        let refl = Derivation::axiom(f("P(x)")).imp_intro(&f("P(x)")).unwrap();
        let general = refl.tau_intro("x");
        assert!(general.check().is_ok());
        let inst = general.tau_elim(Term::constant("c")).unwrap();
        assert!(inst.check().unwrap().same_as(&Sequent::new(vec![], f("P(c) -> P(c)"))));
    }
}

use std::fmt;

use thiserror::Error;

use super::{multiset_eq, multiset_minus, Derivation, Rule, Sequent};
use crate::syntax::{alpha_eq, alpha_eq_term, free_vars, substitute, Formula, Signature, SignatureError, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelErrorKind {
    #[error("eigenvariable {var} is free in hypothesis {hypothesis}")]
    EigenvariableViolation { var: String, hypothesis: Formula },
    #[error("{0}")]
    RuleMismatch(String),
    #[error(transparent)]
    ArityError(#[from] SignatureError),
}

/// A rejected step: which rule, which labelled node, and why.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct KernelError {
    pub rule: Rule,
    pub label: Option<String>,
    pub kind: KernelErrorKind,
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => write!(f, "step {label} ({}): {}", self.rule, self.kind),
            None => write!(f, "{} step: {}", self.rule, self.kind),
        }
    }
}

/// Validates every node of `d`, premises before conclusions, and returns the
/// end-sequent. Symbol arities must be consistent across the whole
/// derivation.
pub fn check_derivation(d: &Derivation) -> Result<Sequent, KernelError> {
    let mut sig = Signature::new();
    check_node(d, &mut sig)?;
    Ok(d.conclusion.clone())
}

fn check_node(d: &Derivation, sig: &mut Signature) -> Result<(), KernelError> {
    for p in &d.premises {
        check_node(p, sig)?;
    }
    let fail = |kind| KernelError {
        rule: d.rule,
        label: d.label.clone(),
        kind,
    };
    absorb(d, sig).map_err(|e| fail(KernelErrorKind::ArityError(e)))?;
    check_step(d).map_err(fail)
}

fn absorb(d: &Derivation, sig: &mut Signature) -> Result<(), SignatureError> {
    for f in d.conclusion.hypotheses.iter().chain([&d.conclusion.conclusion]) {
        sig.absorb_formula(f)?;
    }
    if let Some(m) = &d.payload.motive {
        sig.absorb_formula(m)?;
    }
    if let Some(t) = &d.payload.term {
        // terms are absorbed through a trivially true carrier formula
        sig.absorb_formula(&Formula::eq(t.clone(), t.clone()))?;
    }
    Ok(())
}

type Step = Result<(), KernelErrorKind>;

fn mismatch(msg: impl Into<String>) -> KernelErrorKind {
    KernelErrorKind::RuleMismatch(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Step {
    if cond {
        Ok(())
    } else {
        Err(mismatch(msg()))
    }
}

fn show(hyps: &[Formula]) -> String {
    hyps.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn same_context(premise: &Sequent, conclusion: &Sequent, which: usize) -> Step {
    ensure(multiset_eq(&premise.hypotheses, &conclusion.hypotheses), || {
        format!(
            "premise {} has hypotheses [{}] but the conclusion has [{}]",
            which + 1,
            show(&premise.hypotheses),
            show(&conclusion.hypotheses)
        )
    })
}

/// The premise context is the conclusion context plus `discharged`.
fn discharges(premise: &Sequent, conclusion: &Sequent, discharged: &Formula, which: usize) -> Step {
    let rest = multiset_minus(&premise.hypotheses, std::slice::from_ref(discharged));
    ensure(
        rest.is_some_and(|rest| multiset_eq(&rest, &conclusion.hypotheses)),
        || {
            format!(
                "premise {} must have the conclusion's hypotheses plus {discharged}, found [{}]",
                which + 1,
                show(&premise.hypotheses)
            )
        },
    )
}

fn matches_formula(found: &Formula, expected: &Formula, what: &str) -> Step {
    ensure(alpha_eq(found, expected), || format!("{what} should be {expected}, found {found}"))
}

fn payload_var(d: &Derivation) -> Result<&str, KernelErrorKind> {
    d.payload
        .var
        .as_deref()
        .ok_or_else(|| mismatch(format!("{} needs a variable in its payload", d.rule)))
}

fn payload_term(d: &Derivation) -> Result<&Term, KernelErrorKind> {
    d.payload
        .term
        .as_ref()
        .ok_or_else(|| mismatch(format!("{} needs a witness term in its payload", d.rule)))
}

fn check_step(d: &Derivation) -> Step {
    let expected = d.rule.premise_count();
    ensure(d.premises.len() == expected, || {
        format!("expects {expected} premises, found {}", d.premises.len())
    })?;
    let c = &d.conclusion;
    let p: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
    let goal = &c.conclusion;
    match d.rule {
        Rule::Axiom => ensure(
            c.hypotheses.len() == 1 && alpha_eq(&c.hypotheses[0], goal),
            || format!("an axiom has the form A |- A, found {c}"),
        ),
        Rule::Weakening => {
            matches_formula(goal, &p[0].conclusion, "conclusion")?;
            ensure(multiset_minus(&c.hypotheses, &p[0].hypotheses).is_some(), || {
                format!(
                    "premise hypotheses [{}] are not among [{}]",
                    show(&p[0].hypotheses),
                    show(&c.hypotheses)
                )
            })
        }
        Rule::AndIntro => {
            let Formula::And(a, b) = goal else {
                return Err(mismatch(format!("conclusion {goal} is not a conjunction")));
            };
            same_context(p[0], c, 0)?;
            same_context(p[1], c, 1)?;
            matches_formula(&p[0].conclusion, a, "left premise")?;
            matches_formula(&p[1].conclusion, b, "right premise")
        }
        Rule::AndElimLeft | Rule::AndElimRight => {
            let Formula::And(a, b) = &p[0].conclusion else {
                return Err(mismatch(format!("premise {} is not a conjunction", p[0].conclusion)));
            };
            same_context(p[0], c, 0)?;
            let part = if d.rule == Rule::AndElimLeft { a } else { b };
            matches_formula(goal, part, "conclusion")
        }
        Rule::OrIntroLeft | Rule::OrIntroRight => {
            let Formula::Or(a, b) = goal else {
                return Err(mismatch(format!("conclusion {goal} is not a disjunction")));
            };
            same_context(p[0], c, 0)?;
            let part = if d.rule == Rule::OrIntroLeft { a } else { b };
            matches_formula(&p[0].conclusion, part, "premise")
        }
        Rule::OrElim => {
            let Formula::Or(a, b) = &p[0].conclusion else {
                return Err(mismatch(format!("first premise {} is not a disjunction", p[0].conclusion)));
            };
            same_context(p[0], c, 0)?;
            discharges(p[1], c, a, 1)?;
            discharges(p[2], c, b, 2)?;
            matches_formula(&p[1].conclusion, goal, "second premise")?;
            matches_formula(&p[2].conclusion, goal, "third premise")
        }
        Rule::ImpIntro => {
            let Formula::Implies(a, b) = goal else {
                return Err(mismatch(format!("conclusion {goal} is not an implication")));
            };
            discharges(p[0], c, a, 0)?;
            matches_formula(&p[0].conclusion, b, "premise")
        }
        Rule::ImpElim => {
            let Formula::Implies(a, b) = &p[0].conclusion else {
                return Err(mismatch(format!("first premise {} is not an implication", p[0].conclusion)));
            };
            same_context(p[0], c, 0)?;
            same_context(p[1], c, 1)?;
            matches_formula(&p[1].conclusion, a, "second premise")?;
            matches_formula(goal, b, "conclusion")
        }
        Rule::NotIntro => {
            let Formula::Not(a) = goal else {
                return Err(mismatch(format!("conclusion {goal} is not a negation")));
            };
            discharges(p[0], c, a, 0)?;
            matches_formula(&p[0].conclusion, &Formula::False, "premise")
        }
        Rule::NotElim => {
            same_context(p[0], c, 0)?;
            same_context(p[1], c, 1)?;
            matches_formula(&p[1].conclusion, &Formula::not(p[0].conclusion.clone()), "second premise")?;
            matches_formula(goal, &Formula::False, "conclusion")
        }
        Rule::FalsumElim => {
            same_context(p[0], c, 0)?;
            matches_formula(&p[0].conclusion, &Formula::False, "premise")
        }
        Rule::DoubleNegElim => {
            same_context(p[0], c, 0)?;
            matches_formula(&p[0].conclusion, &Formula::not(Formula::not(goal.clone())), "premise")
        }
        Rule::EqRefl => {
            ensure(c.hypotheses.is_empty(), || "reflexivity takes no hypotheses".into())?;
            ensure(
                matches!(goal, Formula::Eq(a, b) if alpha_eq_term(a, b)),
                || format!("conclusion {goal} is not of the form t = t"),
            )
        }
        Rule::EqSubst => {
            let x = payload_var(d)?;
            let motive = d
                .payload
                .motive
                .as_ref()
                .ok_or_else(|| mismatch("eq_subst needs a motive formula in its payload"))?;
            let Formula::Eq(s, t) = &p[0].conclusion else {
                return Err(mismatch(format!("first premise {} is not an equation", p[0].conclusion)));
            };
            same_context(p[0], c, 0)?;
            same_context(p[1], c, 1)?;
            matches_formula(&p[1].conclusion, &substitute(motive, x, s), "second premise")?;
            matches_formula(goal, &substitute(motive, x, t), "conclusion")
        }
        Rule::TauIntro => {
            let x = payload_var(d)?;
            same_context(p[0], c, 0)?;
            if let Some(h) = c.hypotheses.iter().find(|h| free_vars(h).contains(x)) {
                return Err(KernelErrorKind::EigenvariableViolation {
                    var: x.to_string(),
                    hypothesis: h.clone(),
                });
            }
            let body = &p[0].conclusion;
            let tau = Term::tau(x, body.clone());
            matches_formula(goal, &substitute(body, x, &tau), "conclusion")
        }
        Rule::TauElim => {
            let t = payload_term(d)?;
            same_context(p[0], c, 0)?;
            let premise = &p[0].conclusion;
            let found = binder_subterms(premise).into_iter().any(|tau| match &tau {
                Term::Tau(x, body) => {
                    alpha_eq(&substitute(body, x, &tau), premise) && alpha_eq(&substitute(body, x, t), goal)
                }
                _ => false,
            });
            ensure(found, || {
                format!("no tau x. F in {premise} with premise F[x := tau x. F] and conclusion F[x := {t}]")
            })
        }
        Rule::EpsIntro => {
            let t = payload_term(d)?;
            same_context(p[0], c, 0)?;
            let premise = &p[0].conclusion;
            let found = binder_subterms(goal).into_iter().any(|eps| match &eps {
                Term::Eps(x, body) => {
                    alpha_eq(&substitute(body, x, &eps), goal) && alpha_eq(&substitute(body, x, t), premise)
                }
                _ => false,
            });
            ensure(found, || {
                format!("no eps x. F in {goal} with conclusion F[x := eps x. F] and premise F[x := {t}]")
            })
        }
        Rule::DualRewrite => check_dual_rewrite(p[0], c),
    }
}

fn check_dual_rewrite(p: &Sequent, c: &Sequent) -> Step {
    let rewritten = |from: &Formula, to: &Formula| dual_rewrites(from).iter().any(|r| alpha_eq(r, to));
    if multiset_eq(&p.hypotheses, &c.hypotheses) && rewritten(&p.conclusion, &c.conclusion) {
        return Ok(());
    }
    if alpha_eq(&p.conclusion, &c.conclusion) {
        for (i, h) in p.hypotheses.iter().enumerate() {
            for r in dual_rewrites(h) {
                let mut hyps = p.hypotheses.clone();
                hyps[i] = r;
                if multiset_eq(&hyps, &c.hypotheses) {
                    return Ok(());
                }
            }
        }
    }
    Err(mismatch(format!(
        "{c} does not follow from {p} by rewriting one eps x. F to tau x. ~F or back"
    )))
}

/// Every formula obtained from `f` by rewriting exactly one subterm
/// `eps x. F` to `tau x. ~F`, or one `tau x. ~F` to `eps x. F`.
pub fn dual_rewrites(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::True | Formula::False => Vec::new(),
        Formula::Pred(p, args) => rewrite_args(args).into_iter().map(|a| Formula::Pred(p.clone(), a)).collect(),
        Formula::Eq(a, b) => {
            let mut out: Vec<Formula> = rewrite_term(a).into_iter().map(|a| Formula::Eq(a, b.clone())).collect();
            out.extend(rewrite_term(b).into_iter().map(|b| Formula::Eq(a.clone(), b)));
            out
        }
        Formula::Not(g) => dual_rewrites(g).into_iter().map(Formula::not).collect(),
        Formula::And(a, b) => rewrite_pair(a, b, Formula::and),
        Formula::Or(a, b) => rewrite_pair(a, b, Formula::or),
        Formula::Implies(a, b) => rewrite_pair(a, b, Formula::implies),
        Formula::Exists(x, g) => dual_rewrites(g).into_iter().map(|g| Formula::exists(x.clone(), g)).collect(),
        Formula::Forall(x, g) => dual_rewrites(g).into_iter().map(|g| Formula::forall(x.clone(), g)).collect(),
    }
}

fn rewrite_pair(a: &Formula, b: &Formula, build: fn(Formula, Formula) -> Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = dual_rewrites(a).into_iter().map(|a| build(a, b.clone())).collect();
    out.extend(dual_rewrites(b).into_iter().map(|b| build(a.clone(), b)));
    out
}

fn rewrite_args(args: &[Term]) -> Vec<Vec<Term>> {
    let mut out = Vec::new();
    for (i, arg) in args.iter().enumerate() {
        for r in rewrite_term(arg) {
            let mut v = args.to_vec();
            v[i] = r;
            out.push(v);
        }
    }
    out
}

fn rewrite_term(t: &Term) -> Vec<Term> {
    match t {
        Term::Var(_) | Term::Const(_) => Vec::new(),
        Term::App(f, args) => rewrite_args(args).into_iter().map(|a| Term::App(f.clone(), a)).collect(),
        Term::Eps(x, body) => {
            let mut out = vec![Term::tau(x.clone(), Formula::not((**body).clone()))];
            out.extend(dual_rewrites(body).into_iter().map(|b| Term::eps(x.clone(), b)));
            out
        }
        Term::Tau(x, body) => {
            let mut out = Vec::new();
            if let Formula::Not(inner) = &**body {
                out.push(Term::eps(x.clone(), (**inner).clone()));
            }
            out.extend(dual_rewrites(body).into_iter().map(|b| Term::tau(x.clone(), b)));
            out
        }
    }
}

/// All epsilon and tau subterms of `f`, outermost first.
pub(crate) fn binder_subterms(f: &Formula) -> Vec<Term> {
    let mut out = Vec::new();
    collect_formula(f, &mut out);
    out
}

fn collect_formula(f: &Formula, out: &mut Vec<Term>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Pred(_, args) => args.iter().for_each(|a| collect_term(a, out)),
        Formula::Eq(a, b) => {
            collect_term(a, out);
            collect_term(b, out);
        }
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_formula(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_formula(a, out);
            collect_formula(b, out);
        }
    }
}

fn collect_term(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Var(_) | Term::Const(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_term(a, out)),
        Term::Eps(_, body) | Term::Tau(_, body) => {
            out.push(t.clone());
            collect_formula(body, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Payload;
    use crate::syntax::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn seq(hyps: &[&str], concl: &str) -> Sequent {
        Sequent::new(hyps.iter().map(|h| f(h)).collect(), f(concl))
    }

    fn axiom(a: &str) -> Derivation {
        Derivation::new(Rule::Axiom, vec![], seq(&[a], a))
    }

    #[test]
    fn axiom_shape() {
        assert!(axiom("P(c)").check().is_ok());
        let bad = Derivation::new(Rule::Axiom, vec![], seq(&["P(c)"], "Q(c)"));
        assert!(matches!(bad.check().unwrap_err().kind, KernelErrorKind::RuleMismatch(_)));
        let two = Derivation::new(Rule::Axiom, vec![], seq(&["P(c)", "Q(c)"], "P(c)"));
        assert!(two.check().is_err());
    }

    #[test]
    fn eps_intro_from_a_constant_witness() {
        let d = Derivation::new(Rule::EpsIntro, vec![axiom("P(c)")], seq(&["P(c)"], "P(eps x. P(x))"))
            .with_payload(Payload {
                term: Some(Term::constant("c")),
                ..Payload::default()
            });
        assert_eq!(d.check().unwrap(), seq(&["P(c)"], "P(eps x. P(x))"));
    }

    #[test]
    fn tau_intro_respects_the_eigenvariable() {
        let d = Derivation::new(Rule::TauIntro, vec![axiom("S(x)")], seq(&["S(x)"], "S(tau x. S(x))"))
            .with_payload(Payload {
                var: Some("x".into()),
                ..Payload::default()
            })
            .with_label("t1");
        let err = d.check().unwrap_err();
        assert_eq!(err.rule, Rule::TauIntro);
        assert_eq!(err.label.as_deref(), Some("t1"));
        assert_eq!(
            err.kind,
            KernelErrorKind::EigenvariableViolation {
                var: "x".into(),
                hypothesis: f("S(x)")
            }
        );
    }

    #[test]
    fn arity_clash_is_reported() {
        let d = Derivation::new(
            Rule::Weakening,
            vec![axiom("P(c)")],
            seq(&["P(c)", "P(c, c)"], "P(c)"),
        );
        assert!(matches!(d.check().unwrap_err().kind, KernelErrorKind::ArityError(_)));
    }

    #[test]
    fn wrong_premise_count() {
        let d = Derivation::new(Rule::AndIntro, vec![axiom("P(c)")], seq(&["P(c)"], "P(c) & P(c)"));
        assert!(d.check().is_err());
    }

    #[test]
    fn one_step_dual_rewrites() {
        let rs = dual_rewrites(&f("P(eps x. Q(eps y. R(y)))"));
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().any(|r| alpha_eq(r, &f("P(tau x. ~Q(eps y. R(y)))"))));
        assert!(rs.iter().any(|r| alpha_eq(r, &f("P(eps x. Q(tau y. ~R(y)))"))));
        let back = dual_rewrites(&f("P(tau x. ~Q(x))"));
        assert!(back.iter().any(|r| alpha_eq(r, &f("P(eps x. Q(x))"))));
        assert!(dual_rewrites(&f("P(tau x. Q(x))")).is_empty());
    }

    #[test]
    fn dual_rewrite_in_a_hypothesis() {
        let ax = axiom("P(eps x. Q(x))");
        let d = Derivation::new(
            Rule::DualRewrite,
            vec![ax.clone()],
            seq(&["P(tau x. ~Q(x))"], "P(eps x. Q(x))"),
        );
        assert!(d.check().is_ok());
        let two_steps = Derivation::new(
            Rule::DualRewrite,
            vec![ax],
            seq(&["P(tau x. ~Q(x))"], "P(tau x. ~Q(x))"),
        );
        assert!(two_steps.check().is_err());
    }

    #[test]
    fn subterms_outermost_first() {
        let subs = binder_subterms(&f("P(eps x. Q(tau y. R(x, y)))"));
        assert_eq!(subs.len(), 2);
        assert!(matches!(subs[0], Term::Eps(..)));
        assert!(matches!(subs[1], Term::Tau(..)));
    }
}

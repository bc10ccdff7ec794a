//! Derivations shipped with the kernel.
//!
//! Every function builds its derivations with the checked builders; the
//! tests re-check each one and compare its end-sequent with the intended
//! statement.

use super::{Derivation, KernelError};
use crate::syntax::{expand_quantifiers, Formula, Term};

fn atom(p: &str, t: Term) -> Formula {
    Formula::unary(p, t)
}

fn x_is(p: &str) -> Formula {
    atom(p, Term::var("x"))
}

/// `eps x. S(x)`
pub fn eps_of(s: &str) -> Term {
    Term::eps("x", x_is(s))
}

/// `tau x. S(x)`
pub fn tau_of(s: &str) -> Term {
    Term::tau("x", x_is(s))
}

/// The four halves of the two dual equivalences for predicate `p`:
///
/// * `P(eps x. P(x)) |- ~~P(tau x. ~P(x))` and its converse;
/// * `P(tau x. P(x)) |- ~~P(eps x. ~P(x))` and its converse.
pub fn dual_equivalences(p: &str) -> Result<Vec<Derivation>, KernelError> {
    let not_p = Formula::not(x_is(p));
    let eps_p = atom(p, eps_of(p));
    let tau_not = atom(p, Term::tau("x", not_p.clone()));
    let tau_p = atom(p, tau_of(p));
    let eps_not = atom(p, Term::eps("x", not_p.clone()));

    let eps_to_tau = Derivation::axiom(eps_p.clone())
        .dual_rewrite(tau_not.clone())
        .double_negation_intro()?;

    let tau_to_eps = Derivation::axiom(Formula::not(Formula::not(tau_not.clone())))
        .dne()?
        .dual_rewrite(eps_p);

    let tau_to_eps_not = Derivation::axiom(tau_p)
        .tau_elim(Term::eps("x", not_p.clone()))?
        .double_negation_intro()?;

    // ~~P(eps x. ~P(x)) gives P(eps x. ~P(x)) = P(tau x. ~~P(x)), which
    // instantiates to P(x) for the eigenvariable x and generalizes back.
    let not_not_p = Formula::not(not_p);
    let eps_not_to_tau = Derivation::axiom(Formula::not(Formula::not(eps_not)))
        .dne()?
        .dual_rewrite(atom(p, Term::tau("x", not_not_p)))
        .double_negation_intro()?
        .tau_elim(Term::var("x"))?
        .dne()?
        .tau_intro("x");

    Ok(vec![eps_to_tau, tau_to_eps, tau_to_eps_not, eps_not_to_tau])
}

/// `P(eps x. S(x)) & exists x. S(x) |- exists x. S(x) & P(x)`, with both sides
/// quantifier-expanded.
pub fn witness_entailment(s: &str, p: &str) -> Result<Derivation, KernelError> {
    let hyp = expand_quantifiers(&Formula::and(
        atom(p, eps_of(s)),
        Formula::exists("x", x_is(s)),
    ));
    let h = Derivation::axiom(hyp);
    let both = Derivation::and_intro(h.clone().and_elim_right()?, h.and_elim_left()?);
    Ok(both.eps_intro("x", Formula::and(x_is(s), x_is(p)), eps_of(s)))
}

/// `exists x. S(x) & forall y. (S(y) -> P(y)) |- P(eps x. S(x))`, with the
/// hypothesis quantifier-expanded.
pub fn universal_entailment(s: &str, p: &str) -> Result<Derivation, KernelError> {
    let y_imp = Formula::implies(atom(s, Term::var("y")), atom(p, Term::var("y")));
    let hyp = expand_quantifiers(&Formula::and(Formula::exists("x", x_is(s)), Formula::forall("y", y_imp)));
    let h = Derivation::axiom(hyp);
    let instance = h.clone().and_elim_right()?.tau_elim(eps_of(s))?;
    Derivation::imp_elim(instance, h.and_elim_left()?)
}

/// The A, E, I, O sentences of the square on `s` and `p`, with `p` negated
/// when `negate` holds: `A = P(tau S)`, `I = P(eps S)`, `E = ~I`, `O = ~A`.
pub fn square_sentences(s: &str, p: &str, negate: bool) -> [Formula; 4] {
    let pred = |t: Term| {
        let f = atom(p, t);
        if negate {
            Formula::not(f)
        } else {
            f
        }
    };
    let a = pred(tau_of(s));
    let i = pred(eps_of(s));
    [a.clone(), Formula::not(i.clone()), i, Formula::not(a)]
}

/// `G, X |- Y` from `G = X -> Y`.
fn modus_ponens(gamma: &Formula, x: &Formula) -> Result<Derivation, KernelError> {
    Derivation::imp_elim(
        Derivation::axiom(gamma.clone()).weaken([x.clone()]),
        Derivation::axiom(x.clone()).weaken([gamma.clone()]),
    )
}

/// `G, ~Y |- ~X` from `G = X -> Y`.
fn modus_tollens(gamma: &Formula, x: &Formula, y: &Formula) -> Result<Derivation, KernelError> {
    let not_y = Formula::not(y.clone());
    let forward = Derivation::imp_elim(
        Derivation::axiom(gamma.clone()).weaken([not_y.clone(), x.clone()]),
        Derivation::axiom(x.clone()).weaken([gamma.clone(), not_y.clone()]),
    )?;
    let refuted = Derivation::axiom(not_y).weaken([gamma.clone(), x.clone()]);
    Derivation::not_elim(forward, refuted).not_intro(x)
}

/// Theory making the A to I subaltern valid on the plain square:
/// `P(tau x. S(x)) -> P(eps x. S(x))`.
pub fn forward_theory(s: &str, p: &str) -> Formula {
    Formula::implies(atom(p, tau_of(s)), atom(p, eps_of(s)))
}

/// The converse theory, `P(eps x. S(x)) -> P(tau x. S(x))`, which yields the
/// subalterns of the square with `p` negated.
pub fn backward_theory(s: &str, p: &str) -> Formula {
    Formula::implies(atom(p, eps_of(s)), atom(p, tau_of(s)))
}

/// Subaltern derivations `A |- I` and `E |- O` with the theory as an extra
/// hypothesis. Without `negate` the theory is [`forward_theory`], otherwise
/// [`backward_theory`].
pub fn square_subalterns(s: &str, p: &str, negate: bool) -> Result<[Derivation; 2], KernelError> {
    let tau_p = atom(p, tau_of(s));
    let eps_p = atom(p, eps_of(s));
    if !negate {
        let gamma = forward_theory(s, p);
        // A |- I is modus ponens; E |- O its contrapositive
        Ok([modus_ponens(&gamma, &tau_p)?, modus_tollens(&gamma, &tau_p, &eps_p)?])
    } else {
        let gamma = backward_theory(s, p);
        // A = ~P(tau S) |- I = ~P(eps S)
        let a_to_i = modus_tollens(&gamma, &eps_p, &tau_p)?;
        // E = ~~P(eps S) |- O = ~~P(tau S)
        let e = Formula::not(Formula::not(eps_p.clone()));
        let e_to_o = Derivation::imp_elim(
            Derivation::axiom(gamma.clone()).weaken([e.clone()]),
            Derivation::axiom(e.clone()).dne()?.weaken([gamma]),
        )?
        .double_negation_intro()?;
        Ok([a_to_i, e_to_o])
    }
}

/// Contradictory pairs of a square: `A -||- ~O` and `E -||- ~I`.
pub fn square_contradictories(s: &str, p: &str, negate: bool) -> Result<Vec<Derivation>, KernelError> {
    let [a, e, _, o] = square_sentences(s, p, negate);
    let not_o = Formula::not(o);
    Ok(vec![
        Derivation::axiom(a.clone()).double_negation_intro()?,
        Derivation::axiom(not_o).dne()?,
        Derivation::axiom(e.clone()),
    ])
}

/// Every shipped derivation for the square on `s` and `p`, with a name.
pub fn square_library(s: &str, p: &str) -> Result<Vec<(String, Derivation)>, KernelError> {
    let mut out = Vec::new();
    for negate in [false, true] {
        let tag = if negate { "negated" } else { "plain" };
        let [ai, eo] = square_subalterns(s, p, negate)?;
        out.push((format!("{tag} subaltern A |- I"), ai));
        out.push((format!("{tag} subaltern E |- O"), eo));
        for (i, d) in square_contradictories(s, p, negate)?.into_iter().enumerate() {
            out.push((format!("{tag} contradictory {}", i + 1), d));
        }
    }
    Ok(out)
}

/// All shipped derivations over the predicates `S` and `P`.
pub fn standard_library() -> Result<Vec<(String, Derivation)>, KernelError> {
    let mut out = Vec::new();
    for (i, d) in dual_equivalences("P")?.into_iter().enumerate() {
        out.push((format!("dual equivalence {}", i + 1), d));
    }
    out.push(("witness entailment".into(), witness_entailment("S", "P")?));
    out.push(("universal entailment".into(), universal_entailment("S", "P")?));
    out.extend(square_library("S", "P")?);
    Ok(out)
}

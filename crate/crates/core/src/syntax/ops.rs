//! Binding-aware operations: free variables, capture-avoiding substitution,
//! alpha-equivalence, and the two normalizations.

use std::collections::BTreeSet;

use super::{Formula, Term};

/// Variables with at least one unbound occurrence in `f`.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_formula(f, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_term(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_term(t, &mut Vec::new(), &mut out);
    out
}

fn collect_formula<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Pred(_, args) => args.iter().for_each(|t| collect_term(t, bound, out)),
        Formula::Eq(l, r) => {
            collect_term(l, bound, out);
            collect_term(r, bound, out);
        }
        Formula::Not(g) => collect_formula(g, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_formula(a, bound, out);
            collect_formula(b, bound, out);
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            bound.push(x);
            collect_formula(body, bound, out);
            bound.pop();
        }
    }
}

fn collect_term<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Term::Const(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_term(a, bound, out)),
        Term::Eps(x, body) | Term::Tau(x, body) => {
            bound.push(x);
            collect_formula(body, bound, out);
            bound.pop();
        }
    }
}

/// `base` followed by the smallest number of primes (at least one) that
/// yields a name outside `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding substitution of `t` for the free occurrences of `var` in `f`.
pub fn substitute(f: &Formula, var: &str, t: &Term) -> Formula {
    Subst::new(var, t).formula(f)
}

pub fn substitute_term(e: &Term, var: &str, t: &Term) -> Term {
    Subst::new(var, t).term(e)
}

struct Subst<'a> {
    var: &'a str,
    replacement: &'a Term,
    replacement_fv: BTreeSet<String>,
}

impl<'a> Subst<'a> {
    fn new(var: &'a str, replacement: &'a Term) -> Self {
        Subst {
            var,
            replacement,
            replacement_fv: free_vars_term(replacement),
        }
    }

    fn formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(|a| self.term(a)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(self.term(l), self.term(r)),
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            Formula::Exists(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Exists(x, Box::new(body))
            }
            Formula::Forall(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Forall(x, Box::new(body))
            }
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) if x == self.var => self.replacement.clone(),
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Eps(x, body) => {
                let (x, body) = self.binder(x, body);
                Term::Eps(x, Box::new(body))
            }
            Term::Tau(x, body) => {
                let (x, body) = self.binder(x, body);
                Term::Tau(x, Box::new(body))
            }
        }
    }

    fn binder(&self, bound: &str, body: &Formula) -> (String, Formula) {
        if bound == self.var {
            return (bound.to_string(), body.clone());
        }
        let body_fv = free_vars(body);
        if !body_fv.contains(self.var) {
            return (bound.to_string(), body.clone());
        }
        if self.replacement_fv.contains(bound) {
            let mut avoid = body_fv;
            avoid.extend(self.replacement_fv.iter().cloned());
            let renamed = fresh_name(bound, &avoid);
            let body = substitute(body, bound, &Term::Var(renamed.clone()));
            (renamed, self.formula(&body))
        } else {
            (bound.to_string(), self.formula(body))
        }
    }
}

/// Renames every bound variable to a name determined only by its binder
/// depth. Two expressions are alpha-equivalent iff their canonical forms are
/// syntactically equal. Canonical names start with `%`, which the parser
/// never produces, so they cannot collide with free variables.
pub fn canonical(f: &Formula) -> Formula {
    Canon::default().formula(f)
}

pub fn canonical_term(t: &Term) -> Term {
    Canon::default().term(t)
}

#[derive(Default)]
struct Canon {
    scope: Vec<(String, String)>,
}

impl Canon {
    fn lookup(&self, x: &str) -> Option<&String> {
        self.scope.iter().rev().find(|(name, _)| name == x).map(|(_, c)| c)
    }

    fn enter(&mut self, x: &str) -> String {
        let name = format!("%{}", self.scope.len());
        self.scope.push((x.to_string(), name.clone()));
        name
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(|a| self.term(a)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(self.term(l), self.term(r)),
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            Formula::Exists(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Exists(x, Box::new(body))
            }
            Formula::Forall(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Forall(x, Box::new(body))
            }
        }
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(x) => Term::Var(self.lookup(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Eps(x, body) => {
                let (x, body) = self.binder(x, body);
                Term::Eps(x, Box::new(body))
            }
            Term::Tau(x, body) => {
                let (x, body) = self.binder(x, body);
                Term::Tau(x, Box::new(body))
            }
        }
    }

    fn binder(&mut self, x: &str, body: &Formula) -> (String, Formula) {
        let name = self.enter(x);
        let body = self.formula(body);
        self.scope.pop();
        (name, body)
    }
}

pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    a == b || canonical(a) == canonical(b)
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    a == b || canonical_term(a) == canonical_term(b)
}

/// Rewrites every `tau x. F` into `eps x. ~F`, bottom-up.
pub fn dual_normalize(f: &Formula) -> Formula {
    map_terms_bottom_up(f, &|t| match t {
        Term::Tau(x, body) => Term::Eps(x, Box::new(Formula::Not(body))),
        other => other,
    })
}

pub fn dual_normalize_term(t: &Term) -> Term {
    map_term_bottom_up(t, &|t| match t {
        Term::Tau(x, body) => Term::Eps(x, Box::new(Formula::Not(body))),
        other => other,
    })
}

fn map_terms_bottom_up(f: &Formula, g: &dyn Fn(Term) -> Term) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pred(p, args) => Formula::Pred(
            p.clone(),
            args.iter().map(|a| map_term_bottom_up(a, g)).collect(),
        ),
        Formula::Eq(l, r) => Formula::Eq(map_term_bottom_up(l, g), map_term_bottom_up(r, g)),
        Formula::Not(h) => Formula::not(map_terms_bottom_up(h, g)),
        Formula::And(a, b) => Formula::and(map_terms_bottom_up(a, g), map_terms_bottom_up(b, g)),
        Formula::Or(a, b) => Formula::or(map_terms_bottom_up(a, g), map_terms_bottom_up(b, g)),
        Formula::Implies(a, b) => {
            Formula::implies(map_terms_bottom_up(a, g), map_terms_bottom_up(b, g))
        }
        Formula::Exists(x, body) => Formula::exists(x.clone(), map_terms_bottom_up(body, g)),
        Formula::Forall(x, body) => Formula::forall(x.clone(), map_terms_bottom_up(body, g)),
    }
}

fn map_term_bottom_up(t: &Term, g: &dyn Fn(Term) -> Term) -> Term {
    let rebuilt = match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| map_term_bottom_up(a, g)).collect(),
        ),
        Term::Eps(x, body) => Term::Eps(x.clone(), Box::new(map_terms_bottom_up(body, g))),
        Term::Tau(x, body) => Term::Tau(x.clone(), Box::new(map_terms_bottom_up(body, g))),
    };
    g(rebuilt)
}

/// Replaces, innermost first, `exists x. F` by `F[x := eps x. F]` and
/// `forall x. F` by `F[x := tau x. F]`.
pub fn expand_quantifiers(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(expand_term).collect()),
        Formula::Eq(l, r) => Formula::Eq(expand_term(l), expand_term(r)),
        Formula::Not(g) => Formula::not(expand_quantifiers(g)),
        Formula::And(a, b) => Formula::and(expand_quantifiers(a), expand_quantifiers(b)),
        Formula::Or(a, b) => Formula::or(expand_quantifiers(a), expand_quantifiers(b)),
        Formula::Implies(a, b) => Formula::implies(expand_quantifiers(a), expand_quantifiers(b)),
        Formula::Exists(x, body) => {
            let body = expand_quantifiers(body);
            let witness = Term::Eps(x.clone(), Box::new(body.clone()));
            substitute(&body, x, &witness)
        }
        Formula::Forall(x, body) => {
            let body = expand_quantifiers(body);
            let witness = Term::Tau(x.clone(), Box::new(body.clone()));
            substitute(&body, x, &witness)
        }
    }
}

fn expand_term(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(expand_term).collect()),
        Term::Eps(x, body) => Term::Eps(x.clone(), Box::new(expand_quantifiers(body))),
        Term::Tau(x, body) => Term::Tau(x.clone(), Box::new(expand_quantifiers(body))),
    }
}

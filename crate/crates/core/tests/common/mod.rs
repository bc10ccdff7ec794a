//! Random formula generators shared by the integration tests.
#![allow(dead_code)]

use aieo_core::syntax::{Formula, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

const UNARY: [&str; 2] = ["S", "P"];
const BOUND_VARS: [&str; 3] = ["y", "z", "w"];

/// A formula over unary `S` and `P` whose only free variable is `x`, with
/// depth at most `depth`.
pub fn formula_in_x(rng: &mut StdRng, depth: usize) -> Formula {
    open_formula(rng, depth, &["x".to_string()])
}

fn open_term(rng: &mut StdRng, depth: usize, scope: &[String]) -> Term {
    if depth == 0 || rng.gen_bool(0.75) {
        return Term::var(scope.choose(rng).unwrap().clone());
    }
    let v = BOUND_VARS[rng.gen_range(0..BOUND_VARS.len())].to_string();
    let mut inner = scope.to_vec();
    inner.push(v.clone());
    let body = open_formula(rng, depth - 1, &inner);
    if rng.gen_bool(0.5) {
        Term::eps(v, body)
    } else {
        Term::tau(v, body)
    }
}

fn open_formula(rng: &mut StdRng, depth: usize, scope: &[String]) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let arg = open_term(rng, depth, scope);
        return Formula::unary(UNARY[rng.gen_range(0..2)], arg);
    }
    let sub = |rng: &mut StdRng| open_formula(rng, depth - 1, scope);
    match rng.gen_range(0..7) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 | 5 => {
            let v = BOUND_VARS[rng.gen_range(0..BOUND_VARS.len())].to_string();
            let mut inner = scope.to_vec();
            inner.push(v.clone());
            let body = open_formula(rng, depth - 1, &inner);
            if rng.gen_bool(0.5) {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
        _ => {
            let arg = open_term(rng, depth, scope);
            Formula::unary(UNARY[rng.gen_range(0..2)], arg)
        }
    }
}

const VARS: [&str; 4] = ["x", "y", "z", "v"];
const CONSTS: [&str; 3] = ["a", "b", "c"];
const PREDS: [(&str, usize); 4] = [("P", 1), ("S", 1), ("R", 2), ("Q", 0)];
const FUNS: [(&str, usize); 2] = [("f", 1), ("g", 2)];

/// An arbitrary syntax tree of depth at most `depth`, free variables allowed.
pub fn any_formula(rng: &mut StdRng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::eq(any_term(rng, depth), any_term(rng, depth)),
            _ => {
                let (p, n) = PREDS[rng.gen_range(0..PREDS.len())];
                Formula::pred(p, (0..n).map(|_| any_term(rng, depth)).collect())
            }
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Formula::not(any_formula(rng, d)),
        1 => Formula::and(any_formula(rng, d), any_formula(rng, d)),
        2 => Formula::or(any_formula(rng, d), any_formula(rng, d)),
        3 => Formula::implies(any_formula(rng, d), any_formula(rng, d)),
        4 => Formula::exists(VARS[rng.gen_range(0..VARS.len())], any_formula(rng, d)),
        _ => Formula::forall(VARS[rng.gen_range(0..VARS.len())], any_formula(rng, d)),
    }
}

pub fn any_term(rng: &mut StdRng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.6) {
            Term::var(VARS[rng.gen_range(0..VARS.len())])
        } else {
            Term::constant(CONSTS[rng.gen_range(0..CONSTS.len())])
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..3) {
        0 => {
            let (f, n) = FUNS[rng.gen_range(0..FUNS.len())];
            Term::app(f, (0..n).map(|_| any_term(rng, d)).collect())
        }
        1 => Term::eps(VARS[rng.gen_range(0..VARS.len())], any_formula(rng, d)),
        _ => Term::tau(VARS[rng.gen_range(0..VARS.len())], any_formula(rng, d)),
    }
}

//! Pretty-printer producing the concrete syntax with minimal parentheses.

use std::collections::BTreeSet;
use std::fmt::{self, Display, Formatter, Write};

use super::{fresh_name, free_vars, substitute, Formula, Term};

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        formula(f, self, 0, true)
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        term(f, self, true)
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// `min` is the weakest operator allowed without parentheses; `open` says
/// whether the text may extend to the end of the enclosing group, which is
/// what a binder needs to stand unparenthesized.
fn formula(out: &mut Formatter<'_>, f: &Formula, min: u8, open: bool) -> fmt::Result {
    let needs_binder_parens = matches!(f, Formula::Exists(..) | Formula::Forall(..)) && !open;
    if precedence(f) < min || needs_binder_parens {
        out.write_char('(')?;
        formula(out, f, 0, true)?;
        return out.write_char(')');
    }
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Pred(p, args) => application(out, p, args),
        Formula::Eq(l, r) => {
            term(out, l, false)?;
            out.write_str(" = ")?;
            term(out, r, open)
        }
        Formula::Not(g) => {
            out.write_char('~')?;
            formula(out, g, UNARY, open)
        }
        Formula::And(a, b) => binary(out, a, " & ", b, AND, UNARY, open),
        Formula::Or(a, b) => binary(out, a, " | ", b, OR, AND, open),
        Formula::Implies(a, b) => binary(out, a, " -> ", b, OR, IMPLIES, open),
        Formula::Exists(x, body) => binder(out, "exists", x, body, open),
        Formula::Forall(x, body) => binder(out, "forall", x, body, open),
    }
}

fn binary(
    out: &mut Formatter<'_>,
    lhs: &Formula,
    op: &str,
    rhs: &Formula,
    lhs_min: u8,
    rhs_min: u8,
    open: bool,
) -> fmt::Result {
    formula(out, lhs, lhs_min, false)?;
    out.write_str(op)?;
    formula(out, rhs, rhs_min, open)
}

fn binder(out: &mut Formatter<'_>, keyword: &str, x: &str, body: &Formula, open: bool) -> fmt::Result {
    // A constant spelled like the bound variable would be read back as bound.
    let clashing = constants(body);
    if clashing.contains(x) {
        let mut avoid = clashing;
        avoid.extend(free_vars(body));
        let renamed = fresh_name(x, &avoid);
        let body = substitute(body, x, &Term::Var(renamed.clone()));
        return binder(out, keyword, &renamed, &body, open);
    }
    write!(out, "{keyword} {x}. ")?;
    formula(out, body, 0, open)
}

fn application(out: &mut Formatter<'_>, symbol: &str, args: &[Term]) -> fmt::Result {
    out.write_str(symbol)?;
    out.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        term(out, a, true)?;
    }
    out.write_char(')')
}

fn term(out: &mut Formatter<'_>, t: &Term, open: bool) -> fmt::Result {
    match t {
        Term::Var(x) | Term::Const(x) => out.write_str(x),
        Term::App(f, args) => application(out, f, args),
        Term::Eps(..) | Term::Tau(..) if !open => {
            out.write_char('(')?;
            term(out, t, true)?;
            out.write_char(')')
        }
        Term::Eps(x, body) => binder(out, "eps", x, body, true),
        Term::Tau(x, body) => binder(out, "tau", x, body, true),
    }
}

fn constants(f: &Formula) -> BTreeSet<String> {
    fn in_term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| in_term(a, out)),
            Term::Eps(_, b) | Term::Tau(_, b) => in_formula(b, out),
        }
    }
    fn in_formula(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Pred(_, args) => args.iter().for_each(|a| in_term(a, out)),
            Formula::Eq(l, r) => {
                in_term(l, out);
                in_term(r, out)
            }
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => in_formula(g, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                in_formula(a, out);
                in_formula(b, out)
            }
        }
    }
    let mut out = BTreeSet::new();
    in_formula(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use crate::syntax::{alpha_eq, parse_formula, Formula, Term};

    fn round(src: &str) -> String {
        parse_formula(src).unwrap().to_string()
    }

    #[test]
    fn normal_spacing_is_a_fixpoint() {
        for src in [
            "P(eps x. S(x))",
            "~P(tau x. S(x))",
            "P(eps x. S(x)) & S(eps x. S(x))",
            "(exists x. S(x)) & P(c)",
            "P(c) & exists x. S(x)",
            "P(c) & (exists x. S(x)) | Q(c)",
            "A() -> B() -> C()",
            "(A() -> B()) -> C()",
            "A() & (B() & C())",
            "~(A() | B())",
            "~exists x. S(x)",
            "(eps x. S(x)) = c",
            "c = eps x. S(x)",
            "c = (eps x. S(x)) & P(c)",
            "R(eps x. S(x) | P(x), tau y. R(y, y))",
            "true & ~false",
        ] {
            assert_eq!(round(src), src);
        }
    }

    #[test]
    fn redundant_parentheses_are_dropped() {
        assert_eq!(round("((P(x)) & (Q(x)))"), "P(x) & Q(x)");
        assert_eq!(round("(A() | B()) | C()"), "A() | B() | C()");
    }

    #[test]
    fn binder_named_like_a_constant_is_renamed() {
        let f = Formula::exists(
            "c",
            Formula::pred("R", vec![Term::var("c"), Term::constant("c")]),
        );
        let printed = f.to_string();
        assert_eq!(printed, "exists c'. R(c', c)");
        assert!(alpha_eq(&parse_formula(&printed).unwrap(), &f));
    }
}

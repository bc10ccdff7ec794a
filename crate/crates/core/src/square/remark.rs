use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{Oracle, SquareError};
use crate::syntax::{Formula, Term};

/// Any four closed formulas in the roles of A, E, I and O.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadruple {
    pub a: Formula,
    pub e: Formula,
    pub i: Formula,
    pub o: Formula,
}

impl Quadruple {
    pub fn new(a: Formula, e: Formula, i: Formula, o: Formula) -> Quadruple {
        Quadruple { a, e, i, o }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum RemarkViolation {
    /// Conditions i and ii hold, iii fails.
    SubcontrariesNotImplied(Quadruple),
    /// Condition i and `A |- I` hold, `E |- O` fails.
    SubalternNotImplied(Quadruple),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RemarkReport {
    pub exhaustive: usize,
    pub random: usize,
    /// Quadruples where conditions i and ii both hold.
    pub i_and_ii: usize,
    /// Quadruples where condition i and `A |- I` both hold.
    pub i_and_a_i: usize,
    pub violations: Vec<RemarkViolation>,
}

impl RemarkReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Closed formulas over `S` and `P` used for the exhaustive sweep.
pub fn remark_pool() -> Vec<Formula> {
    let x = |p: &str| Formula::unary(p, Term::var("x"));
    let base = vec![
        Formula::unary("P", Term::eps("x", x("S"))),
        Formula::unary("P", Term::tau("x", x("S"))),
        Formula::unary("S", Term::eps("x", x("P"))),
        Formula::unary("S", Term::tau("x", x("P"))),
        Formula::True,
        Formula::False,
    ];
    let negated: Vec<Formula> = base.iter().cloned().map(Formula::not).collect();
    base.into_iter().chain(negated).collect()
}

fn random_atom(rng: &mut StdRng) -> Formula {
    let preds = ["S", "P"];
    let outer = preds[rng.gen_range(0..2)];
    let inner = Formula::unary(preds[rng.gen_range(0..2)], Term::var("x"));
    let inner = if rng.gen_bool(0.3) { Formula::not(inner) } else { inner };
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        2..=5 => Formula::unary(outer, Term::eps("x", inner)),
        _ => Formula::unary(outer, Term::tau("x", inner)),
    }
}

/// A random closed formula over `S` and `P` with connective depth at most `depth`.
pub fn random_closed_formula(rng: &mut StdRng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return random_atom(rng);
    }
    let sub = |rng: &mut StdRng| random_closed_formula(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

/// Half of the random quadruples are built with `E = ~I` and `O = ~A`, so
/// that condition i holds and the implications are not vacuous.
fn random_quadruples(seed: u64, count: usize) -> Vec<Quadruple> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let a = random_closed_formula(&mut rng, 2);
            let i = random_closed_formula(&mut rng, 2);
            if k % 2 == 0 {
                Quadruple::new(a.clone(), Formula::not(i.clone()), i, Formula::not(a))
            } else {
                let e = random_closed_formula(&mut rng, 2);
                let o = random_closed_formula(&mut rng, 2);
                Quadruple::new(a, e, i, o)
            }
        })
        .collect()
}

struct Tally<'a> {
    oracle: &'a dyn Oracle,
    report: RemarkReport,
}

impl Tally<'_> {
    fn equiv(&self, x: &Formula, y: &Formula) -> Result<bool, SquareError> {
        let o = self.oracle;
        Ok(o.holds(std::slice::from_ref(x), y)? && o.holds(std::slice::from_ref(y), x)?)
    }

    fn visit(&mut self, q: &Quadruple) -> Result<(), SquareError> {
        let o = self.oracle;
        let cond_i = self.equiv(&q.a, &Formula::not(q.o.clone()))? && self.equiv(&q.e, &Formula::not(q.i.clone()))?;
        if !cond_i {
            return Ok(());
        }
        let cond_ii = !(o.holds(&[], &q.a)? && o.holds(&[], &q.e)?);
        if cond_ii {
            self.report.i_and_ii += 1;
            let cond_iii = !(o.holds(std::slice::from_ref(&q.i), &Formula::False)?
                && o.holds(std::slice::from_ref(&q.e), &Formula::False)?);
            if !cond_iii {
                self.report.violations.push(RemarkViolation::SubcontrariesNotImplied(q.clone()));
            }
        }
        if o.holds(std::slice::from_ref(&q.a), &q.i)? {
            self.report.i_and_a_i += 1;
            if !o.holds(std::slice::from_ref(&q.e), &q.o)? {
                self.report.violations.push(RemarkViolation::SubalternNotImplied(q.clone()));
            }
        }
        Ok(())
    }
}

/// Tests the two redundancy claims about the square's conditions, over
/// every quadruple drawn from [`remark_pool`] and `random` seeded random
/// quadruples: i and ii give iii; i and `A |- I` give `E |- O`.
pub fn remark_check(oracle: &dyn Oracle, random: usize, seed: u64) -> Result<RemarkReport, SquareError> {
    let mut t = Tally {
        oracle,
        report: RemarkReport::default(),
    };
    let pool = remark_pool();
    for a in &pool {
        for e in &pool {
            for i in &pool {
                for o in &pool {
                    t.visit(&Quadruple::new(a.clone(), e.clone(), i.clone(), o.clone()))?;
                    t.report.exhaustive += 1;
                }
            }
        }
    }
    for q in random_quadruples(seed, random) {
        t.visit(&q)?;
        t.report.random += 1;
    }
    Ok(t.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::{AieoSquare, SemanticOracle};
    use crate::syntax::{free_vars, parse_formula, Signature};

    #[test]
    fn random_formulas_are_closed_and_shallow() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_closed_formula(&mut rng, 2);
            assert!(free_vars(&f).is_empty(), "{f}");
        }
    }

    #[test]
    fn the_square_itself_satisfies_the_remark() {
        let theory = vec![parse_formula("P(tau x. S(x)) -> P(eps x. S(x))").unwrap()];
        let oracle = SemanticOracle::new(&Signature::unary_predicates(["S", "P"]), theory, 2).unwrap();
        let sq = AieoSquare::new("S", "P", false);
        let mut t = Tally {
            oracle: &oracle,
            report: RemarkReport::default(),
        };
        t.visit(&Quadruple::new(sq.a, sq.e, sq.i, sq.o)).unwrap();
        assert_eq!((t.report.i_and_ii, t.report.i_and_a_i), (1, 1));
        assert!(t.report.ok());
    }

    #[test]
    fn degenerate_quadruple() {
        let oracle = SemanticOracle::new(&Signature::unary_predicates(["S", "P"]), vec![], 2).unwrap();
        let mut t = Tally {
            oracle: &oracle,
            report: RemarkReport::default(),
        };
        let q = Quadruple::new(Formula::False, Formula::True, Formula::False, Formula::True);
        t.visit(&q).unwrap();
        assert_eq!(t.report.i_and_a_i, 1);
        assert!(t.report.ok());
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let oracle = SemanticOracle::new(&Signature::unary_predicates(["S", "P"]), vec![], 2).unwrap();
        let report = remark_check(&oracle, 100, 1).unwrap();
        assert_eq!(report.exhaustive, 12usize.pow(4));
        assert_eq!(report.random, 100);
        assert!(report.i_and_ii > 0 && report.i_and_a_i > 0);
        assert!(report.ok(), "{:?}", report.violations);
    }
}
